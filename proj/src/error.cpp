#include "mvboot/error.hpp"

namespace mvboot {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::DegenerateResiduals: return "DegenerateResiduals";
    case ErrorKind::SingularResamples: return "SingularResamples";
    case ErrorKind::InsufficientDraws: return "InsufficientDraws";
    case ErrorKind::GradientMismatch: return "GradientMismatch";
    case ErrorKind::UnequalSupportSizes: return "UnequalSupportSizes";
    case ErrorKind::BlockNotSPD: return "BlockNotSPD";
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonNumericCell: return "NonNumericCell";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::RankDeficientAfterEncoding: return "RankDeficientAfterEncoding";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mvboot
