#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvboot {

enum class ErrorKind {
  AsymmetricInput,
  NearSingular,
  NotPositiveDefinite,
  DimensionMismatch,
  InvalidArgument,
  SingularDesign,
  DegenerateResiduals,
  SingularResamples,
  InsufficientDraws,
  GradientMismatch,
  UnequalSupportSizes,
  BlockNotSPD,
  MissingColumn,
  NonNumericCell,
  EmptyData,
  RankDeficientAfterEncoding,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure the library reports carries a kind so the CLI can map it to
// an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mvboot
