#include "mvboot/model.hpp"

#include <algorithm>
#include <sstream>

#include "mvboot/error.hpp"

namespace mvboot {

namespace {

std::vector<std::string> default_names(std::string_view stem, Index count) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) names.push_back(std::string(stem) + std::to_string(i + 1));
  return names;
}

}  // namespace

Dataset::Dataset(Mat x, Mat y, std::vector<std::string> predictor_names,
                 std::vector<std::string> response_names)
    : x_(std::move(x)), y_(std::move(y)),
      predictor_names_(std::move(predictor_names)), response_names_(std::move(response_names)) {
  if (x_.rows() != y_.rows())
    throw Error(ErrorKind::DimensionMismatch, "Dataset: X and Y have different row counts");
  if (x_.cols() < 1 || y_.cols() < 1)
    throw Error(ErrorKind::InvalidArgument, "Dataset: need at least one predictor and one response");
  if (x_.rows() <= x_.cols()) {
    std::ostringstream msg;
    msg << "Dataset: need n > p, got n=" << x_.rows() << " p=" << x_.cols();
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  if (!x_.allFinite() || !y_.allFinite())
    throw Error(ErrorKind::InvalidArgument, "Dataset: non-finite entry");
  if (predictor_names_.empty()) predictor_names_ = default_names("x", x_.cols());
  if (response_names_.empty()) response_names_ = default_names("y", y_.cols());
  if (static_cast<Index>(predictor_names_.size()) != x_.cols() ||
      static_cast<Index>(response_names_.size()) != y_.cols())
    throw Error(ErrorKind::DimensionMismatch, "Dataset: name count does not match column count");
}

ErrorCovariance sigma_hat(const Mat& residuals) {
  const Index n = residuals.rows();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "sigma_hat: need at least two residual rows");
  const double inv_n = 1.0 / static_cast<double>(n);
  Vec mu = residuals.colwise().sum().transpose() * inv_n;
  Mat second = residuals.transpose() * residuals * inv_n;
  Mat sigma = symmetrized(second - mu * mu.transpose());

  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if (min_eigenvalue(sigma) < -1e-10 * scale)
    throw Error(ErrorKind::DegenerateResiduals, "sigma_hat: residual covariance is not nonnegative definite");
  return {std::move(sigma), std::move(mu)};
}

SpdMat gram_or_throw(const Mat& x) {
  auto gram = SpdMat::try_make(x.transpose() * x);
  if (!gram)
    throw Error(ErrorKind::SingularDesign,
                "X^T X is singular within tolerance; predictors are collinear");
  return std::move(*gram);
}

FitResult fit_ols(const Mat& x, const Mat& y) {
  SpdMat xtx = gram_or_throw(x);
  Mat beta = xtx.solve(x.transpose() * y).transpose();
  Mat residuals = y - x * beta.transpose();
  auto [sigma, mu] = sigma_hat(residuals);
  return FitResult{std::move(beta), std::move(residuals), std::move(sigma), std::move(mu), std::move(xtx)};
}

FitResult fit_ols(const Dataset& data) { return fit_ols(data.x(), data.y()); }

}  // namespace mvboot
