#pragma once

#include <string>
#include <vector>

#include "mvboot/linalg.hpp"

namespace mvboot {

// Design X (n x p, one row per case) and responses Y (n x r). Construction
// enforces n > p, r >= 1, matching row counts, and finite entries. No
// intercept is ever added here; callers put a column of ones in X if they
// want one.
class Dataset {
 public:
  Dataset(Mat x, Mat y, std::vector<std::string> predictor_names = {},
          std::vector<std::string> response_names = {});

  const Mat& x() const noexcept { return x_; }
  const Mat& y() const noexcept { return y_; }
  Index n() const noexcept { return x_.rows(); }
  Index p() const noexcept { return x_.cols(); }
  Index r() const noexcept { return y_.cols(); }
  const std::vector<std::string>& predictor_names() const noexcept { return predictor_names_; }
  const std::vector<std::string>& response_names() const noexcept { return response_names_; }

 private:
  Mat x_;
  Mat y_;
  std::vector<std::string> predictor_names_;
  std::vector<std::string> response_names_;
};

struct ErrorCovariance {
  Mat sigma;  // r x r, symmetric nonnegative definite
  Vec mu;     // r
};

// Sigma = n^{-1} sum_i e_i e_i^T - mu mu^T with mu = n^{-1} sum_i e_i, i.e.
// the divisor-n covariance of the residual rows. Throws InvalidArgument for
// n < 2 and DegenerateResiduals if the result has an eigenvalue below
// -1e-10 (relative to its largest entry, floored at 1).
ErrorCovariance sigma_hat(const Mat& residuals);

struct FitResult {
  Mat beta_hat;   // r x p
  Mat residuals;  // n x r, row i = (Y_i - beta_hat X_i)^T
  Mat sigma_hat;  // r x r
  Vec mu_hat;     // r
  SpdMat xtx;     // X^T X
};

// beta_hat = Y^T X (X^T X)^{-1}, solved through the Cholesky factor of X^T X.
// Throws SingularDesign when X^T X fails the SPD tolerance.
FitResult fit_ols(const Dataset& data);
FitResult fit_ols(const Mat& x, const Mat& y);

// Wraps SpdMat construction of X^T X, mapping NearSingular to SingularDesign.
SpdMat gram_or_throw(const Mat& x);

}  // namespace mvboot
