#include <catch_amalgamated.hpp>

#include "mvboot/error.hpp"
#include "mvboot/model.hpp"
#include "mvboot/rng.hpp"
#include "support/oracles.hpp"

using namespace mvboot;

namespace {

Mat random_mat(Stream& s, Index rows, Index cols) {
  Mat a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = s.normal();
  return a;
}

double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("Dataset invariants") {
  CHECK_THROWS_AS(Dataset(Mat::Ones(3, 1), Mat::Ones(2, 1)), Error);
  CHECK_THROWS_AS(Dataset(Mat::Ones(2, 2), Mat::Ones(2, 1)), Error);
  Mat bad = Mat::Ones(4, 1);
  bad(2, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Dataset(Mat::Ones(4, 1), bad), Error);
  const Dataset d(Mat::Ones(3, 1), Mat::Ones(3, 2));
  CHECK(d.predictor_names() == std::vector<std::string>{"x1"});
  CHECK(d.response_names() == std::vector<std::string>{"y1", "y2"});
}

TEST_CASE("noiseless data is recovered exactly") {
  Stream s(41);
  const Mat x = random_mat(s, 20, 3);
  const Mat beta = random_mat(s, 2, 3);
  const FitResult fit = fit_ols(x, x * beta.transpose());
  CHECK(max_abs(fit.beta_hat - beta) <= 1e-10);
  CHECK(max_abs(fit.sigma_hat) <= 1e-12);
}

TEST_CASE("line through the origin") {
  Mat x(2, 1), y(2, 1);
  x << 1, 2;
  y << 2, 4;
  CHECK(fit_ols(x, y).beta_hat(0, 0) == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("OLS matches the normal-equation oracle") {
  Mat x(3, 2), beta(2, 2), e(3, 2);
  x << 1, 0, 0, 1, 1, 1;
  beta << 1.5, -2.0, 0.25, 3.0;
  e << 0.1, -0.2, -0.3, 0.05, 0.2, 0.4;
  const Mat y = x * beta.transpose() + e;
  CHECK(max_abs(fit_ols(x, y).beta_hat - oracle::ols(x, y)) <= 1e-10);

  Stream s(43);
  for (int t = 0; t < 10; ++t) {
    const Mat xr = random_mat(s, 40, 4), yr = random_mat(s, 40, 3);
    CHECK(max_abs(fit_ols(xr, yr).beta_hat - oracle::ols(xr, yr)) <= 1e-10);
  }
}

TEST_CASE("residuals are orthogonal to the design") {
  Stream s(47);
  const Mat x = random_mat(s, 50, 3), y = random_mat(s, 50, 2);
  const FitResult fit = fit_ols(x, y);
  CHECK(max_abs(fit.residuals - (y - x * fit.beta_hat.transpose())) <= 1e-12);
  CHECK(max_abs(x.transpose() * fit.residuals) <= 1e-8);
}

TEST_CASE("collinear design is SingularDesign") {
  Mat x(5, 2);
  x << 1, 2, 2, 4, 3, 6, 4, 8, 5, 10;
  try {
    fit_ols(x, Mat::Ones(5, 1));
    FAIL("expected SingularDesign");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularDesign);
  }
}

TEST_CASE("sigma_hat examples") {
  const ErrorCovariance zero = sigma_hat(Mat::Zero(5, 3));
  CHECK(zero.sigma == Mat::Zero(3, 3));
  CHECK(zero.mu == Vec::Zero(3));

  Mat two(2, 2);
  two << 1, 0, -1, 0;
  const ErrorCovariance c = sigma_hat(two);
  CHECK(c.mu == Vec::Zero(2));
  CHECK(c.sigma == (Mat(2, 2) << 1, 0, 0, 0).finished());

  CHECK_THROWS_AS(sigma_hat(Mat::Ones(1, 2)), Error);
}

TEST_CASE("sigma_hat matches a direct 1/n accumulation") {
  Stream s(53);
  const Mat e = random_mat(s, 50, 4) + Mat::Constant(50, 4, 0.7);
  const ErrorCovariance c = sigma_hat(e);
  CHECK(max_abs(c.sigma - oracle::covariance(e, 0)) <= 1e-12);
  CHECK(max_abs(c.mu - e.colwise().mean().transpose()) <= 1e-14);
  CHECK(max_asymmetry(c.sigma) == 0.0);
}

TEST_CASE("refitting fitted values is idempotent") {
  Stream s(59);
  const Mat x = random_mat(s, 30, 3), y = random_mat(s, 30, 2);
  const FitResult fit = fit_ols(x, y);
  const FitResult again = fit_ols(x, x * fit.beta_hat.transpose());
  CHECK(max_abs(again.beta_hat - fit.beta_hat) <= 1e-10);
}

TEST_CASE("scale equivariance") {
  Stream s(61);
  const Mat x = random_mat(s, 30, 3), y = random_mat(s, 30, 2);
  const double c = -3.5;
  const FitResult a = fit_ols(x, y), b = fit_ols(x, c * y);
  CHECK(max_abs(b.beta_hat - c * a.beta_hat) <= 1e-10 * max_abs(b.beta_hat));
  CHECK(max_abs(b.sigma_hat - c * c * a.sigma_hat) <= 1e-10 * max_abs(b.sigma_hat));
}

TEST_CASE("intercept makes residual means vanish") {
  Stream s(67);
  Mat x = random_mat(s, 40, 3);
  x.col(0).setOnes();
  const Mat y = random_mat(s, 40, 3) + Mat::Constant(40, 3, 5.0);
  const FitResult fit = fit_ols(x, y);
  CHECK(fit.mu_hat.cwiseAbs().maxCoeff() <= 1e-10);
  const Mat raw = fit.residuals.transpose() * fit.residuals / 40.0;
  CHECK(max_abs(fit.sigma_hat - raw) <= 1e-10);
}
