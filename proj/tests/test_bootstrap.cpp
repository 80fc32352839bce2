#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <map>

#include "mvboot/asymptotics.hpp"
#include "mvboot/bootstrap.hpp"
#include "mvboot/error.hpp"
#include "mvboot/rng.hpp"
#include "mvboot/simulate.hpp"
#include "support/oracles.hpp"

using namespace mvboot;

namespace {

Mat col(std::initializer_list<double> v) {
  Mat a(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (const double x : v) a(i++, 0) = x;
  return a;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an mvboot::Error");
  return ErrorKind::IoError;
}

BootConfig config(std::size_t b, std::uint64_t seed) {
  BootConfig c;
  c.replicates = b;
  c.seed = seed;
  return c;
}

struct ThreadsGuard {
  explicit ThreadsGuard(const char* v) { setenv("MVBOOT_THREADS", v, 1); }
  ~ThreadsGuard() { unsetenv("MVBOOT_THREADS"); }
};

}  // namespace

TEST_CASE("BootConfig validation and defaults") {
  CHECK(BootConfig::with_default_replicates(32, 1).replicates == 128);
  CHECK(kind_of([] { config(1, 0).validate(); }) == ErrorKind::InvalidArgument);
  BootConfig c = config(10, 0);
  c.alpha = 1.0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("zero residuals give degenerate draws") {
  Mat x(6, 2);
  x << 1, 0, 1, 1, 1, 2, 1, 3, 1, 4, 1, 5;
  Mat beta(2, 2);
  beta << 1, 2, -1, 0.5;
  const FitResult fit = fit_ols(x, x * beta.transpose());
  const BootstrapDraws d = residual_bootstrap(fit, x, config(50, 3));
  for (Index b = 0; b < d.draws.rows(); ++b)
    CHECK((d.draws.row(b).transpose() - vec(fit.beta_hat)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(d.var_star.cwiseAbs().maxCoeff() <= 1e-20);
}

TEST_CASE("residual bootstrap with two observations lands on the enumerated set") {
  // X = ones, residuals -1 and +1, so beta* = beta_hat + mean of two draws.
  const Mat x = col({1, 1});
  const FitResult fit = fit_ols(x, col({2, 4}));
  REQUIRE(fit.beta_hat(0, 0) == Catch::Approx(3.0));
  std::map<int, int> seen;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const BootstrapDraws d = residual_bootstrap(fit, x, config(2, seed));
    for (Index b = 0; b < 2; ++b) {
      const double shift = d.draws(b, 0) - 3.0;
      const int k = static_cast<int>(std::lround(shift));
      REQUIRE(std::fabs(shift - k) < 1e-12);
      REQUIRE(std::abs(k) <= 1);
      ++seen[k];
    }
  }
  // 800 draws; probabilities 1/4, 1/2, 1/4.
  CHECK(std::fabs(seen[-1] - 200.0) < 4 * std::sqrt(800 * 0.25 * 0.75));
  CHECK(std::fabs(seen[0] - 400.0) < 4 * std::sqrt(800 * 0.25));
  CHECK(std::fabs(seen[1] - 200.0) < 4 * std::sqrt(800 * 0.25 * 0.75));
}

TEST_CASE("pairs bootstrap with two cases matches exact enumeration") {
  const Dataset data(col({1, 2}), col({1, 4}));
  const BootstrapDraws d = pairs_bootstrap(data, config(10000, 5));
  double ones = 0, twos = 0, mixed = 0;
  for (Index b = 0; b < d.draws.rows(); ++b) {
    const double v = d.draws(b, 0);
    if (std::fabs(v - 1.0) < 1e-12) ++ones;
    else if (std::fabs(v - 2.0) < 1e-12) ++twos;
    else if (std::fabs(v - 1.8) < 1e-12) ++mixed;
    else FAIL("unexpected draw " << v);
  }
  const double n = 10000;
  auto band = [n](double p) { return 3.0 * std::sqrt(n * p * (1 - p)); };
  CHECK(std::fabs(ones - n / 4) <= band(0.25));
  CHECK(std::fabs(twos - n / 4) <= band(0.25));
  CHECK(std::fabs(mixed - n / 2) <= band(0.5));
  CHECK(d.redraws == 0);
}

TEST_CASE("pairs bootstrap of a point mass") {
  Mat y(8, 2);
  y.col(0).setConstant(3.0);
  y.col(1).setConstant(-1.0);
  const BootstrapDraws d = pairs_bootstrap(Dataset(Mat::Constant(8, 1, 2.0), y), config(30, 9));
  for (Index b = 0; b < d.draws.rows(); ++b) {
    CHECK(d.draws(b, 0) == Catch::Approx(1.5).epsilon(1e-14));
    CHECK(d.draws(b, 1) == Catch::Approx(-0.5).epsilon(1e-14));
  }
  CHECK(d.var_star.cwiseAbs().maxCoeff() <= 1e-20);
}

TEST_CASE("pairs bootstrap redraws singular resamples") {
  Mat x = Mat::Zero(10, 1);
  x(9, 0) = 1.0;
  Mat y = Mat::Zero(10, 1);
  y(9, 0) = 2.0;
  for (Index i = 0; i < 9; ++i) y(i, 0) = 0.1 * static_cast<double>(i);
  const Dataset data(x, y);
  const BootstrapDraws d = pairs_bootstrap(data, config(200, 11));
  CHECK(d.redraws > 0);
  for (Index b = 0; b < d.draws.rows(); ++b) CHECK(d.draws(b, 0) == Catch::Approx(2.0));

  BootConfig strict = config(200, 11);
  strict.max_redraws = 0;
  CHECK(kind_of([&] { pairs_bootstrap(data, strict); }) == ErrorKind::SingularResamples);
}

TEST_CASE("var_star closed forms") {
  Mat same(5, 3);
  same.rowwise() = (Vec(3) << 1, 2, 3).finished().transpose();
  CHECK(var_star(same) == Mat::Zero(3, 3));

  const Vec u = (Vec(3) << 1, -2, 0.5).finished(), v = (Vec(3) << 0, 1, 4).finished();
  Mat two(2, 3);
  two.row(0) = u.transpose();
  two.row(1) = v.transpose();
  CHECK((var_star(two) - 0.5 * (u - v) * (u - v).transpose()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("var_star matches an independent accumulation") {
  Stream s(71);
  Mat draws(20, 6);
  for (Index i = 0; i < 20; ++i)
    for (Index j = 0; j < 6; ++j) draws(i, j) = s.normal() * (j + 1) + j;
  const Mat v = var_star(draws);
  CHECK((v - oracle::covariance(draws, 1)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(v == v.transpose());
}

TEST_CASE("stored var_star is recomputable from stored draws") {
  const FixedDesignSpec spec = default_experiment_config().fixed_spec(60, 5);
  const Dataset data = gen_fixed(spec);
  const FitResult fit = fit_ols(data);
  const BootstrapDraws a = residual_bootstrap(fit, data.x(), config(100, 1));
  CHECK(var_star(a.draws) == a.var_star);
  const BootstrapDraws b = pairs_bootstrap(data, config(100, 1));
  CHECK(var_star(b.draws) == b.var_star);
  CHECK(min_eigenvalue(a.var_star) >= -1e-12);
}

TEST_CASE("percentile interval rank rule") {
  Mat draws(100, 1);
  for (Index i = 0; i < 100; ++i) draws(i, 0) = static_cast<double>(100 - i);
  const IntervalTable t = percentile_interval(draws, 0.05);
  CHECK(t.method == "percentile");
  CHECK(t.components[0].lower == 3.0);
  CHECK(t.components[0].upper == 98.0);

  const IntervalTable c = percentile_interval(Mat::Constant(50, 2, 4.25), 0.05);
  CHECK(c.components[1].lower == 4.25);
  CHECK(c.components[1].upper == 4.25);

  // B alpha / 2 = 1 exactly after rounding tolerance: ranks 1 and 40.
  Mat forty(40, 1);
  for (Index i = 0; i < 40; ++i) forty(i, 0) = static_cast<double>(i + 1);
  const IntervalTable f = percentile_interval(forty, 0.05);
  CHECK(f.components[0].lower == 1.0);
  CHECK(f.components[0].upper == 39.0);

  CHECK(kind_of([] { percentile_interval(Mat::Zero(20, 1), 0.05); }) == ErrorKind::InsufficientDraws);
}

TEST_CASE("draws do not depend on the worker count") {
  const JointDesignSpec spec = default_experiment_config().joint_spec(80, 13);
  const Dataset data = gen_joint(spec);
  const FitResult fit = fit_ols(data);
  Mat r1, r8, p1, p8;
  {
    ThreadsGuard g("1");
    r1 = residual_bootstrap(fit, data.x(), config(64, 2)).draws;
    p1 = pairs_bootstrap(data, config(64, 2)).draws;
  }
  {
    ThreadsGuard g("8");
    r8 = residual_bootstrap(fit, data.x(), config(64, 2)).draws;
    p8 = pairs_bootstrap(data, config(64, 2)).draws;
  }
  CHECK(r1 == r8);
  CHECK(p1 == p8);
  CHECK(residual_bootstrap(fit, data.x(), config(64, 3)).draws != r1);
}

TEST_CASE("resampled indices are uniform") {
  const Index n = 10;
  const std::size_t b_count = 2000;
  std::vector<double> freq(n, 0.0);
  for (std::size_t b = 0; b < b_count; ++b)
    for (const std::size_t i : replicate_indices(21, b, n)) freq[i] += 1.0;
  const double total = static_cast<double>(n * b_count);
  const double p = 1.0 / n;
  const double tol = 4.0 * std::sqrt(p * (1 - p) / total);
  for (const double f : freq) CHECK(std::fabs(f / total - p) <= tol);
}

TEST_CASE("resampled residuals are centered") {
  const FixedDesignSpec spec = default_experiment_config().fixed_spec(50, 8);
  const Dataset data = gen_fixed(spec);
  const FitResult fit = fit_ols(data);
  const Mat centered = fit.residuals.rowwise() - fit.mu_hat.transpose();
  const std::size_t b_count = 2000;
  Vec sum = Vec::Zero(data.r());
  for (std::size_t b = 0; b < b_count; ++b)
    for (const std::size_t i : replicate_indices(4, b, data.n())) sum += centered.row(static_cast<Index>(i)).transpose();
  const double count = static_cast<double>(data.n() * b_count);
  const Vec mean = sum / count;
  for (Index a = 0; a < data.r(); ++a) {
    const double sd = std::sqrt(fit.sigma_hat(a, a));
    CHECK(std::fabs(mean(a)) < 3.0 * sd / std::sqrt(count));
  }
}

TEST_CASE("residual engine equals explicit refits") {
  const FixedDesignSpec spec = default_experiment_config().fixed_spec(25, 31);
  const Dataset data = gen_fixed(spec);
  const FitResult fit = fit_ols(data);
  const BootstrapDraws d = residual_bootstrap(fit, data.x(), config(5, 77));
  const Mat centered = fit.residuals.rowwise() - fit.mu_hat.transpose();
  for (std::size_t b = 0; b < 5; ++b) {
    const auto idx = replicate_indices(77, b, data.n());
    Mat e(data.n(), data.r());
    for (Index i = 0; i < data.n(); ++i) e.row(i) = centered.row(static_cast<Index>(idx[static_cast<std::size_t>(i)]));
    const Mat y = data.x() * fit.beta_hat.transpose() + e;
    const Mat refit = oracle::ols(data.x(), y);
    CHECK((d.draws.row(static_cast<Index>(b)).transpose() - vec(refit)).cwiseAbs().maxCoeff() <= 1e-10);
    const Mat resid = y - data.x() * refit.transpose();
    CHECK((d.sigma_stars[b] - oracle::covariance(resid, 0)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("percentile and normal intervals agree at n = 500") {
  const FixedDesignSpec spec = default_experiment_config().fixed_spec(500, 1729);
  const Dataset data = gen_fixed(spec);
  const FitResult fit = fit_ols(data);
  const BootstrapDraws d = residual_bootstrap(fit, data.x(), BootConfig::with_default_replicates(500, 3));
  const IntervalTable pct = percentile_interval(d.draws, 0.05);
  const IntervalTable nrm = fixed_design_intervals(fit, 0.05);
  for (std::size_t k = 0; k < pct.components.size(); ++k) {
    const double w = nrm.components[k].width();
    CHECK(std::fabs(pct.components[k].lower - nrm.components[k].lower) <= 0.1 * w);
    CHECK(std::fabs(pct.components[k].upper - nrm.components[k].upper) <= 0.1 * w);
  }
}

TEST_CASE("percentile interval at n = 100 contains the estimate") {
  const Dataset data = gen_fixed(default_experiment_config().fixed_spec(100, 2));
  const FitResult fit = fit_ols(data);
  const BootstrapDraws d = residual_bootstrap(fit, data.x(), BootConfig::with_default_replicates(100, 4));
  const IntervalTable pct = percentile_interval(d.draws, 0.05);
  const Vec est = vec(fit.beta_hat);
  for (std::size_t k = 0; k < pct.components.size(); ++k) {
    CHECK(pct.components[k].contains(est(static_cast<Index>(k))));
    CHECK(pct.components[k].width() > 0.0);
  }
}

TEST_CASE("scaled residual draws match the Kronecker covariance") {
  const Index n = 2000;
  const Dataset data = gen_fixed(default_experiment_config().fixed_spec(n, 91));
  const FitResult fit = fit_ols(data);
  const BootstrapDraws d = residual_bootstrap(fit, data.x(), config(4000, 92));
  const Mat target = kron(spd_inverse(SpdMat(fit.xtx.matrix() / static_cast<double>(n))).matrix(), fit.sigma_hat);
  const Mat scaled = d.var_star * static_cast<double>(n);
  for (Index k = 0; k < target.rows(); ++k) CHECK(std::fabs(scaled(k, k) / target(k, k) - 1.0) <= 0.1);
}

TEST_CASE("pairs var_star tracks the sandwich") {
  const Dataset data = gen_joint(default_experiment_config().joint_spec(1000, 93));
  const FitResult fit = fit_ols(data);
  const BootstrapDraws d = pairs_bootstrap(data, config(4000, 94));
  const Mat sandwich = sandwich_parts(data, fit).covariance();
  CHECK((d.var_star - sandwich).norm() / sandwich.norm() <= 0.15);
}
