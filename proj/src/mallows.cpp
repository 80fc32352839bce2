#include "mvboot/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "mvboot/assignment.hpp"
#include "mvboot/error.hpp"
#include "mvboot/parallel.hpp"
#include "mvboot/rng.hpp"

namespace mvboot {

EmpiricalDist::EmpiricalDist(Mat points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1)
    throw Error(ErrorKind::InvalidArgument, "EmpiricalDist: need at least one atom of positive dimension");
  if (!points_.allFinite()) throw Error(ErrorKind::InvalidArgument, "EmpiricalDist: atoms must be finite");
}

namespace {

void require_comparable(const EmpiricalDist& mu, const EmpiricalDist& nu) {
  if (mu.size() != nu.size())
    throw Error(ErrorKind::UnequalSupportSizes, "mallows_distance: supports have " + std::to_string(mu.size()) +
                                                    " and " + std::to_string(nu.size()) + " atoms");
  if (mu.dim() != nu.dim()) throw Error(ErrorKind::DimensionMismatch, "mallows_distance: atom dimensions differ");
}

Mat cost_matrix(const Mat& a, const Mat& b, double l) {
  const Index m = a.rows();
  Mat c(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) {
      const double sq = (a.row(i) - b.row(j)).squaredNorm();
      c(i, j) = l == 2.0 ? sq : std::pow(std::sqrt(sq), l);
    }
  return c;
}

std::vector<std::size_t> sorted_order(const Mat& column) {
  std::vector<std::size_t> order(static_cast<std::size_t>(column.rows()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return column(static_cast<Index>(a), 0) < column(static_cast<Index>(b), 0);
  });
  return order;
}

}  // namespace

double mallows_distance(const EmpiricalDist& mu, const EmpiricalDist& nu, double l, MallowsRoute route) {
  require_comparable(mu, nu);
  if (!(l >= 1.0) || !std::isfinite(l)) throw Error(ErrorKind::InvalidArgument, "mallows_distance: order must be >= 1");

  const Mat costs = cost_matrix(mu.points(), nu.points(), l);
  std::vector<std::size_t> match;
  if (mu.dim() == 1 && route == MallowsRoute::Auto) {
    // k-th smallest of mu goes to k-th smallest of nu.
    const auto a = sorted_order(mu.points());
    const auto b = sorted_order(nu.points());
    match.resize(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) match[a[k]] = b[k];
  } else {
    match = solve_assignment(costs).column_of_row;
  }
  // Matched costs are summed smallest first, so the result does not depend on
  // which side is mu and which route found the matching.
  std::vector<double> matched(match.size());
  for (std::size_t i = 0; i < match.size(); ++i)
    matched[i] = costs(static_cast<Index>(i), static_cast<Index>(match[i]));
  std::sort(matched.begin(), matched.end());
  double total = 0.0;
  for (const double c : matched) total += c;
  const double mean = total / static_cast<double>(mu.size());
  return l == 2.0 ? std::sqrt(mean) : std::pow(mean, 1.0 / l);
}

std::vector<std::size_t> optimal_coupling(const EmpiricalDist& mu, const EmpiricalDist& nu) {
  require_comparable(mu, nu);
  return solve_assignment(cost_matrix(mu.points(), nu.points(), 2.0)).column_of_row;
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["estimate"] = estimate;
  j["bound"] = bound;
  j["slack"] = slack;
  j["pass"] = pass;
  j["trials"] = trials;
  j["seed"] = seed;
  return j.dump();
}

BoundReport check_theorem3_bound(const Mat& x, const EmpiricalDist& f, const EmpiricalDist& g, std::size_t trials,
                                 std::uint64_t seed, double slack) {
  require_comparable(f, g);
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "check_theorem3_bound: trials must be positive");
  for (const EmpiricalDist* d : {&f, &g}) {
    const double scale = std::max(1.0, d->points().cwiseAbs().maxCoeff());
    if (d->mean().cwiseAbs().maxCoeff() > 1e-9 * scale)
      throw Error(ErrorKind::InvalidArgument, "check_theorem3_bound: error laws must have mean zero");
  }

  const Index n = x.rows();
  const Index p = x.cols();
  const Index r = f.dim();
  const SpdMat xtx(x.transpose() * x);
  // H = X (X^T X)^{-1}, so e^T X (X^T X)^{-1} = e^T H.
  const Mat h = xtx.solve(x.transpose()).transpose();
  const double root_n = std::sqrt(static_cast<double>(n));

  const std::vector<std::size_t> partner = optimal_coupling(f, g);
  const auto m = static_cast<std::size_t>(f.size());

  Mat cloud_f(static_cast<Index>(trials), r * p);
  Mat cloud_g(static_cast<Index>(trials), r * p);
  Mat ef(n, r), eg(n, r);
  for (std::size_t t = 0; t < trials; ++t) {
    Stream stream(child_seed(seed, t));
    for (Index i = 0; i < n; ++i) {
      const std::size_t atom = stream.index(m);
      ef.row(i) = f.points().row(static_cast<Index>(atom));
      eg.row(i) = g.points().row(static_cast<Index>(partner[atom]));
    }
    cloud_f.row(static_cast<Index>(t)) = root_n * vec(ef.transpose() * h).transpose();
    cloud_g.row(static_cast<Index>(t)) = root_n * vec(eg.transpose() * h).transpose();
  }

  const double d_fg = mallows_distance(f, g, 2.0);
  const double d_clouds = mallows_distance(EmpiricalDist(cloud_f), EmpiricalDist(cloud_g), 2.0);

  BoundReport report;
  report.estimate = d_clouds * d_clouds;
  report.bound = static_cast<double>(n * r) * spd_inverse(xtx).matrix().trace() * d_fg * d_fg;
  report.slack = slack;
  report.pass = report.estimate <= report.bound * (1.0 + slack);
  report.trials = trials;
  report.seed = seed;
  return report;
}

LemmaReports check_lemma_bounds(const FixedDesignSpec& spec, std::size_t reps) {
  spec.validate();
  if (reps < 2) throw Error(ErrorKind::InvalidArgument, "check_lemma_bounds: need at least two repetitions");
  const Mat x = design_matrix(spec);
  const Mat mean_part = x * spec.beta.transpose();

  std::vector<double> raw(reps), centered(reps);
  parallel_for(reps, [&](std::size_t k) {
    const Mat e = draw_errors(spec, k + 1);
    const FitResult fit = fit_ols(x, mean_part + e);
    const Mat shifted = fit.residuals.rowwise() - fit.residuals.colwise().mean();
    const EmpiricalDist truth(e);
    raw[k] = mallows_distance(EmpiricalDist(fit.residuals), truth, 2.0);
    centered[k] = mallows_distance(EmpiricalDist(shifted), truth, 2.0);
  });

  const double trace = spec.sigma.trace();
  const double n = static_cast<double>(spec.n);
  auto summarize = [&](const std::vector<double>& d, double bound) {
    const double count = static_cast<double>(d.size());
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / count;
    double ss = 0.0;
    for (const double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (count - 1.0));
    // Standard error of mean^2 by the delta method.
    const double se = 2.0 * mean * sd / std::sqrt(count);
    BoundReport report;
    report.estimate = mean * mean;
    report.bound = bound;
    report.slack = 2.0 * se;
    report.pass = report.estimate <= bound + report.slack + kRoundoffAllowance;
    report.trials = d.size();
    report.seed = spec.seed;
    return report;
  };
  return {summarize(raw, static_cast<double>(spec.p) * trace / n),
          summarize(centered, static_cast<double>(spec.p + 1) * trace / n)};
}

BoundReport check_lemma6(const Mat& u, const Mat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw Error(ErrorKind::DimensionMismatch, "check_lemma6: u and v must have the same shape");
  if (u.rows() < 1) throw Error(ErrorKind::InvalidArgument, "check_lemma6: need at least one vector");
  const double m = static_cast<double>(u.rows());
  auto covariance = [m](const Mat& a) {
    const Mat c = a.rowwise() - a.colwise().mean();
    return Mat(c.transpose() * c / m);
  };
  const Mat d = u - v;
  BoundReport report;
  report.estimate = (covariance(u) - covariance(v)).squaredNorm();
  report.bound = (d.transpose() * d / m).squaredNorm();
  report.pass = report.estimate <= report.bound + kRoundoffAllowance;
  report.trials = static_cast<std::size_t>(u.rows());
  return report;
}

Theorem3Instance random_theorem3_instance(Index n, Index p, Index r, Index m, std::uint64_t seed) {
  if (n <= p || p < 1 || r < 1 || m < 1)
    throw Error(ErrorKind::InvalidArgument, "random_theorem3_instance: need n > p >= 1, r >= 1, m >= 1");
  Stream stream(seed);
  auto normals = [&stream](Index rows, Index cols) {
    Mat a(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) a(i, j) = stream.normal();
    return a;
  };
  Mat x = normals(n, p);
  Mat f = normals(m, r);
  Mat g = 0.7 * f + 0.5 * normals(m, r);
  f = f.rowwise() - f.colwise().mean();
  g = g.rowwise() - g.colwise().mean();
  return {std::move(x), EmpiricalDist(std::move(f)), EmpiricalDist(std::move(g))};
}

}  // namespace mvboot
