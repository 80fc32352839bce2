#pragma once

// Mallows (Wasserstein) distance between equal-mass empirical distributions
// and executable checks of the finite-sample bounds it enters.

#include <cstdint>
#include <string>
#include <vector>

#include "mvboot/linalg.hpp"
#include "mvboot/simulate.hpp"

namespace mvboot {

// m atoms in R^k, one per row, each with mass 1/m.
class EmpiricalDist {
 public:
  explicit EmpiricalDist(Mat points);

  const Mat& points() const noexcept { return points_; }
  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }
  Vec mean() const { return points_.colwise().mean().transpose(); }

 private:
  Mat points_;
};

enum class MallowsRoute { Auto, Assignment };

// (min over matchings of m^{-1} sum ||u_i - v_pi(i)||^l)^{1/l}. One-dimensional
// inputs are paired in sorted order unless the route forces the solver.
// Throws UnequalSupportSizes, DimensionMismatch, InvalidArgument (l < 1).
double mallows_distance(const EmpiricalDist& mu, const EmpiricalDist& nu, double l,
                        MallowsRoute route = MallowsRoute::Auto);

// Optimal matching of mu's atoms to nu's under squared Euclidean cost.
std::vector<std::size_t> optimal_coupling(const EmpiricalDist& mu, const EmpiricalDist& nu);

struct BoundReport {
  double estimate = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
};

inline constexpr double kTheorem3Slack = 0.15;
// Absolute allowance in the lemma checks; a fit with Sigma = 0 still leaves
// residuals of order 1e-16.
inline constexpr double kRoundoffAllowance = 1e-12;
inline constexpr std::size_t kTheorem3Cloud = 256;

// Compares the laws of sqrt(n) vec(e^T X (X^T X)^{-1}) under errors drawn
// from F and from G. Draws `trials` error matrices from each (rows i.i.d.),
// maps them, and takes the squared exact Mallows distance between the two
// clouds. Bound: n r tr((X^T X)^{-1}) d_2(F, G)^2. Both clouds reuse the same
// row indices after G's atoms are matched to F's, so F = G gives exactly 0.
BoundReport check_theorem3_bound(const Mat& x, const EmpiricalDist& f, const EmpiricalDist& g,
                                 std::size_t trials = kTheorem3Cloud, std::uint64_t seed = 0,
                                 double slack = kTheorem3Slack);

struct LemmaReports {
  BoundReport raw;       // residuals vs errors, bound p tr(Sigma)/n
  BoundReport centered;  // centered residuals vs errors, bound (p+1) tr(Sigma)/n
};

// Each repetition redraws the errors (X fixed), fits, and measures d_2
// between the residual and error empiricals. The estimate is the square of
// the mean distance; it passes when at most bound + 2 standard errors
// (+ kRoundoffAllowance).
LemmaReports check_lemma_bounds(const FixedDesignSpec& spec, std::size_t reps);

// ||s_u^2 - s_v^2||_F^2 against ||m^{-1} sum (u_i - v_i)(u_i - v_i)^T||_F^2,
// with s^2 the divisor-m covariance. Rows are the m vectors. Passes when
// lhs <= rhs + kRoundoffAllowance.
BoundReport check_lemma6(const Mat& u, const Mat& v);

struct Theorem3Instance {
  Mat x;
  EmpiricalDist f;
  EmpiricalDist g;
};

// X with i.i.d. N(0, 1) entries; F with m standard normal atoms and G a
// noisy rescaling of F, both shifted to mean zero.
Theorem3Instance random_theorem3_instance(Index n, Index p, Index r, Index m, std::uint64_t seed);

}  // namespace mvboot
