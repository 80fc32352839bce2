#pragma once

// Closed-form large-sample inference for vec(beta_hat), the targets the two
// bootstrap engines approximate.
//
// Fixed design: Cov(vec beta_hat) = (X^T X)^{-1} (x) Sigma. With beta r x p
// and column stacking, vec(beta_hat - beta) = ((X^T X)^{-1} X^T (x) I_r) vec(e^T),
// and Cov(vec e^T) = I_n (x) Sigma, which gives exactly this Kronecker order.
//
// Random design: Cov(vec beta_hat) ~ Delta / n with the sandwich
// Delta = (W^{-1} (x) I_r) M (W^{-1} (x) I_r), W = n^{-1} X^T X and
// M = n^{-1} sum_i g_i g_i^T where g_i = vec(e_i X_i^T) = X_i (x) e_i.

#include <functional>
#include <optional>
#include <vector>

#include "mvboot/bootstrap.hpp"
#include "mvboot/intervals.hpp"
#include "mvboot/linalg.hpp"
#include "mvboot/model.hpp"

namespace mvboot {

// (X^T X)^{-1} (x) Sigma_hat.
Mat fixed_design_covariance(const FitResult& fit);

// vec(beta_hat)_k +- z_{1-alpha/2} sqrt(V_kk), V = fixed_design_covariance(fit).
IntervalTable fixed_design_intervals(const FitResult& fit, double alpha,
                                     const std::vector<ComponentLabel>& labels);
IntervalTable fixed_design_intervals(const FitResult& fit, double alpha);

struct SandwichParts {
  SpdMat w;        // n^{-1} X^T X
  Mat m_hat;       // rp x rp
  Mat delta_hat;   // rp x rp
  Index n = 0;

  // Delta_hat / n, the covariance estimate for vec(beta_hat).
  Mat covariance() const { return delta_hat / static_cast<double>(n); }
};

SandwichParts sandwich_parts(const Dataset& data, const FitResult& fit);

IntervalTable sandwich_intervals(const SandwichParts& parts, const FitResult& fit, double alpha,
                                 const std::vector<ComponentLabel>& labels);

// Row b: vec(Sigma*_b^{-1/2} (beta*_b - beta_hat) (X^T X)^{1/2}), which equals
// ((X^T X)^{1/2} (x) Sigma*_b^{-1/2}) (vec beta*_b - vec beta_hat). Throws
// NearSingular if some Sigma*_b fails the SPD tolerance.
Mat pivot_statistics(const FitResult& fit, const BootstrapDraws& draws);

using VectorMap = std::function<Vec(const Vec&)>;
using JacobianMap = std::function<Mat(const Vec&)>;

// Central differences, step h_i = max(1e-6, 1e-6 |x_i|). Result is k x d.
Mat finite_difference_jacobian(const VectorMap& f, const Vec& at);

// grad f(at) * cov * grad f(at)^T. With no jacobian supplied, central
// differences are used. A supplied jacobian is checked against central
// differences and must agree entrywise within 1e-4 * max(1, max|J|), else
// GradientMismatch.
Mat delta_method(const Vec& at, const Mat& cov, const VectorMap& f,
                 const std::optional<JacobianMap>& jacobian = std::nullopt);

enum class CovarianceSource { FixedDesign, Sandwich, VarStar };

// Picks the covariance of vec(beta_hat) for delta_method: the fixed-design
// plug-in, Delta_hat / n, or the bootstrap Var*.
Mat select_covariance(CovarianceSource source, const FitResult& fit, const SandwichParts* parts,
                      const BootstrapDraws* draws);

}  // namespace mvboot
