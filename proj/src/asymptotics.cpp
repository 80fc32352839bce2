#include "mvboot/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvboot/error.hpp"

namespace mvboot {

Mat fixed_design_covariance(const FitResult& fit) {
  const Mat xtx_inv = spd_inverse(fit.xtx).matrix();
  return kron(xtx_inv, fit.sigma_hat);
}

IntervalTable fixed_design_intervals(const FitResult& fit, double alpha,
                                     const std::vector<ComponentLabel>& labels) {
  return normal_intervals(vec(fit.beta_hat), fixed_design_covariance(fit), alpha, "normal-fixed", labels);
}

IntervalTable fixed_design_intervals(const FitResult& fit, double alpha) {
  return fixed_design_intervals(fit, alpha, component_labels(fit.beta_hat.rows(), fit.beta_hat.cols()));
}

SandwichParts sandwich_parts(const Dataset& data, const FitResult& fit) {
  const Index n = data.n();
  const Index p = data.p();
  const Index r = data.r();
  if (fit.residuals.rows() != n || fit.residuals.cols() != r)
    throw Error(ErrorKind::DimensionMismatch, "sandwich_parts: residuals do not match data");

  const double inv_n = 1.0 / static_cast<double>(n);
  SpdMat w(symmetrized(data.x().transpose() * data.x() * inv_n));

  Mat m = Mat::Zero(r * p, r * p);
  Vec g(r * p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j)
      for (Index a = 0; a < r; ++a) g(a + r * j) = data.x()(i, j) * fit.residuals(i, a);
    m.selfadjointView<Eigen::Lower>().rankUpdate(g, inv_n);
  }
  m = m.selfadjointView<Eigen::Lower>();

  const Mat outer = kron(spd_inverse(w).matrix(), Mat::Identity(r, r));
  Mat delta = symmetrized(outer * m * outer);
  return SandwichParts{std::move(w), std::move(m), std::move(delta), n};
}

IntervalTable sandwich_intervals(const SandwichParts& parts, const FitResult& fit, double alpha,
                                 const std::vector<ComponentLabel>& labels) {
  return normal_intervals(vec(fit.beta_hat), parts.covariance(), alpha, "normal-sandwich", labels);
}

Mat pivot_statistics(const FitResult& fit, const BootstrapDraws& draws) {
  const Index r = draws.r;
  const Index p = draws.p;
  if (fit.beta_hat.rows() != r || fit.beta_hat.cols() != p)
    throw Error(ErrorKind::DimensionMismatch, "pivot_statistics: draws do not match fit");
  const Mat root_xtx = spd_sqrt(fit.xtx).matrix();
  const Index b_count = draws.draws.rows();
  Mat out(b_count, r * p);
  for (Index b = 0; b < b_count; ++b) {
    auto sigma = SpdMat::try_make(draws.sigma_stars[static_cast<std::size_t>(b)]);
    if (!sigma) {
      std::ostringstream msg;
      msg << "pivot_statistics: Sigma* of replicate " << b << " is not positive definite";
      throw Error(ErrorKind::NearSingular, msg.str());
    }
    const Mat diff = unvec(draws.draws.row(b).transpose(), r, p) - fit.beta_hat;
    out.row(b) = vec(spd_inv_sqrt(*sigma).matrix() * diff * root_xtx).transpose();
  }
  return out;
}

Mat finite_difference_jacobian(const VectorMap& f, const Vec& at) {
  const Vec f0 = f(at);
  Mat jac(f0.size(), at.size());
  for (Index i = 0; i < at.size(); ++i) {
    const double h = std::max(1e-6, 1e-6 * std::abs(at(i)));
    Vec up = at, down = at;
    up(i) += h;
    down(i) -= h;
    jac.col(i) = (f(up) - f(down)) / (up(i) - down(i));
  }
  return jac;
}

Mat delta_method(const Vec& at, const Mat& cov, const VectorMap& f, const std::optional<JacobianMap>& jacobian) {
  if (cov.rows() != at.size() || cov.cols() != at.size())
    throw Error(ErrorKind::DimensionMismatch, "delta_method: covariance does not match the point");
  const Mat fd = finite_difference_jacobian(f, at);
  Mat jac = fd;
  if (jacobian) {
    jac = (*jacobian)(at);
    if (jac.rows() != fd.rows() || jac.cols() != fd.cols())
      throw Error(ErrorKind::DimensionMismatch, "delta_method: jacobian has the wrong shape");
    const double scale = std::max(1.0, jac.cwiseAbs().maxCoeff());
    const double worst = (jac - fd).cwiseAbs().maxCoeff();
    if (worst > 1e-4 * scale) {
      std::ostringstream msg;
      msg << "delta_method: supplied jacobian differs from finite differences by " << worst;
      throw Error(ErrorKind::GradientMismatch, msg.str());
    }
  }
  return symmetrized(jac * cov * jac.transpose());
}

Mat select_covariance(CovarianceSource source, const FitResult& fit, const SandwichParts* parts,
                      const BootstrapDraws* draws) {
  switch (source) {
    case CovarianceSource::FixedDesign:
      return fixed_design_covariance(fit);
    case CovarianceSource::Sandwich:
      if (!parts) throw Error(ErrorKind::InvalidArgument, "select_covariance: sandwich parts required");
      return parts->covariance();
    case CovarianceSource::VarStar:
      if (!draws) throw Error(ErrorKind::InvalidArgument, "select_covariance: bootstrap draws required");
      return draws->var_star;
  }
  throw Error(ErrorKind::InvalidArgument, "select_covariance: unknown source");
}

}  // namespace mvboot
