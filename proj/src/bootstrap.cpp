#include "mvboot/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvboot/error.hpp"
#include "mvboot/parallel.hpp"
#include "mvboot/rng.hpp"

namespace mvboot {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fill_indices(Stream& stream, Index n, std::vector<std::size_t>& out) {
  out.resize(static_cast<std::size_t>(n));
  for (auto& idx : out) idx = stream.index(static_cast<std::size_t>(n));
}

// Divisor-n covariance from running sums, same formula as sigma_hat().
Mat covariance_from_sums(const Vec& sum, const Mat& cross, Index n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  Vec mu = sum * inv_n;
  return symmetrized(cross * inv_n - mu * mu.transpose());
}

std::size_t ceil_rank(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

std::string_view to_string(BootMethod method) noexcept {
  return method == BootMethod::Residual ? "residual" : "pairs";
}

BootConfig BootConfig::with_default_replicates(Index n, std::uint64_t seed) {
  BootConfig cfg;
  cfg.replicates = static_cast<std::size_t>(4 * n);
  cfg.seed = seed;
  return cfg;
}

void BootConfig::validate() const {
  if (replicates < 2) throw Error(ErrorKind::InvalidArgument, "bootstrap needs B >= 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t replicate, std::size_t attempt) {
  return child_seed(child_seed(seed, replicate), attempt);
}

std::vector<std::size_t> replicate_indices(std::uint64_t seed, std::size_t replicate, Index n,
                                           std::size_t attempt) {
  Stream stream(replicate_seed(seed, replicate, attempt));
  std::vector<std::size_t> out;
  fill_indices(stream, n, out);
  return out;
}

BootstrapDraws residual_bootstrap(const FitResult& fit, const Mat& x, const BootConfig& cfg) {
  cfg.validate();
  const Index n = x.rows();
  const Index p = x.cols();
  const Index r = fit.beta_hat.rows();
  if (fit.residuals.rows() != n || fit.beta_hat.cols() != p)
    throw Error(ErrorKind::DimensionMismatch, "residual_bootstrap: fit does not match X");

  // Centered residuals are the support of F_hat_n.
  const RowMat centered = fit.residuals.rowwise() - fit.mu_hat.transpose();
  // beta* = Y*^T X (X^T X)^{-1} = beta_hat + e*^T H with H = X (X^T X)^{-1},
  // because (X beta_hat^T)^T H = beta_hat.
  const RowMat h = fit.xtx.solve(x.transpose()).transpose();
  const RowMat xr = x;
  const Vec beta_vec = vec(fit.beta_hat);

  BootstrapDraws out;
  out.method = BootMethod::Residual;
  out.config = cfg;
  out.r = r;
  out.p = p;
  out.draws.resize(static_cast<Index>(cfg.replicates), r * p);
  out.sigma_stars.resize(cfg.replicates);

  parallel_for(cfg.replicates, [&](std::size_t b) {
    std::vector<std::size_t> idx;
    Stream stream(replicate_seed(cfg.seed, b));
    fill_indices(stream, n, idx);

    Mat delta = Mat::Zero(r, p);  // beta* - beta_hat = e*^T H
    for (Index i = 0; i < n; ++i) {
      const double* e = centered.row(static_cast<Index>(idx[static_cast<std::size_t>(i)])).data();
      const double* hi = h.row(i).data();
      for (Index j = 0; j < p; ++j)
        for (Index a = 0; a < r; ++a) delta(a, j) += e[a] * hi[j];
    }

    // Starred residuals: Y*_i - beta* X_i = e*_i - delta X_i.
    Vec sum = Vec::Zero(r);
    Mat cross = Mat::Zero(r, r);
    Vec resid(r);
    for (Index i = 0; i < n; ++i) {
      const double* e = centered.row(static_cast<Index>(idx[static_cast<std::size_t>(i)])).data();
      const double* xi = xr.row(i).data();
      for (Index a = 0; a < r; ++a) {
        double v = e[a];
        for (Index j = 0; j < p; ++j) v -= delta(a, j) * xi[j];
        resid(a) = v;
      }
      sum += resid;
      cross.noalias() += resid * resid.transpose();
    }

    const auto row = static_cast<Index>(b);
    for (Index k = 0; k < r * p; ++k) out.draws(row, k) = beta_vec(k) + delta(k % r, k / r);
    out.sigma_stars[b] = covariance_from_sums(sum, cross, n);
  });

  out.var_star = var_star(out.draws);
  return out;
}

BootstrapDraws pairs_bootstrap(const Dataset& data, const BootConfig& cfg) {
  cfg.validate();
  const Index n = data.n();
  const Index p = data.p();
  const Index r = data.r();
  const RowMat xr = data.x();
  const RowMat yr = data.y();

  BootstrapDraws out;
  out.method = BootMethod::Pairs;
  out.config = cfg;
  out.r = r;
  out.p = p;
  out.draws.resize(static_cast<Index>(cfg.replicates), r * p);
  out.sigma_stars.resize(cfg.replicates);
  std::vector<std::size_t> redraws(cfg.replicates, 0);

  parallel_for(cfg.replicates, [&](std::size_t b) {
    std::vector<std::size_t> idx;
    Mat gram(p, p);
    Mat xy(p, r);
    for (std::size_t attempt = 0; attempt <= cfg.max_redraws; ++attempt) {
      Stream stream(replicate_seed(cfg.seed, b, attempt));
      fill_indices(stream, n, idx);

      gram.setZero();
      xy.setZero();
      for (const std::size_t row : idx) {
        const double* xi = xr.row(static_cast<Index>(row)).data();
        const double* yi = yr.row(static_cast<Index>(row)).data();
        for (Index j = 0; j < p; ++j) {
          for (Index k = 0; k <= j; ++k) gram(j, k) += xi[j] * xi[k];
          for (Index a = 0; a < r; ++a) xy(j, a) += xi[j] * yi[a];
        }
      }
      for (Index j = 0; j < p; ++j)
        for (Index k = j + 1; k < p; ++k) gram(j, k) = gram(k, j);

      auto spd = SpdMat::try_make(gram);
      if (!spd) {
        ++redraws[b];
        continue;
      }
      const Mat beta = spd->solve(xy).transpose();  // r x p

      Vec sum = Vec::Zero(r);
      Mat cross = Mat::Zero(r, r);
      Vec resid(r);
      for (const std::size_t row : idx) {
        const double* xi = xr.row(static_cast<Index>(row)).data();
        const double* yi = yr.row(static_cast<Index>(row)).data();
        for (Index a = 0; a < r; ++a) {
          double v = yi[a];
          for (Index j = 0; j < p; ++j) v -= beta(a, j) * xi[j];
          resid(a) = v;
        }
        sum += resid;
        cross.noalias() += resid * resid.transpose();
      }

      const auto out_row = static_cast<Index>(b);
      for (Index k = 0; k < r * p; ++k) out.draws(out_row, k) = beta(k % r, k / r);
      out.sigma_stars[b] = covariance_from_sums(sum, cross, n);
      return;
    }
    std::ostringstream msg;
    msg << "pairs bootstrap: replicate " << b << " was singular after " << cfg.max_redraws
        << " redraws; the design is degenerate";
    throw Error(ErrorKind::SingularResamples, msg.str());
  });

  for (const auto count : redraws) out.redraws += count;
  out.var_star = var_star(out.draws);
  return out;
}

Mat var_star(const Mat& draws) {
  const Index b = draws.rows();
  const Index k = draws.cols();
  if (b < 2) throw Error(ErrorKind::InvalidArgument, "var_star needs at least two draws");
  const Vec mean = draws.colwise().mean().transpose();
  const Mat centered = draws.rowwise() - mean.transpose();
  Mat out(k, k);
  const double inv = 1.0 / static_cast<double>(b - 1);
  for (Index j = 0; j < k; ++j)
    for (Index i = j; i < k; ++i) {
      const double v = centered.col(i).dot(centered.col(j)) * inv;
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

IntervalTable percentile_interval(const Mat& draws, double alpha, const std::vector<ComponentLabel>& labels) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  if (static_cast<Index>(labels.size()) != draws.cols())
    throw Error(ErrorKind::DimensionMismatch, "percentile_interval: one label per component required");
  const auto b = static_cast<std::size_t>(draws.rows());
  const double lower_pos = static_cast<double>(b) * alpha / 2.0;
  const std::size_t lo = ceil_rank(lower_pos);
  const std::size_t hi = ceil_rank(static_cast<double>(b) * (1.0 - alpha / 2.0));
  if (lower_pos < 1.0 - 1e-9 || lo >= hi || hi > b) {
    std::ostringstream msg;
    msg << "percentile_interval: B=" << b << " is too small for alpha=" << alpha
        << " (ranks " << lo << ", " << hi << ")";
    throw Error(ErrorKind::InsufficientDraws, msg.str());
  }

  IntervalTable table{"percentile", {}};
  table.components.reserve(labels.size());
  std::vector<double> column(b);
  for (Index k = 0; k < draws.cols(); ++k) {
    for (std::size_t i = 0; i < b; ++i) column[i] = draws(static_cast<Index>(i), k);
    std::sort(column.begin(), column.end());
    table.components.push_back({labels[static_cast<std::size_t>(k)], column[lo - 1], column[hi - 1]});
  }
  return table;
}

IntervalTable percentile_interval(const Mat& draws, double alpha) {
  // Without names the best we can do is generic labels with r = rp, p = 1.
  return percentile_interval(draws, alpha, component_labels(draws.cols(), 1));
}

}  // namespace mvboot
