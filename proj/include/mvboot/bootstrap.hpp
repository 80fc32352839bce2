#pragma once

// Resampling engines for the multivariate regression coefficient.
//
// Residual bootstrap (fixed design): each replicate draws n rows with
// replacement from the centered residuals e_j - mu_hat, forms
// Y* = X beta_hat^T + e*, and refits with the original X.
//
// Pairs bootstrap (random design): each replicate draws n rows of (X, Y)
// jointly with replacement and refits. A replicate whose X*^T X* fails the
// SPD tolerance is redrawn from a fresh stream, at most max_redraws times.
//
// Replicate b reads only the stream seeded by replicate_seed(seed, b, attempt),
// so results are identical for any worker count.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mvboot/intervals.hpp"
#include "mvboot/linalg.hpp"
#include "mvboot/model.hpp"

namespace mvboot {

enum class BootMethod { Residual, Pairs };

std::string_view to_string(BootMethod method) noexcept;

struct BootConfig {
  std::size_t replicates = 0;  // B
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::size_t max_redraws = 100;

  // B = 4n.
  static BootConfig with_default_replicates(Index n, std::uint64_t seed);
  // Throws InvalidArgument unless B >= 2 and 0 < alpha < 1.
  void validate() const;
};

struct BootstrapDraws {
  Mat draws;                     // B x rp, row b = vec(beta*_b)^T
  Mat var_star;                  // rp x rp
  std::vector<Mat> sigma_stars;  // Sigma*_b for every replicate, r x r
  BootMethod method = BootMethod::Residual;
  BootConfig config;
  Index r = 0;
  Index p = 0;
  std::size_t redraws = 0;  // pairs only: singular resamples that were replaced

  const Mat& sigma_star_last() const { return sigma_stars.back(); }
  std::size_t replicates() const noexcept { return static_cast<std::size_t>(draws.rows()); }
};

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t replicate, std::size_t attempt = 0);

// The row indices replicate b (attempt a) resamples, in draw order.
std::vector<std::size_t> replicate_indices(std::uint64_t seed, std::size_t replicate, Index n,
                                           std::size_t attempt = 0);

BootstrapDraws residual_bootstrap(const FitResult& fit, const Mat& x, const BootConfig& cfg);

// Throws SingularResamples if some replicate exhausts its redraws.
BootstrapDraws pairs_bootstrap(const Dataset& data, const BootConfig& cfg);

// (B-1)^{-1} sum_b (d_b - dbar)(d_b - dbar)^T over the rows of draws;
// exactly symmetric.
Mat var_star(const Mat& draws);

// Per column k: order statistics at 1-based ranks ceil(B alpha/2) and
// ceil(B (1 - alpha/2)), no interpolation. Products within 1e-9 of an integer
// count as that integer. Throws InsufficientDraws when B alpha/2 < 1 or the
// ranks coincide.
IntervalTable percentile_interval(const Mat& draws, double alpha, const std::vector<ComponentLabel>& labels);
IntervalTable percentile_interval(const Mat& draws, double alpha);

}  // namespace mvboot
