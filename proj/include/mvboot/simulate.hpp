#pragma once

// Data generators and experiment drivers.
//
// Streams: the design of a FixedDesignSpec comes from child_seed(seed, 0);
// error draw number k comes from child_seed(child_seed(seed, 1), k). Changing
// k redraws the errors and leaves X alone. A JointDesignSpec draws (X_i, e_i)
// jointly from child_seed(child_seed(seed, 2), k).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mvboot/bootstrap.hpp"
#include "mvboot/intervals.hpp"
#include "mvboot/linalg.hpp"
#include "mvboot/model.hpp"
#include "mvboot/rng.hpp"

namespace mvboot {

// All laws are standardized to mean 0 and variance 1 before the Sigma^{1/2}
// transform.
enum class ErrorLaw { Gaussian, Uniform, Laplace };

std::string_view to_string(ErrorLaw law) noexcept;
ErrorLaw parse_error_law(std::string_view text);

// One standardized draw from the law, using inversion of stream.uniform().
double standard_variate(Stream& stream, ErrorLaw law);

struct FixedDesignSpec {
  Index n = 0;
  Index p = 0;
  Index r = 0;
  Mat beta;   // r x p
  Mat sigma;  // r x r, symmetric nonnegative definite (zero is allowed)
  std::uint64_t seed = 0;
  ErrorLaw law = ErrorLaw::Gaussian;

  void validate() const;
};

// X rows i.i.d. N(0, I_p), frozen by spec.seed.
Mat design_matrix(const FixedDesignSpec& spec);
// n x r errors, rows i.i.d. with covariance sigma.
Mat draw_errors(const FixedDesignSpec& spec, std::size_t error_stream);
// Y = X beta^T + e.
Dataset gen_fixed(const FixedDesignSpec& spec, std::size_t error_stream = 0);

struct JointDesignSpec {
  Index n = 0;
  Index p = 0;
  Index r = 0;
  Mat beta;      // r x p, the generating coefficient
  Mat sigma_x;   // p x p
  Mat sigma_xe;  // p x r, Cov(X, e)
  Mat sigma;     // r x r
  std::uint64_t seed = 0;

  // Throws BlockNotSPD unless the (p+r) x (p+r) joint covariance is SPD.
  void validate() const;
  Mat joint_covariance() const;
  // beta(mu) = E(Y X^T) Sigma_X^{-1} = beta + Sigma_eX Sigma_X^{-1}, the OLS target.
  Mat estimand() const;
  // Cov of Y - beta(mu) X = Sigma - Sigma_eX Sigma_X^{-1} Sigma_Xe.
  Mat estimand_error_covariance() const;
};

Dataset gen_joint(const JointDesignSpec& spec, std::size_t stream = 0);

// Generator parameters that are not tied to n or a seed. Stored as a flat
// key = value text file; see config/default.cfg.
struct ExperimentConfig {
  int version = 1;
  Index p = 2;
  Index r = 3;
  Mat beta;
  Mat sigma;
  Mat sigma_x;
  Mat sigma_xe;
  ErrorLaw law = ErrorLaw::Gaussian;

  FixedDesignSpec fixed_spec(Index n, std::uint64_t seed) const;
  JointDesignSpec joint_spec(Index n, std::uint64_t seed) const;
  void validate() const;
};

// r = 3, p = 2; beta entries in [-1, 1]; Sigma with unit diagonal and 0.3
// off the diagonal; Sigma_X with unit diagonal and 0.25 off it; every
// entry of Sigma_Xe equal to 0.2.
ExperimentConfig default_experiment_config();

// Keys: version, p, r, beta, sigma, sigma_x, sigma_xe, error_law. Matrices
// are written row by row, entries separated by spaces or commas and rows by
// ';'. '#' starts a comment. Missing keys keep their default values.
// Throws ConfigError.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);
std::string format_experiment_config(const ExperimentConfig& config);

enum class TableKind { Table1, Table2 };

std::string_view to_string(TableKind kind) noexcept;

struct TableRow {
  Index n = 0;
  std::size_t replicates = 0;
  IntervalTable bootstrap;    // percentile
  IntervalTable closed_form;  // normal-fixed (Table1) or normal-sandwich (Table2)
  Mat estimand;
};

struct TableExperiment {
  TableKind kind = TableKind::Table1;
  std::uint64_t seed = 0;
  ExperimentConfig config;
  std::vector<TableRow> rows;
};

// One dataset per n; B = 4n; Table1 uses the residual bootstrap against the
// fixed-design normal intervals, Table2 the pairs bootstrap against the
// sandwich intervals. All rp components are reported.
TableExperiment run_table_experiment(TableKind kind, const std::vector<Index>& sizes, std::uint64_t seed,
                                     const ExperimentConfig& config = default_experiment_config(),
                                     double alpha = 0.05);

enum class CoverageMethod { ResidualPercentile, PairsPercentile, NormalFixed, NormalSandwich };

std::string_view to_string(CoverageMethod method) noexcept;

struct CoverageReport {
  CoverageMethod method = CoverageMethod::ResidualPercentile;
  std::size_t reps = 0;
  std::vector<ComponentLabel> labels;
  std::vector<double> coverage;    // per component, in [0, 1]
  std::vector<double> mean_width;  // per component
};

struct CoverageSettings {
  std::size_t reps = 100;
  std::size_t replicates = 0;  // bootstrap B; 0 means 4n
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

// An interval covers the target when lower - tol <= target <= upper + tol with
// tol = kCoverageTolerance * max(1, |target|), so point intervals from
// noiseless data still count despite rounding in the fit.
inline constexpr double kCoverageTolerance = 1e-10;

// Fixed design: X stays fixed, repetition k redraws the errors (stream k+1)
// and the target is spec.beta.
CoverageReport coverage_study(const FixedDesignSpec& spec, CoverageMethod method, const CoverageSettings& settings);
// Random design: repetition k draws a fresh dataset and the target is
// spec.estimand().
CoverageReport coverage_study(const JointDesignSpec& spec, CoverageMethod method, const CoverageSettings& settings);

}  // namespace mvboot
