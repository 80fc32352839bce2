#include "mvboot/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mvboot/asymptotics.hpp"
#include "mvboot/error.hpp"
#include "mvboot/normal.hpp"
#include "mvboot/parallel.hpp"
#include "mvboot/rng.hpp"

namespace mvboot {

namespace {

constexpr std::uint64_t kDesignStream = 0;
constexpr std::uint64_t kErrorStream = 1;
constexpr std::uint64_t kJointStream = 2;

void require_shape(const Mat& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << name << " must be " << rows << "x" << cols << ", got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

}  // namespace

std::string_view to_string(ErrorLaw law) noexcept {
  switch (law) {
    case ErrorLaw::Gaussian: return "gaussian";
    case ErrorLaw::Uniform: return "uniform";
    case ErrorLaw::Laplace: return "laplace";
  }
  return "gaussian";
}

ErrorLaw parse_error_law(std::string_view text) {
  if (text == "gaussian") return ErrorLaw::Gaussian;
  if (text == "uniform") return ErrorLaw::Uniform;
  if (text == "laplace") return ErrorLaw::Laplace;
  throw Error(ErrorKind::ConfigError, "unknown error law '" + std::string(text) + "'");
}

double standard_variate(Stream& stream, ErrorLaw law) {
  const double u = stream.uniform();
  switch (law) {
    case ErrorLaw::Gaussian:
      return normal_quantile(u);
    case ErrorLaw::Uniform:
      return std::sqrt(3.0) * (2.0 * u - 1.0);
    case ErrorLaw::Laplace: {
      // Scale 1/sqrt(2) gives unit variance.
      const double b = 1.0 / std::sqrt(2.0);
      return u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
    }
  }
  return 0.0;
}

void FixedDesignSpec::validate() const {
  if (p < 1 || r < 1 || n <= p) throw Error(ErrorKind::InvalidArgument, "FixedDesignSpec: need p, r >= 1 and n > p");
  require_shape(beta, r, p, "beta");
  require_shape(sigma, r, r, "sigma");
  psd_sqrt(sigma);
}

Mat design_matrix(const FixedDesignSpec& spec) {
  spec.validate();
  Stream stream(child_seed(spec.seed, kDesignStream));
  Mat x(spec.n, spec.p);
  for (Index i = 0; i < spec.n; ++i)
    for (Index j = 0; j < spec.p; ++j) x(i, j) = stream.normal();
  return x;
}

Mat draw_errors(const FixedDesignSpec& spec, std::size_t error_stream) {
  spec.validate();
  const Mat root = psd_sqrt(spec.sigma);
  Stream stream(child_seed(child_seed(spec.seed, kErrorStream), error_stream));
  Mat z(spec.n, spec.r);
  for (Index i = 0; i < spec.n; ++i)
    for (Index a = 0; a < spec.r; ++a) z(i, a) = standard_variate(stream, spec.law);
  return z * root;
}

Dataset gen_fixed(const FixedDesignSpec& spec, std::size_t error_stream) {
  Mat x = design_matrix(spec);
  Mat y = x * spec.beta.transpose() + draw_errors(spec, error_stream);
  return Dataset(std::move(x), std::move(y));
}

Mat JointDesignSpec::joint_covariance() const {
  Mat joint(p + r, p + r);
  joint.topLeftCorner(p, p) = sigma_x;
  joint.topRightCorner(p, r) = sigma_xe;
  joint.bottomLeftCorner(r, p) = sigma_xe.transpose();
  joint.bottomRightCorner(r, r) = sigma;
  return joint;
}

void JointDesignSpec::validate() const {
  if (p < 1 || r < 1 || n <= p) throw Error(ErrorKind::InvalidArgument, "JointDesignSpec: need p, r >= 1 and n > p");
  require_shape(beta, r, p, "beta");
  require_shape(sigma_x, p, p, "sigma_x");
  require_shape(sigma_xe, p, r, "sigma_xe");
  require_shape(sigma, r, r, "sigma");
  if (!SpdMat::try_make(joint_covariance()))
    throw Error(ErrorKind::BlockNotSPD, "JointDesignSpec: joint covariance of (X, e) is not positive definite");
}

Mat JointDesignSpec::estimand() const {
  const SpdMat sx(sigma_x);
  return beta + sx.solve(sigma_xe).transpose();
}

Mat JointDesignSpec::estimand_error_covariance() const {
  const SpdMat sx(sigma_x);
  return symmetrized(sigma - sigma_xe.transpose() * sx.solve(sigma_xe));
}

Dataset gen_joint(const JointDesignSpec& spec, std::size_t stream_index) {
  spec.validate();
  const Mat root = spd_sqrt(SpdMat(spec.joint_covariance())).matrix();
  Stream stream(child_seed(child_seed(spec.seed, kJointStream), stream_index));
  const Index k = spec.p + spec.r;
  Mat z(spec.n, k);
  for (Index i = 0; i < spec.n; ++i)
    for (Index j = 0; j < k; ++j) z(i, j) = stream.normal();
  const Mat v = z * root;
  Mat x = v.leftCols(spec.p);
  Mat y = x * spec.beta.transpose() + v.rightCols(spec.r);
  return Dataset(std::move(x), std::move(y));
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig c;
  c.p = 2;
  c.r = 3;
  c.beta.resize(3, 2);
  c.beta << 0.6, -0.3,
            0.05, 0.9,
            -0.8, 0.4;
  c.sigma.resize(3, 3);
  c.sigma << 1.0, 0.3, 0.3,
             0.3, 1.0, 0.3,
             0.3, 0.3, 1.0;
  c.sigma_x.resize(2, 2);
  c.sigma_x << 1.0, 0.25,
               0.25, 1.0;
  c.sigma_xe = Mat::Constant(2, 3, 0.2);
  return c;
}

void ExperimentConfig::validate() const {
  if (version != 1) throw Error(ErrorKind::ConfigError, "unsupported config version " + std::to_string(version));
  if (p < 1 || r < 1) throw Error(ErrorKind::ConfigError, "p and r must be positive");
  auto check = [](const Mat& m, Index rows, Index cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols) {
      std::ostringstream msg;
      msg << "config key '" << name << "' must be " << rows << "x" << cols;
      throw Error(ErrorKind::ConfigError, msg.str());
    }
  };
  check(beta, r, p, "beta");
  check(sigma, r, r, "sigma");
  check(sigma_x, p, p, "sigma_x");
  check(sigma_xe, p, r, "sigma_xe");
}

FixedDesignSpec ExperimentConfig::fixed_spec(Index n, std::uint64_t seed) const {
  validate();
  FixedDesignSpec spec{n, p, r, beta, sigma, seed, law};
  spec.validate();
  return spec;
}

JointDesignSpec ExperimentConfig::joint_spec(Index n, std::uint64_t seed) const {
  validate();
  JointDesignSpec spec{n, p, r, beta, sigma_x, sigma_xe, sigma, seed};
  spec.validate();
  return spec;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Mat parse_matrix(const std::string& key, const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream all(text);
  std::string row_text;
  while (std::getline(all, row_text, ';')) {
    for (auto& ch : row_text)
      if (ch == ',') ch = ' ';
    std::istringstream in(row_text);
    std::vector<double> row;
    std::string token;
    while (in >> token) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "config key '" + key + "': bad number '" + token + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::ConfigError, "config key '" + key + "' is empty");
  Mat m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw Error(ErrorKind::ConfigError, "config key '" + key + "': ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

Index parse_count(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size() || v < 1) throw std::invalid_argument(text);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, "config key '" + key + "' must be a positive integer");
  }
}

void write_matrix(std::ostream& out, const Mat& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    if (i) out << "; ";
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig c = default_experiment_config();
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError, "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "version") c.version = static_cast<int>(parse_count(key, value));
    else if (key == "p") c.p = parse_count(key, value);
    else if (key == "r") c.r = parse_count(key, value);
    else if (key == "beta") c.beta = parse_matrix(key, value);
    else if (key == "sigma") c.sigma = parse_matrix(key, value);
    else if (key == "sigma_x") c.sigma_x = parse_matrix(key, value);
    else if (key == "sigma_xe") c.sigma_xe = parse_matrix(key, value);
    else if (key == "error_law") c.law = parse_error_law(value);
    else throw Error(ErrorKind::ConfigError, "unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::string format_experiment_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "version = " << c.version << "\n";
  out << "p = " << c.p << "\n";
  out << "r = " << c.r << "\n";
  out << "beta = ";
  write_matrix(out, c.beta);
  out << "\nsigma = ";
  write_matrix(out, c.sigma);
  out << "\nsigma_x = ";
  write_matrix(out, c.sigma_x);
  out << "\nsigma_xe = ";
  write_matrix(out, c.sigma_xe);
  out << "\nerror_law = " << to_string(c.law) << "\n";
  return out.str();
}

std::string_view to_string(TableKind kind) noexcept { return kind == TableKind::Table1 ? "table1" : "table2"; }

TableExperiment run_table_experiment(TableKind kind, const std::vector<Index>& sizes, std::uint64_t seed,
                                     const ExperimentConfig& config, double alpha) {
  TableExperiment out{kind, seed, config, {}};
  for (const Index n : sizes) {
    const std::uint64_t data_seed = child_seed(seed, static_cast<std::uint64_t>(n));
    BootConfig boot = BootConfig::with_default_replicates(n, child_seed(data_seed, 0xB007));
    boot.alpha = alpha;

    TableRow row;
    row.n = n;
    row.replicates = boot.replicates;
    if (kind == TableKind::Table1) {
      const FixedDesignSpec spec = config.fixed_spec(n, data_seed);
      const Dataset data = gen_fixed(spec);
      const auto labels = component_labels(data.r(), data.p());
      const FitResult fit = fit_ols(data);
      const BootstrapDraws draws = residual_bootstrap(fit, data.x(), boot);
      row.bootstrap = percentile_interval(draws.draws, alpha, labels);
      row.closed_form = fixed_design_intervals(fit, alpha, labels);
      row.estimand = spec.beta;
    } else {
      const JointDesignSpec spec = config.joint_spec(n, data_seed);
      const Dataset data = gen_joint(spec);
      const auto labels = component_labels(data.r(), data.p());
      const FitResult fit = fit_ols(data);
      const BootstrapDraws draws = pairs_bootstrap(data, boot);
      row.bootstrap = percentile_interval(draws.draws, alpha, labels);
      row.closed_form = sandwich_intervals(sandwich_parts(data, fit), fit, alpha, labels);
      row.estimand = spec.estimand();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string_view to_string(CoverageMethod method) noexcept {
  switch (method) {
    case CoverageMethod::ResidualPercentile: return "residual-percentile";
    case CoverageMethod::PairsPercentile: return "pairs-percentile";
    case CoverageMethod::NormalFixed: return "normal-fixed";
    case CoverageMethod::NormalSandwich: return "normal-sandwich";
  }
  return "";
}

namespace {

IntervalTable intervals_for(const Dataset& data, CoverageMethod method, const BootConfig& boot, double alpha) {
  const auto labels = component_labels(data.r(), data.p());
  const FitResult fit = fit_ols(data);
  switch (method) {
    case CoverageMethod::ResidualPercentile:
      return percentile_interval(residual_bootstrap(fit, data.x(), boot).draws, alpha, labels);
    case CoverageMethod::PairsPercentile:
      return percentile_interval(pairs_bootstrap(data, boot).draws, alpha, labels);
    case CoverageMethod::NormalFixed:
      return fixed_design_intervals(fit, alpha, labels);
    case CoverageMethod::NormalSandwich:
      return sandwich_intervals(sandwich_parts(data, fit), fit, alpha, labels);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown coverage method");
}

template <typename MakeData>
CoverageReport run_coverage(Index n, Index r, Index p, const Mat& target, CoverageMethod method,
                            const CoverageSettings& settings, MakeData make_data) {
  if (settings.reps < 1) throw Error(ErrorKind::InvalidArgument, "coverage_study: reps must be positive");
  const std::size_t k = static_cast<std::size_t>(r * p);
  const Vec truth = vec(target);
  std::vector<std::vector<char>> hit(settings.reps, std::vector<char>(k, 0));
  std::vector<std::vector<double>> width(settings.reps, std::vector<double>(k, 0.0));

  parallel_for(settings.reps, [&](std::size_t rep) {
    BootConfig boot;
    boot.replicates = settings.replicates ? settings.replicates : static_cast<std::size_t>(4 * n);
    boot.seed = child_seed(settings.seed, rep);
    boot.alpha = settings.alpha;
    const Dataset data = make_data(rep);
    const IntervalTable table = intervals_for(data, method, boot, settings.alpha);
    for (std::size_t c = 0; c < k; ++c) {
      const double t = truth(static_cast<Index>(c));
      const double tol = kCoverageTolerance * std::max(1.0, std::fabs(t));
      const Interval& iv = table.components[c];
      hit[rep][c] = iv.lower - tol <= t && t <= iv.upper + tol ? 1 : 0;
      width[rep][c] = table.components[c].width();
    }
  });

  CoverageReport report;
  report.method = method;
  report.reps = settings.reps;
  report.labels = component_labels(r, p);
  report.coverage.assign(k, 0.0);
  report.mean_width.assign(k, 0.0);
  for (std::size_t rep = 0; rep < settings.reps; ++rep)
    for (std::size_t c = 0; c < k; ++c) {
      report.coverage[c] += hit[rep][c];
      report.mean_width[c] += width[rep][c];
    }
  for (std::size_t c = 0; c < k; ++c) {
    report.coverage[c] /= static_cast<double>(settings.reps);
    report.mean_width[c] /= static_cast<double>(settings.reps);
  }
  return report;
}

}  // namespace

CoverageReport coverage_study(const FixedDesignSpec& spec, CoverageMethod method, const CoverageSettings& settings) {
  spec.validate();
  const Mat x = design_matrix(spec);
  return run_coverage(spec.n, spec.r, spec.p, spec.beta, method, settings, [&](std::size_t rep) {
    return Dataset(x, x * spec.beta.transpose() + draw_errors(spec, rep + 1));
  });
}

CoverageReport coverage_study(const JointDesignSpec& spec, CoverageMethod method, const CoverageSettings& settings) {
  spec.validate();
  return run_coverage(spec.n, spec.r, spec.p, spec.estimand(), method, settings,
                      [&](std::size_t rep) { return gen_joint(spec, rep + 1); });
}

}  // namespace mvboot
