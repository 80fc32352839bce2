#include "mvboot/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mvboot/asymptotics.hpp"
#include "mvboot/bootstrap.hpp"
#include "mvboot/intervals.hpp"
#include "mvboot/mallows.hpp"
#include "mvboot/rng.hpp"
#include "mvboot/simulate.hpp"

namespace mvboot::cli {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> all_predictors(const std::vector<std::string>& predictors,
                                        const std::vector<std::string>& factors) {
  std::vector<std::string> out = predictors;
  for (const auto& f : factors)
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  return out;
}

bool is_data_command(Subcommand s) {
  return s == Subcommand::Fit || s == Subcommand::BootFixed || s == Subcommand::BootPairs;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); };
  if (!(alpha > 0.0 && alpha < 1.0)) fail("--alpha must lie in (0, 1)");
  if (replicates == 1) fail("--B must be at least 2");
  if (is_data_command(subcommand)) {
    if (input.empty()) fail("--input is required");
    if (responses.empty()) fail("--responses is required");
    const auto preds = all_predictors(predictors, factors);
    if (preds.empty() && !intercept) fail("no predictors and no intercept");
    std::set<std::string> seen;
    for (const auto& name : responses)
      if (!seen.insert(name).second) fail("response '" + name + "' listed twice");
    for (const auto& name : preds)
      if (seen.count(name)) fail("column '" + name + "' is both a response and a predictor");
  }
  if (subcommand == Subcommand::Simulate) {
    static const std::set<std::string> kinds{"table1", "table2", "coverage", "fixed-data", "joint-data"};
    if (!kinds.count(experiment)) fail("unknown experiment '" + experiment + "'");
    if (sizes.empty()) fail("--sizes is empty");
    for (const long s : sizes)
      if (s < 2) fail("sample sizes must be at least 2");
    if (n < 2) fail("--n must be at least 2");
    if (reps < 1) fail("--reps must be positive");
  }
  if (subcommand == Subcommand::MallowsCheck) {
    static const std::set<std::string> checks{"theorem3", "lemmas", "lemma6"};
    if (!checks.count(check)) fail("unknown check '" + check + "'");
    if (p < 1 || r < 1 || atoms < 1 || n < 2) fail("--n, --p, --r, --atoms must be positive");
    if (trials < 1 || instances < 1) fail("--trials and --instances must be positive");
    if (check == "lemmas" && reps < 2) fail("--reps must be at least 2");
  }
}

CsvTable parse_csv(std::istream& in) {
  if (!in) throw Error(ErrorKind::IoError, "cannot read CSV input");
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  bool line_has_content = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (line_has_content || record.size() > 1 || !record.front().empty()) records.push_back(std::move(record));
    record.clear();
    line_has_content = false;
  };

  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          quoted = true;
          field_started = true;
          line_has_content = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        line_has_content = true;
        end_field();
        break;
      case '\r':
        if (in.peek() == '\n') break;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
        line_has_content = true;
    }
  }
  if (quoted) throw Error(ErrorKind::IoError, "CSV input ends inside a quoted field");
  if (line_has_content || !field.empty()) end_record();

  if (records.empty()) throw Error(ErrorKind::EmptyData, "CSV input has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (auto& h : table.header) h = trim(h);
  table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  return table;
}

namespace {

double parse_cell(const std::string& raw, std::size_t row, const std::string& column) {
  const std::string text = trim(raw);
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "row " << row << ", column '" << column << "': '" << raw << "' is not a number";
    throw Error(ErrorKind::NonNumericCell, msg.str());
  }
  return value;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

}  // namespace

Encoding encode(const CsvTable& table, const std::vector<std::string>& responses,
                const std::vector<std::string>& predictors, const std::vector<std::string>& factors,
                bool intercept, bool center_responses) {
  std::map<std::string, std::size_t> column_of;
  for (std::size_t j = 0; j < table.header.size(); ++j) column_of.emplace(table.header[j], j);
  auto column = [&](const std::string& name) {
    const auto it = column_of.find(name);
    if (it == column_of.end()) throw Error(ErrorKind::MissingColumn, "column '" + name + "' not found");
    return it->second;
  };

  const auto preds = all_predictors(predictors, factors);
  for (const auto& name : responses) column(name);
  for (const auto& name : preds) column(name);
  if (table.rows.empty()) throw Error(ErrorKind::EmptyData, "CSV input has a header but no data rows");

  const std::size_t n = table.rows.size();
  auto cell = [&](std::size_t i, std::size_t j) -> const std::string& {
    static const std::string empty;
    return j < table.rows[i].size() ? table.rows[i][j] : empty;
  };

  std::vector<Vec> columns;
  std::vector<std::string> names;
  std::vector<std::string> notes;
  notes.push_back(intercept ? "intercept: column of ones" : "intercept: none");
  if (intercept) {
    columns.push_back(Vec::Ones(static_cast<Index>(n)));
    names.push_back("(Intercept)");
  }
  const std::set<std::string> factor_set(factors.begin(), factors.end());
  bool first_factor = true;
  for (const auto& name : preds) {
    const std::size_t j = column(name);
    if (!factor_set.count(name)) {
      Vec v(static_cast<Index>(n));
      for (std::size_t i = 0; i < n; ++i) v(static_cast<Index>(i)) = parse_cell(cell(i, j), i + 1, name);
      columns.push_back(std::move(v));
      names.push_back(name);
      continue;
    }
    std::vector<std::string> levels;
    for (std::size_t i = 0; i < n; ++i) levels.push_back(trim(cell(i, j)));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.size() < 2)
      throw Error(ErrorKind::RankDeficientAfterEncoding, "factor '" + name + "' has a single level");
    const bool full = !intercept && first_factor;
    first_factor = false;
    const std::size_t start = full ? 0 : 1;
    for (std::size_t k = start; k < levels.size(); ++k) {
      Vec v(static_cast<Index>(n));
      for (std::size_t i = 0; i < n; ++i) v(static_cast<Index>(i)) = trim(cell(i, j)) == levels[k] ? 1.0 : 0.0;
      columns.push_back(std::move(v));
      names.push_back(name + levels[k]);
    }
    if (full)
      notes.push_back(name + ": one dummy per level (" + join(levels, ", ") + ")");
    else
      notes.push_back(name + ": treatment coding, reference level " + levels.front());
  }

  const auto p = static_cast<Index>(columns.size());
  if (static_cast<Index>(n) <= p) {
    std::ostringstream msg;
    msg << "design has " << p << " columns after encoding but only " << n << " rows";
    throw Error(ErrorKind::RankDeficientAfterEncoding, msg.str());
  }
  Mat x(static_cast<Index>(n), p);
  for (Index k = 0; k < p; ++k) x.col(k) = columns[static_cast<std::size_t>(k)];

  Mat y(static_cast<Index>(n), static_cast<Index>(responses.size()));
  for (std::size_t a = 0; a < responses.size(); ++a) {
    const std::size_t j = column(responses[a]);
    for (std::size_t i = 0; i < n; ++i)
      y(static_cast<Index>(i), static_cast<Index>(a)) = parse_cell(cell(i, j), i + 1, responses[a]);
  }
  if (center_responses) {
    y = y.rowwise() - y.colwise().mean();
    notes.push_back("responses: centered at their means");
  }
  return {Dataset(std::move(x), std::move(y), std::move(names), responses), std::move(notes)};
}

Encoding ingest_csv(const std::string& path, const std::vector<std::string>& responses,
                    const std::vector<std::string>& predictors, const std::vector<std::string>& factors,
                    bool intercept, bool center_responses) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return encode(parse_csv(in), responses, predictors, factors, intercept, center_responses);
}

double round3(double x) {
  const double r = std::floor(x * 1000.0 + 0.5) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::BlockNotSPD:
    case ErrorKind::UnequalSupportSizes:
    case ErrorKind::GradientMismatch:
      return 2;
    case ErrorKind::MissingColumn:
    case ErrorKind::NonNumericCell:
    case ErrorKind::EmptyData:
    case ErrorKind::RankDeficientAfterEncoding:
    case ErrorKind::IoError:
      return 3;
    case ErrorKind::SingularDesign:
    case ErrorKind::NearSingular:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::AsymmetricInput:
    case ErrorKind::DegenerateResiduals:
      return 4;
    case ErrorKind::SingularResamples:
    case ErrorKind::InsufficientDraws:
      return 5;
  }
  return 1;
}

namespace {

std::string fmt3(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", round3(x));
  return buf;
}

std::string fmtg(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string interval_text(const Interval& iv) { return "(" + lpad(fmt3(iv.lower), 9) + ", " + lpad(fmt3(iv.upper), 9) + ")"; }

std::string_view name(Subcommand s) {
  switch (s) {
    case Subcommand::Fit: return "fit";
    case Subcommand::BootFixed: return "boot-fixed";
    case Subcommand::BootPairs: return "boot-pairs";
    case Subcommand::Simulate: return "simulate";
    case Subcommand::MallowsCheck: return "mallows-check";
  }
  return "";
}

json interval_json(const IntervalTable& table) {
  json comps = json::array();
  for (const auto& iv : table.components)
    comps.push_back({{"label", iv.label.text()},
                     {"response", iv.label.response},
                     {"predictor", iv.label.predictor},
                     {"lower", round3(iv.lower)},
                     {"upper", round3(iv.upper)}});
  return {{"method", table.method}, {"components", comps}};
}

json data_config_json(const RunConfig& cfg, std::size_t replicates) {
  json c{{"input", cfg.input},
         {"responses", cfg.responses},
         {"predictors", cfg.predictors},
         {"factors", cfg.factors},
         {"intercept", cfg.intercept},
         {"center_responses", cfg.center_responses},
         {"alpha", cfg.alpha}};
  if (replicates) c["B"] = replicates;
  return c;
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void matrix_table(std::ostream& out, const Mat& m, const std::vector<std::string>& row_names,
                  const std::vector<std::string>& col_names) {
  std::size_t w0 = 4;
  for (const auto& s : row_names) w0 = std::max(w0, s.size());
  std::size_t w = 10;
  for (const auto& s : col_names) w = std::max(w, s.size() + 1);
  out << pad("", w0);
  for (const auto& s : col_names) out << ' ' << lpad(s, w);
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    out << pad(row_names[static_cast<std::size_t>(i)], w0);
    for (Index j = 0; j < m.cols(); ++j) out << ' ' << lpad(fmt3(m(i, j)), w);
    out << '\n';
  }
}

// Intervals side by side, one row per vec(beta) component.
void interval_rows(std::ostream& out, const std::vector<const IntervalTable*>& tables, const Vec* estimate,
                   const Vec* truth, const char* truth_name) {
  const auto& comps = tables.front()->components;
  std::size_t w0 = 9;
  for (const auto& iv : comps) w0 = std::max(w0, iv.label.text().size());
  const std::size_t wi = 22;
  out << pad("component", w0);
  if (estimate) out << "  " << lpad("estimate", 9);
  if (truth) out << "  " << lpad(truth_name, 9);
  for (const auto* t : tables) out << "  " << pad(t->method, wi);
  out << '\n';
  for (std::size_t k = 0; k < comps.size(); ++k) {
    out << pad(comps[k].label.text(), w0);
    if (estimate) out << "  " << lpad(fmt3((*estimate)(static_cast<Index>(k))), 9);
    if (truth) out << "  " << lpad(fmt3((*truth)(static_cast<Index>(k))), 9);
    for (const auto* t : tables) out << "  " << pad(interval_text(t->components[k]), wi);
    out << '\n';
  }
}

std::string render_data(const RunConfig& cfg) {
  const Encoding enc =
      ingest_csv(cfg.input, cfg.responses, cfg.predictors, cfg.factors, cfg.intercept, cfg.center_responses);
  const Dataset& data = enc.data;
  const FitResult fit = fit_ols(data);
  const auto labels = component_labels(data.response_names(), data.predictor_names());
  const Vec estimate = vec(fit.beta_hat);
  std::ostringstream out;

  if (cfg.subcommand == Subcommand::Fit) {
    if (cfg.format == Format::Json) {
      json est = json::array();
      for (std::size_t k = 0; k < labels.size(); ++k)
        est.push_back({{"label", labels[k].text()}, {"value", round3(estimate(static_cast<Index>(k)))}});
      json j{{"command", "fit"},
             {"config", data_config_json(cfg, 0)},
             {"coding", enc.notes},
             {"n", data.n()},
             {"responses", data.response_names()},
             {"predictors", data.predictor_names()},
             {"beta_hat", matrix_json(fit.beta_hat)},
             {"sigma_hat", matrix_json(fit.sigma_hat)},
             {"estimates", est}};
      out << j.dump(2) << '\n';
    } else {
      out << "# fit: n = " << data.n() << ", p = " << data.p() << ", r = " << data.r() << '\n';
      for (const auto& note : enc.notes) out << "# " << note << '\n';
      out << "\nbeta_hat (responses by predictors)\n";
      matrix_table(out, fit.beta_hat, data.response_names(), data.predictor_names());
      out << "\nsigma_hat (divisor n)\n";
      matrix_table(out, fit.sigma_hat, data.response_names(), data.response_names());
    }
    return out.str();
  }

  const bool fixed = cfg.subcommand == Subcommand::BootFixed;
  BootConfig boot = BootConfig::with_default_replicates(data.n(), cfg.seed);
  if (cfg.replicates) boot.replicates = cfg.replicates;
  boot.alpha = cfg.alpha;
  const BootstrapDraws draws = fixed ? residual_bootstrap(fit, data.x(), boot) : pairs_bootstrap(data, boot);
  const IntervalTable percentile = percentile_interval(draws.draws, cfg.alpha, labels);
  const IntervalTable closed = fixed ? fixed_design_intervals(fit, cfg.alpha, labels)
                                     : sandwich_intervals(sandwich_parts(data, fit), fit, cfg.alpha, labels);

  if (cfg.format == Format::Json) {
    json est = json::array();
    for (std::size_t k = 0; k < labels.size(); ++k)
      est.push_back({{"label", labels[k].text()}, {"value", round3(estimate(static_cast<Index>(k)))}});
    json j{{"command", std::string(name(cfg.subcommand))},
           {"bootstrap", std::string(to_string(draws.method))},
           {"seed", cfg.seed},
           {"config", data_config_json(cfg, boot.replicates)},
           {"coding", enc.notes},
           {"estimates", est},
           {"tables", json::array({interval_json(percentile), interval_json(closed)})}};
    if (!fixed) j["redraws"] = draws.redraws;
    out << j.dump(2) << '\n';
  } else {
    out << "# " << name(cfg.subcommand) << ": " << to_string(draws.method) << " bootstrap, n = " << data.n()
        << ", B = " << boot.replicates << ", alpha = " << cfg.alpha << ", seed = " << cfg.seed << '\n';
    for (const auto& note : enc.notes) out << "# " << note << '\n';
    if (!fixed) out << "# singular resamples redrawn: " << draws.redraws << '\n';
    out << '\n';
    interval_rows(out, {&percentile, &closed}, &estimate, nullptr, "");
  }
  return out.str();
}

ExperimentConfig experiment_config(const RunConfig& cfg) {
  return cfg.config_path.empty() ? default_experiment_config() : load_experiment_config(cfg.config_path);
}

CoverageMethod parse_method(const std::string& text) {
  for (const auto m : {CoverageMethod::ResidualPercentile, CoverageMethod::PairsPercentile, CoverageMethod::NormalFixed,
                       CoverageMethod::NormalSandwich})
    if (to_string(m) == text) return m;
  throw Error(ErrorKind::ConfigError, "unknown coverage method '" + text + "'");
}

std::string render_simulate(const RunConfig& cfg) {
  const ExperimentConfig ec = experiment_config(cfg);
  std::ostringstream out;
  json config{{"experiment", cfg.experiment}, {"generator", format_experiment_config(ec)}, {"alpha", cfg.alpha}};

  if (cfg.experiment == "fixed-data" || cfg.experiment == "joint-data") {
    const Dataset data = cfg.experiment == "fixed-data" ? gen_fixed(ec.fixed_spec(cfg.n, cfg.seed))
                                                        : gen_joint(ec.joint_spec(cfg.n, cfg.seed));
    std::vector<std::string> head = data.predictor_names();
    head.insert(head.end(), data.response_names().begin(), data.response_names().end());
    out << join(head, ",") << '\n';
    char buf[40];
    for (Index i = 0; i < data.n(); ++i) {
      for (Index j = 0; j < data.p() + data.r(); ++j) {
        const double v = j < data.p() ? data.x()(i, j) : data.y()(i, j - data.p());
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << (j ? "," : "") << buf;
      }
      out << '\n';
    }
    return out.str();
  }

  if (cfg.experiment == "coverage") {
    const CoverageMethod method = parse_method(cfg.method);
    CoverageSettings settings;
    settings.reps = cfg.reps;
    settings.replicates = cfg.replicates;
    settings.alpha = cfg.alpha;
    settings.seed = child_seed(cfg.seed, 0xC0);
    const bool random_design =
        method == CoverageMethod::PairsPercentile || method == CoverageMethod::NormalSandwich;
    const CoverageReport rep = random_design ? coverage_study(ec.joint_spec(cfg.n, cfg.seed), method, settings)
                                             : coverage_study(ec.fixed_spec(cfg.n, cfg.seed), method, settings);
    const std::size_t b = cfg.replicates ? cfg.replicates : static_cast<std::size_t>(4 * cfg.n);
    if (cfg.format == Format::Json) {
      config["method"] = cfg.method;
      config["n"] = cfg.n;
      config["reps"] = cfg.reps;
      config["B"] = b;
      json comps = json::array();
      for (std::size_t k = 0; k < rep.labels.size(); ++k)
        comps.push_back(
            {{"label", rep.labels[k].text()}, {"coverage", rep.coverage[k]}, {"mean_width", rep.mean_width[k]}});
      out << json{{"command", "simulate"}, {"seed", cfg.seed}, {"config", config}, {"components", comps}}.dump(2)
          << '\n';
    } else {
      out << "# coverage: " << cfg.method << ", " << (random_design ? "random" : "fixed") << " design, n = " << cfg.n
          << ", reps = " << cfg.reps << ", B = " << b << ", alpha = " << cfg.alpha << ", seed = " << cfg.seed
          << "\n\n";
      out << pad("component", 12) << "  " << lpad("coverage", 9) << "  " << lpad("width", 9) << '\n';
      for (std::size_t k = 0; k < rep.labels.size(); ++k)
        out << pad(rep.labels[k].text(), 12) << "  " << lpad(fmt3(rep.coverage[k]), 9) << "  "
            << lpad(fmt3(rep.mean_width[k]), 9) << '\n';
    }
    return out.str();
  }

  const TableKind kind = cfg.experiment == "table1" ? TableKind::Table1 : TableKind::Table2;
  std::vector<Index> sizes(cfg.sizes.begin(), cfg.sizes.end());
  const TableExperiment exp = run_table_experiment(kind, sizes, cfg.seed, ec, cfg.alpha);
  if (cfg.format == Format::Json) {
    config["sizes"] = cfg.sizes;
    json rows = json::array();
    for (const auto& row : exp.rows) {
      json est = json::array();
      const Vec truth = vec(row.estimand);
      for (Index k = 0; k < truth.size(); ++k) est.push_back(truth(k));
      rows.push_back({{"n", row.n},
                      {"B", row.replicates},
                      {"estimand", est},
                      {"tables", json::array({interval_json(row.bootstrap), interval_json(row.closed_form)})}});
    }
    out << json{{"command", "simulate"}, {"seed", cfg.seed}, {"config", config}, {"rows", rows}}.dump(2) << '\n';
  } else {
    out << "# " << to_string(kind) << ": "
        << (kind == TableKind::Table1 ? "fixed design, residual bootstrap" : "random design, pairs bootstrap")
        << ", B = 4n, alpha = " << cfg.alpha << ", seed = " << cfg.seed << '\n';
    for (const auto& row : exp.rows) {
      out << "\nn = " << row.n << ", B = " << row.replicates << '\n';
      const Vec truth = vec(row.estimand);
      interval_rows(out, {&row.bootstrap, &row.closed_form}, nullptr, &truth, "target");
    }
  }
  return out.str();
}

std::string render_mallows(const RunConfig& cfg) {
  std::vector<BoundReport> reports;
  std::vector<std::string> names;
  std::ostringstream header;
  if (cfg.check == "theorem3") {
    header << "theorem3: n = " << cfg.n << ", p = " << cfg.p << ", r = " << cfg.r << ", atoms = " << cfg.atoms
           << ", trials = " << cfg.trials;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
      const std::uint64_t s = child_seed(cfg.seed, i);
      const auto inst = random_theorem3_instance(cfg.n, cfg.p, cfg.r, cfg.atoms, child_seed(s, 0));
      reports.push_back(check_theorem3_bound(inst.x, inst.f, inst.g, cfg.trials, child_seed(s, 1)));
      names.push_back("instance " + std::to_string(i));
    }
  } else if (cfg.check == "lemmas") {
    const ExperimentConfig ec = experiment_config(cfg);
    header << "lemmas: n = " << cfg.n << ", p = " << ec.p << ", r = " << ec.r << ", reps = " << cfg.reps;
    const LemmaReports lr = check_lemma_bounds(ec.fixed_spec(cfg.n, cfg.seed), cfg.reps);
    reports = {lr.raw, lr.centered};
    names = {"raw residuals", "centered residuals"};
  } else {
    header << "lemma6: atoms = " << cfg.atoms << ", r = " << cfg.r;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
      Stream stream(child_seed(cfg.seed, i));
      Mat u(cfg.atoms, cfg.r), v(cfg.atoms, cfg.r);
      for (Mat* m : {&u, &v})
        for (Index a = 0; a < m->rows(); ++a)
          for (Index b = 0; b < m->cols(); ++b) (*m)(a, b) = stream.normal();
      reports.push_back(check_lemma6(u, v));
      reports.back().seed = child_seed(cfg.seed, i);
      names.push_back("instance " + std::to_string(i));
    }
  }
  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.pass ? 1 : 0;

  std::ostringstream out;
  if (cfg.format == Format::Json) {
    json list = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      json j = json::parse(reports[i].to_json());
      list.push_back({{"name", names[i]}, {"report", j}});
    }
    json config{{"check", cfg.check}, {"n", cfg.n}, {"p", cfg.p}, {"r", cfg.r}, {"atoms", cfg.atoms},
                {"trials", cfg.trials}, {"reps", cfg.reps}, {"instances", cfg.instances}};
    out << json{{"command", "mallows-check"}, {"seed", cfg.seed}, {"config", config}, {"reports", list},
                {"passed", passed}, {"total", reports.size()}}
               .dump(2)
        << '\n';
  } else {
    out << "# mallows-check " << header.str() << ", seed = " << cfg.seed << "\n\n";
    out << pad("case", 20) << lpad("estimate", 14) << lpad("bound", 14) << lpad("slack", 14) << "  pass\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
      out << pad(names[i], 20) << lpad(fmtg(reports[i].estimate), 14) << lpad(fmtg(reports[i].bound), 14)
          << lpad(fmtg(reports[i].slack), 14) << "  " << (reports[i].pass ? "yes" : "no") << '\n';
    out << "\npassed " << passed << " of " << reports.size() << '\n';
  }
  return out.str();
}

}  // namespace

std::string render(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.subcommand) {
    case Subcommand::Fit:
    case Subcommand::BootFixed:
    case Subcommand::BootPairs:
      return render_data(cfg);
    case Subcommand::Simulate:
      return render_simulate(cfg);
    case Subcommand::MallowsCheck:
      return render_mallows(cfg);
  }
  return {};
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto report = [&](std::string_view kind, int code, const std::string& message) {
    err << json{{"error", kind}, {"exit_code", code}, {"message", message}}.dump() << '\n';
    return code;
  };
  try {
    const std::string text = render(cfg);
    if (cfg.output.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw Error(ErrorKind::IoError, "cannot write '" + cfg.output + "'");
      file << text;
      if (!file) throw Error(ErrorKind::IoError, "write to '" + cfg.output + "' failed");
    }
    return 0;
  } catch (const Error& e) {
    return report(to_string(e.kind()), exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report("InternalError", 1, e.what());
  }
}

}  // namespace mvboot::cli
