#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvboot/cli.hpp"

namespace {

using mvboot::cli::Format;
using mvboot::cli::RunConfig;
using mvboot::cli::Subcommand;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format) {
  sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  sub->add_option("--alpha", cfg.alpha, "Two-sided level")->capture_default_str();
  sub->add_option("--format", format, "table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  sub->add_option("--output", cfg.output, "Write the report here instead of standard output");
}

void add_data(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "CSV file with a header row")->required();
  sub->add_option("--responses", cfg.responses, "Response columns")->delimiter(',')->required();
  sub->add_option("--predictors", cfg.predictors, "Predictor columns")->delimiter(',');
  sub->add_option("--factors", cfg.factors, "Predictors to dummy-code")->delimiter(',');
  sub->add_flag("--no-intercept{false}", cfg.intercept, "Do not prepend a column of ones");
  sub->add_flag("--center-responses", cfg.center_responses, "Subtract each response's mean");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string format = "table";

  CLI::App app{"Multivariate regression with residual and pairs bootstrap inference"};
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "OLS coefficients and residual covariance");
  auto* fixed = app.add_subcommand("boot-fixed", "Residual bootstrap against fixed-design normal intervals");
  auto* pairs = app.add_subcommand("boot-pairs", "Pairs bootstrap against sandwich intervals");
  auto* sim = app.add_subcommand("simulate", "Simulated table and coverage experiments");
  auto* mal = app.add_subcommand("mallows-check", "Finite-sample Mallows bound checks");

  for (auto* sub : {fit, fixed, pairs, sim, mal}) add_common(sub, cfg, format);
  for (auto* sub : {fit, fixed, pairs}) add_data(sub, cfg);
  for (auto* sub : {fixed, pairs, sim}) sub->add_option("--B", cfg.replicates, "Bootstrap replicates (default 4n)");

  sim->add_option("--experiment", cfg.experiment, "table1, table2, coverage, fixed-data, joint-data")
      ->capture_default_str();
  sim->add_option("--sizes", cfg.sizes, "Sample sizes for table1/table2")->delimiter(',');
  sim->add_option("--config", cfg.config_path, "Generator config file");
  sim->add_option("--method", cfg.method,
                  "Coverage method: residual-percentile, pairs-percentile, normal-fixed, normal-sandwich")
      ->capture_default_str();
  sim->add_option("--n", cfg.n, "Sample size for coverage and data")->capture_default_str();
  sim->add_option("--reps", cfg.reps, "Coverage repetitions")->capture_default_str();

  mal->add_option("--check", cfg.check, "theorem3, lemmas, lemma6")->capture_default_str();
  mal->add_option("--n", cfg.n, "Rows of the design")->capture_default_str();
  mal->add_option("--p", cfg.p, "Predictors (theorem3)")->capture_default_str();
  mal->add_option("--r", cfg.r, "Responses (theorem3, lemma6)")->capture_default_str();
  mal->add_option("--atoms", cfg.atoms, "Atoms per distribution")->capture_default_str();
  mal->add_option("--trials", cfg.trials, "Cloud size per law (theorem3)")->capture_default_str();
  mal->add_option("--instances", cfg.instances, "Random instances")->capture_default_str();
  mal->add_option("--reps", cfg.reps, "Repetitions (lemmas)")->capture_default_str();
  mal->add_option("--config", cfg.config_path, "Generator config file (lemmas)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const int code = mvboot::cli::exit_code(mvboot::ErrorKind::ConfigError);
    std::cerr << nlohmann::ordered_json{{"error", "ConfigError"}, {"exit_code", code}, {"message", e.what()}}.dump()
              << '\n';
    return code;
  }

  if (*fit) cfg.subcommand = Subcommand::Fit;
  if (*fixed) cfg.subcommand = Subcommand::BootFixed;
  if (*pairs) cfg.subcommand = Subcommand::BootPairs;
  if (*sim) cfg.subcommand = Subcommand::Simulate;
  if (*mal) cfg.subcommand = Subcommand::MallowsCheck;
  cfg.format = format == "json" ? Format::Json : Format::Table;
  return mvboot::cli::run(cfg, std::cout, std::cerr);
}
