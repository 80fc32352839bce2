#pragma once

// Pipeline behind the mvboot executable: CSV ingestion, factor coding, and
// the subcommands. Kept in the library so tests can drive it directly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mvboot/error.hpp"
#include "mvboot/model.hpp"

namespace mvboot::cli {

enum class Subcommand { Fit, BootFixed, BootPairs, Simulate, MallowsCheck };
enum class Format { Table, Json };

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct RunConfig {
  Subcommand subcommand = Subcommand::Fit;
  std::string input;
  std::vector<std::string> responses;
  std::vector<std::string> predictors;
  std::vector<std::string> factors;
  bool intercept = true;
  bool center_responses = false;
  std::size_t replicates = 0;  // 0 means 4n
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  Format format = Format::Table;
  std::string output;  // empty means standard output

  // simulate
  std::string experiment = "table1";  // table1, table2, coverage, fixed-data, joint-data
  std::vector<long> sizes = {100, 500, 1000, 5000};
  std::string config_path;  // generator config; empty means built-in default
  std::string method = "residual-percentile";
  long n = 100;
  std::size_t reps = 100;

  // mallows-check
  std::string check = "theorem3";  // theorem3, lemmas, lemma6
  long p = 2;
  long r = 2;
  long atoms = 8;
  std::size_t trials = 256;
  std::size_t instances = 1;

  // Throws ConfigError.
  void validate() const;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180: comma separated, double quotes with "" escapes, CRLF or LF line
// ends, header row required. Throws EmptyData or IoError.
CsvTable parse_csv(std::istream& in);

struct Encoding {
  Dataset data;
  std::vector<std::string> notes;  // one line per predictor describing its coding
};

// Factor columns become dummies for each level except the alphabetically
// first, which is the reference. Without an intercept the first factor keeps
// all of its levels. Predictors listed only in `factors` are appended after
// the listed predictors. Throws MissingColumn, NonNumericCell, EmptyData,
// RankDeficientAfterEncoding.
Encoding encode(const CsvTable& table, const std::vector<std::string>& responses,
                const std::vector<std::string>& predictors, const std::vector<std::string>& factors,
                bool intercept, bool center_responses = false);
Encoding ingest_csv(const std::string& path, const std::vector<std::string>& responses,
                    const std::vector<std::string>& predictors, const std::vector<std::string>& factors,
                    bool intercept, bool center_responses = false);

// Half-up to three decimals.
double round3(double x);

// 2 config, 3 ingestion, 4 singular design, 5 bootstrap failure.
int exit_code(ErrorKind kind) noexcept;

// Runs the pipeline and writes the report to cfg.output or `out`. Failures
// print one JSON line {"error", "exit_code", "message"} on `err` and return
// the mapped exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// The report alone; throws on failure.
std::string render(const RunConfig& cfg);

}  // namespace mvboot::cli
