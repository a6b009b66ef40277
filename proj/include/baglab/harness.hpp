#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "baglab/model_gen.hpp"
#include "baglab/multipliers.hpp"

namespace baglab::harness {

inline constexpr int kSchemaVersion = 1;

struct ResultRow {
  double gamma = 0.0;
  double theta = 1.0;
  std::string scheme;
  int B = 1;
  Index n = 0;
  int reps = 0;
  std::optional<double> emp_bias, emp_var, emp_risk, emp_se;
  std::optional<double> th_bias, th_var, th_risk;
  bool near_threshold = false;
  std::vector<std::pair<std::string, std::string>> extra;

  void add_extra(const std::string& key, double value);
  void add_extra(const std::string& key, const std::string& value);
  std::optional<double> extra_value(const std::string& key) const;
};

struct Table {
  std::vector<std::string> meta;  // "key=value" pairs for the second comment line
  std::vector<ResultRow> rows;
};

std::string format_number(double v);
void write_csv(const Table& table, std::ostream& os);
std::string to_csv(const Table& table);
// Parses CSV produced by write_csv (used by tests and tooling).
Table parse_csv(const std::string& text);

// ---- execution ----------------------------------------------------------

// Runs body(0..count-1) on up to `threads` workers (0 = hardware concurrency).
void parallel_for(int count, int threads, const std::function<void(int)>& body);

struct RunOptions {
  int threads = 0;
};

struct Overrides {
  std::optional<Index> n;
  std::optional<std::vector<Index>> ns;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> gammas;
  std::optional<std::vector<double>> thetas;
  std::optional<int> B;
  std::optional<double> r;
  std::optional<double> sigma;
};

const std::vector<std::string>& preset_names();

Table run_preset(const std::string& name, const Overrides& overrides, const RunOptions& options = {});

struct ExperimentConfig {
  std::optional<std::string> preset;
  Index n = 400;
  std::vector<double> gamma_grid;
  std::string scheme = "bernoulli:0.5";
  int B = 1;
  double r = 1.0;
  double sigma = 1.0;
  std::string covariance = "isotropic";
  int repetitions = 100;
  std::uint64_t seed = 0;
  std::string output;
  Overrides overrides;  // preset mode only
};

// Throws ValidationError listing every offending field.
ExperimentConfig parse_config(const std::string& json_text);
void validate(const ExperimentConfig& cfg);

Table run_custom(const ExperimentConfig& cfg, const RunOptions& options = {});
Table run_config(const ExperimentConfig& cfg, const RunOptions& options = {});

// ---- timing -------------------------------------------------------------

struct BenchOptions {
  std::vector<Index> ns{400, 600, 800};
  double gamma = 1.2;
  int runs = 5;
  int warmup = 1;
  std::uint64_t seed = 1;
};

// table1: single sketches (B = 1) with Bernoulli, orthogonal and multinomial
// multipliers; table2: bagged with B = 10 (Bernoulli, classical, orthogonal).
Table run_bench(const std::string& name, const BenchOptions& options);

}  // namespace baglab::harness
