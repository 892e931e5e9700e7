#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairpark/algos.hpp"
#include "fairpark/data.hpp"
#include "fairpark/smartpark.hpp"

namespace fairpark {

enum class DataSource { synthetic, nyc_csv, sumo_xml };

struct ExperimentConfig {
  std::uint64_t seed = 42;
  int trials = 500;
  int threads = 0;  // 0 = OpenMP default

  DataSource source = DataSource::synthetic;
  std::string path;  // trip file for nyc_csv / sumo_xml
  SyntheticConfig synthetic;
  CsvSchema csv;
  SumoOptions sumo;

  TrialConfig trial;  // seed field is overwritten per trial
  MinEnvyParams min_envy;

  double gamma_max_minutes = 15.0;
  double gamma_step_minutes = 0.25;
  int bootstrap_resamples = 2000;
  double confidence = 0.95;
  bool baseline_normalized = false;  // improvement relative to the baseline instead of ours

  int smartpark_trials = 100;
  ScenarioGenConfig scenario;
  SmartParkParams smartpark;
};

// Parses the JSON config described in docs/formats.md on top of the
// defaults. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);
const char* to_string(DataSource source);

// Trip pool for the configured data source. Synthetic pools are drawn from
// the master seed.
std::vector<RawTrip> load_pool(const ExperimentConfig& config);

enum class Method { min_envy, min_sum, no_scheme };
inline constexpr Method kAllMethods[] = {Method::min_envy, Method::min_sum, Method::no_scheme};
const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct MethodOutcome {
  Method method = Method::min_envy;
  bool ok = false;
  std::string status = "ok";  // ok, no_space, infeasible, error
  double mean_envy_min = 0.0;
  double mean_walk_min = 0.0;
  double jains = 0.0;
  int iterations = 0;           // min-envy solves after the initializer
  bool converged = false;
  double initial_envy_min = 0.0;  // min-envy: F of its initializer
  bool every_iterate_feasible = true;
  double runtime_ms = 0.0;
};

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::vector<MethodOutcome> outcomes;  // ordered as kAllMethods
  const MethodOutcome& get(Method m) const;
};

struct BatchResult {
  std::vector<TrialRow> rows;  // sorted by trial id
};

enum class Execution { serial, parallel };

// Runs one trial of every method on an instance drawn with `seed`.
TrialRow run_trial(std::span<const RawTrip> pool, const ExperimentConfig& config, int trial);
BatchResult run_batch(std::span<const RawTrip> pool, const ExperimentConfig& config,
                      Execution exec = Execution::parallel);

// P(value > gamma) at each grid point. Throws std::invalid_argument on
// empty values.
std::vector<std::pair<double, double>> exceedance_curve(std::span<const double> values,
                                                        std::span<const double> grid);
std::vector<double> gamma_grid(double max, double step);

struct Improvement {
  double mean_pct = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // trials with a zero denominator
  std::vector<double> per_trial_pct;
};

// Mean over trials of (baseline - ours) / ours, or / baseline when
// `baseline_normalized`, in percent. Pairs with a zero denominator are
// excluded and counted, except that two zeros count as 0%.
Improvement relative_improvement(std::span<const double> ours, std::span<const double> baseline,
                                 bool baseline_normalized = false);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Percentile bootstrap interval for the mean.
Interval bootstrap_mean_ci(std::span<const double> values, int resamples, double confidence, std::uint64_t seed);

// Per-trial CSV, one row per (trial, method). `timings` appends a runtime_ms
// column, which makes the file machine-dependent.
std::string batch_csv(const BatchResult& batch, bool timings = false);
nlohmann::json batch_summary(const BatchResult& batch, const ExperimentConfig& config);
// Exceedance table: gamma_minutes followed by one column per method.
std::string exceedance_csv(const BatchResult& batch, const ExperimentConfig& config);

struct ModeOutcome {
  double envy_utility = 0.0;  // F over final J of assigned drivers
  double jains_utility = 1.0;
  double envy_walk_min = 0.0;  // F over walking minutes of assigned drivers
  double jains_walk = 1.0;
  int assigned = 0;
  int unassigned = 0;
  int cost_increases = 0;
  int overbooked_cells = 0;
};

struct SmartParkRow {
  int trial = 0;
  std::uint64_t seed = 0;
  int requests = 0;
  ModeOutcome utility;
  ModeOutcome fair;
};

struct SmartParkBatch {
  std::vector<SmartParkRow> rows;
};

SmartParkRow run_smartpark_trial(const Scenario& scenario, const SmartParkParams& params);
SmartParkBatch run_smartpark_compare(const ExperimentConfig& config, Execution exec = Execution::parallel);
std::string smartpark_csv(const SmartParkBatch& batch);
nlohmann::json smartpark_summary(const SmartParkBatch& batch, const ExperimentConfig& config);

}  // namespace fairpark
