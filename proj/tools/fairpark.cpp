// Command-line front end: ingest, solve, batch, compare-smartpark, gen.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "fairpark/algos.hpp"
#include "fairpark/data.hpp"
#include "fairpark/experiment.hpp"
#include "fairpark/fairness.hpp"
#include "fairpark/io.hpp"
#include "fairpark/rng.hpp"
#include "fairpark/smartpark.hpp"

namespace fs = std::filesystem;
using namespace fairpark;
using nlohmann::json;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::optional<int> trials;
  std::string method = "min-envy";
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<int> maxiter;
  std::string out = "out";
  std::optional<int> threads;
};

ExperimentConfig load_config(const Globals& g) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : config_from_json(read_json_file(g.config));
  if (g.seed) c.seed = *g.seed;
  if (g.trials) c.trials = c.smartpark_trials = *g.trials;
  if (g.epsilon) c.min_envy.epsilon = c.smartpark.epsilon = *g.epsilon;
  if (g.delta) c.min_envy.delta = c.smartpark.delta = *g.delta;
  if (g.maxiter) c.min_envy.maxiter = c.smartpark.maxiter = *g.maxiter;
  if (g.threads) c.threads = *g.threads;
  validate(c.min_envy);
  return c;
}

json metrics_json(const Assignment& a) {
  const MetricReport r = compute_metrics(a.beta);
  json beta = json::array();
  for (double b : a.beta) beta.push_back(to_minutes(b));
  return {{"F_minutes", to_minutes(r.mean_envy)},
          {"H_minutes", to_minutes(r.mean_walk)},
          {"jains", r.jains},
          {"jains_degenerate", r.jains_degenerate},
          {"dest_lot", a.dest_lot},
          {"beta_minutes", beta}};
}

int cmd_ingest(const Globals& g, const std::string& input, const std::string& format) {
  ExperimentConfig c = load_config(g);
  ParseResult parsed;
  if (format == "nyc-csv") {
    parsed = parse_trip_csv(input, c.csv);
  } else {
    if (g.config.empty()) c.trial.region = kCologneBox;
    c.sumo.region = c.trial.region;
    parsed = parse_sumo_trips(input, c.sumo);
  }
  std::cerr << "kept " << parsed.trips.size() << " trips, dropped " << parsed.dropped << "\n";
  const int trials = g.trials ? *g.trials : 1;
  for (int t = 0; t < trials; ++t) {
    TrialConfig tc = c.trial;
    tc.seed = derive_seed(c.seed, static_cast<std::uint64_t>(t));
    char name[64];
    std::snprintf(name, sizeof name, "instance_%03d.json", t);
    save_instance(sample_trial(parsed.trips, tc), fs::path(g.out) / name);
  }
  write_text_file(fs::path(g.out) / "ingest.json",
                  json{{"input", input}, {"format", format}, {"kept", parsed.trips.size()},
                       {"dropped", parsed.dropped}, {"instances", trials}}
                          .dump(2) +
                      "\n");
  return 0;
}

int cmd_solve(const Globals& g, const std::string& instance_path, const std::string& trace_path) {
  const ExperimentConfig c = load_config(g);
  const Instance inst = load_instance(instance_path);
  const Method m = method_from_string(g.method);
  json out;
  switch (m) {
    case Method::min_sum:
      out = metrics_json(min_sum(inst));
      break;
    case Method::no_scheme:
      out = metrics_json(no_scheme(inst));
      break;
    case Method::min_envy: {
      const MinEnvyResult res = min_envy(inst, c.min_envy);
      out = metrics_json(res.assignment);
      out["iterations"] = res.trace.iterations();
      out["converged"] = res.trace.converged;
      out["initial_F_minutes"] = to_minutes(res.trace.initial_mean_envy);
      if (!trace_path.empty()) write_text_file(trace_path, res.trace.to_csv());
      break;
    }
  }
  out["method"] = to_string(m);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_batch(const Globals& g, bool timings, bool serial) {
  const ExperimentConfig c = load_config(g);
  const std::vector<RawTrip> pool = load_pool(c);
  const BatchResult b = run_batch(pool, c, serial ? Execution::serial : Execution::parallel);
  const fs::path out(g.out);
  write_text_file(out / "trials.csv", batch_csv(b, timings));
  write_text_file(out / "exceedance.csv", exceedance_csv(b, c));
  const json summary = batch_summary(b, c);
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  const json& vs = summary["min_envy_vs"];
  std::cerr << "trials " << b.rows.size() << "; mean F (min): min-envy "
            << summary["methods"]["min-envy"]["mean_F_minutes"] << ", min-sum "
            << summary["methods"]["min-sum"]["mean_F_minutes"] << ", no-scheme "
            << summary["methods"]["no-scheme"]["mean_F_minutes"] << "\n"
            << "F improvement vs min-sum " << vs["min-sum"]["F_improvement_pct"]["mean_pct"] << "%, vs no-scheme "
            << vs["no-scheme"]["F_improvement_pct"]["mean_pct"] << "%\n";
  return 0;
}

int cmd_compare(const Globals& g, const std::string& scenario_path, bool serial) {
  const ExperimentConfig c = load_config(g);
  SmartParkBatch b;
  if (!scenario_path.empty()) {
    b.rows.push_back(run_smartpark_trial(load_scenario(scenario_path), c.smartpark));
  } else {
    b = run_smartpark_compare(c, serial ? Execution::serial : Execution::parallel);
  }
  const fs::path out(g.out);
  write_text_file(out / "smartpark_trials.csv", smartpark_csv(b));
  const json summary = smartpark_summary(b, c);
  write_text_file(out / "smartpark_summary.json", summary.dump(2) + "\n");
  const json& vs = summary["fair_vs_utility"];
  std::cerr << "trials " << b.rows.size() << "; fair vs utility: F " << vs["F_improvement_pct"]["mean_pct"]
            << "%, Jain " << vs["jains_improvement_pct"]["mean_pct"] << "%\n";
  return 0;
}

int cmd_gen(const Globals& g, const std::string& kind, const std::string& file) {
  const ExperimentConfig c = load_config(g);
  const fs::path target = file.empty() ? fs::path(g.out) / (kind == "trips" ? "trips.csv" : kind + ".json") : fs::path(file);
  if (kind == "instance") {
    TrialConfig tc = c.trial;
    tc.seed = c.seed;
    save_instance(sample_trial(load_pool(c), tc), target);
  } else if (kind == "scenario") {
    save_scenario(generate_scenario(c.scenario, c.seed), target);
  } else {
    write_text_file(target, export_trip_csv(generate_synthetic_trips(c.synthetic, c.seed)));
  }
  std::cerr << "wrote " << target.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair parking-lot assignment solver and experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--trials", g.trials, "Number of trials")->check(CLI::NonNegativeNumber);
  app.add_option("--method", g.method, "Solver for `solve`")
      ->check(CLI::IsMember({"min-envy", "min-sum", "no-scheme"}));
  app.add_option("--epsilon", g.epsilon, "Band half-width")->check(CLI::PositiveNumber);
  app.add_option("--delta", g.delta, "Convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--maxiter", g.maxiter, "Iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads (0 = default)")->check(CLI::NonNegativeNumber);

  std::string input, format = "nyc-csv";
  auto* ingest = app.add_subcommand("ingest", "Trip file -> sampled instance JSON files");
  ingest->add_option("input", input, "CSV or SUMO trip file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--format", format)->check(CLI::IsMember({"nyc-csv", "sumo-xml"}));

  std::string instance_path, trace_path;
  auto* solve = app.add_subcommand("solve", "Solve one instance and print its metrics");
  solve->add_option("instance", instance_path)->required()->check(CLI::ExistingFile);
  solve->add_option("--trace", trace_path, "Write the min-envy iteration trace CSV here");

  bool timings = false, serial = false;
  auto* batch = app.add_subcommand("batch", "Run all methods over sampled trials");
  batch->add_flag("--timings", timings, "Add a runtime_ms column (not reproducible)");
  batch->add_flag("--serial", serial, "Run trials on one thread");

  std::string scenario_path;
  auto* compare = app.add_subcommand("compare-smartpark", "Utility vs fair objective in the dynamic simulator");
  compare->add_option("--scenario", scenario_path, "Run one scenario file instead of generated ones")
      ->check(CLI::ExistingFile);
  compare->add_flag("--serial", serial, "Run trials on one thread");

  std::string kind = "instance", file;
  auto* gen = app.add_subcommand("gen", "Write a synthetic instance, scenario or trip CSV");
  gen->add_option("kind", kind)->check(CLI::IsMember({"instance", "scenario", "trips"}));
  gen->add_option("--file", file, "Output file (default: <out>/<kind>.json)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*ingest) return cmd_ingest(g, input, format);
    if (*solve) return cmd_solve(g, instance_path, trace_path);
    if (*batch) return cmd_batch(g, timings, serial);
    if (*compare) return cmd_compare(g, scenario_path, serial);
    if (*gen) return cmd_gen(g, kind, file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
