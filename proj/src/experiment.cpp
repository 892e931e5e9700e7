#include "fairpark/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <omp.h>

#include "fairpark/fairness.hpp"
#include "fairpark/rng.hpp"

namespace fairpark {

using nlohmann::json;

namespace {

// Independent RNG streams derived from the master seed.
constexpr std::uint64_t kTrialStream = 1;
constexpr std::uint64_t kPoolStream = 2;
constexpr std::uint64_t kBootstrapStream = 3;
constexpr std::uint64_t kScenarioStream = 4;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return derive_seed(derive_seed(master, stream), index);
}

class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw std::invalid_argument("config: '" + where_ + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("config: " + where_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) {
    seen_.insert(key);
    return obj_.contains(key);
  }
  const json& at(const char* key) const { return obj_.at(key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw std::invalid_argument("config: unknown key '" + where_ + "." + key + "'");
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

BoundingBox box_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 4) throw std::invalid_argument("config: region must be [min_lon, min_lat, max_lon, max_lat]");
  const BoundingBox b{v[0], v[1], v[2], v[3]};
  if (!b.valid()) throw std::invalid_argument("config: empty region");
  return b;
}

json box_json(const BoundingBox& b) { return json::array({b.min_lon, b.min_lat, b.max_lon, b.max_lat}); }

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double mean(std::span<const double> v) {
  return v.empty() ? kNaN : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

template <typename F>
void for_each_trial(int n, int threads, Execution exec, F&& body) {
  if (exec == Execution::serial) {
    for (int t = 0; t < n; ++t) body(t);
    return;
  }
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int t = 0; t < n; ++t) body(t);
}

MethodOutcome outcome_from(Method m, const Assignment& a, double ms) {
  MethodOutcome o;
  o.method = m;
  o.ok = true;
  const MetricReport r = compute_metrics(a.beta);
  o.mean_envy_min = to_minutes(r.mean_envy);
  o.mean_walk_min = to_minutes(r.mean_walk);
  o.jains = r.jains;
  o.converged = true;
  o.runtime_ms = ms;
  return o;
}

MethodOutcome failed(Method m, std::string status) {
  MethodOutcome o;
  o.method = m;
  o.status = std::move(status);
  o.mean_envy_min = o.mean_walk_min = o.jains = o.initial_envy_min = kNaN;
  return o;
}

MethodOutcome run_method(const Instance& inst, Method m, const MinEnvyParams& params) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    switch (m) {
      case Method::min_sum:
        return outcome_from(m, min_sum(inst), elapsed());
      case Method::no_scheme:
        return outcome_from(m, no_scheme(inst), elapsed());
      case Method::min_envy: {
        const MinEnvyResult res = min_envy(inst, params);
        MethodOutcome o = outcome_from(m, res.assignment, elapsed());
        o.iterations = res.trace.iterations();
        o.converged = res.trace.converged;
        o.initial_envy_min = to_minutes(res.trace.initial_mean_envy);
        for (const IterationRecord& rec : res.trace.records) o.every_iterate_feasible &= rec.feasible;
        return o;
      }
    }
  } catch (const NoSpaceError&) {
    return failed(m, "no_space");
  } catch (const InfeasibleError&) {
    return failed(m, "infeasible");
  }
  return failed(m, "error");
}

// Paired per-trial values of one metric for two methods, over trials where
// both succeeded.
void paired(const BatchResult& batch, Method ours, Method base, double MethodOutcome::*field,
            std::vector<double>& a, std::vector<double>& b) {
  for (const TrialRow& row : batch.rows) {
    const MethodOutcome& x = row.get(ours);
    const MethodOutcome& y = row.get(base);
    if (!x.ok || !y.ok) continue;
    a.push_back(x.*field);
    b.push_back(y.*field);
  }
}

json ci_json(const Interval& ci) { return json::array({num_json(ci.low), num_json(ci.high)}); }

json improvement_json(const Improvement& imp, const ExperimentConfig& cfg, std::uint64_t boot_index) {
  const Interval ci = bootstrap_mean_ci(imp.per_trial_pct, cfg.bootstrap_resamples, cfg.confidence,
                                        stream_seed(cfg.seed, kBootstrapStream, boot_index));
  return {{"mean_pct", num_json(imp.mean_pct)}, {"ci", ci_json(ci)}, {"used", imp.used}, {"excluded", imp.excluded}};
}

json difference_json(std::span<const double> base, std::span<const double> ours, const ExperimentConfig& cfg,
                     std::uint64_t boot_index) {
  std::vector<double> d;
  for (std::size_t i = 0; i < base.size(); ++i) d.push_back(base[i] - ours[i]);
  const Interval ci = bootstrap_mean_ci(d, cfg.bootstrap_resamples, cfg.confidence,
                                        stream_seed(cfg.seed, kBootstrapStream, boot_index));
  return {{"mean", num_json(mean(d))}, {"ci", ci_json(ci)}, {"holds", std::isfinite(ci.low) && ci.low > 0.0}};
}

// Jain's index is better when larger: (ours - baseline) / baseline.
Improvement jains_improvement(std::span<const double> ours, std::span<const double> base) {
  return relative_improvement(base, ours, false);
}

}  // namespace

const char* to_string(DataSource s) {
  switch (s) {
    case DataSource::synthetic:
      return "synthetic";
    case DataSource::nyc_csv:
      return "nyc-csv";
    case DataSource::sumo_xml:
      return "sumo-xml";
  }
  return "?";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::min_envy:
      return "min-envy";
    case Method::min_sum:
      return "min-sum";
    case Method::no_scheme:
      return "no-scheme";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  for (Method m : kAllMethods)
    if (name == to_string(m)) return m;
  throw std::invalid_argument("unknown method '" + name + "'");
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig c;
  ObjectReader top(doc, "config");
  top.read("seed", c.seed);
  top.read("trials", c.trials);
  top.read("threads", c.threads);

  if (top.has("dataset")) {
    ObjectReader d(top.at("dataset"), "dataset");
    std::string source = to_string(c.source);
    d.read("source", source);
    if (source == "synthetic") {
      c.source = DataSource::synthetic;
    } else if (source == "nyc-csv") {
      c.source = DataSource::nyc_csv;
    } else if (source == "sumo-xml") {
      c.source = DataSource::sumo_xml;
      c.trial.region = kCologneBox;
    } else {
      throw std::invalid_argument("config: unknown dataset.source '" + source + "'");
    }
    d.read("path", c.path);
    d.read("synthetic_trips", c.synthetic.trips);
    d.read("synthetic_hotspots", c.synthetic.hotspots);
    d.read("sumo_default_duration_s", c.sumo.default_duration_s);
    d.read("sumo_time_origin", c.sumo.time_origin);
    if (d.has("csv_columns")) {
      ObjectReader cols(d.at("csv_columns"), "dataset.csv_columns");
      cols.read("pickup_time", c.csv.pickup_time);
      cols.read("dropoff_time", c.csv.dropoff_time);
      cols.read("pickup_lon", c.csv.pickup_lon);
      cols.read("pickup_lat", c.csv.pickup_lat);
      cols.read("dropoff_lon", c.csv.dropoff_lon);
      cols.read("dropoff_lat", c.csv.dropoff_lat);
      cols.finish();
    }
    d.finish();
  }

  if (top.has("trial")) {
    ObjectReader t(top.at("trial"), "trial");
    t.read("drivers", c.trial.n_drivers);
    t.read("lots", c.trial.n_lots);
    t.read("horizon", c.trial.horizon);
    t.read("walking_speed", c.trial.walking_speed);
    if (t.has("region")) c.trial.region = box_from(t.at("region"));
    if (t.has("time_mapping")) c.trial.time_mapping = time_mapping_from_string(t.at("time_mapping").get<std::string>());
    t.finish();
  }
  c.csv.region = c.sumo.region = c.trial.region;

  if (top.has("min_envy")) {
    ObjectReader m(top.at("min_envy"), "min_envy");
    m.read("epsilon", c.min_envy.epsilon);
    m.read("delta", c.min_envy.delta);
    m.read("maxiter", c.min_envy.maxiter);
    if (m.has("initializer")) {
      const std::string init = m.at("initializer").get<std::string>();
      if (init == "min-sum") {
        c.min_envy.initializer = Initializer::min_sum;
      } else if (init == "no-scheme") {
        c.min_envy.initializer = Initializer::no_scheme;
      } else {
        throw std::invalid_argument("config: unknown min_envy.initializer '" + init + "'");
      }
    }
    m.finish();
  }

  if (top.has("report")) {
    ObjectReader r(top.at("report"), "report");
    r.read("gamma_max_minutes", c.gamma_max_minutes);
    r.read("gamma_step_minutes", c.gamma_step_minutes);
    r.read("bootstrap_resamples", c.bootstrap_resamples);
    r.read("confidence", c.confidence);
    r.read("baseline_normalized", c.baseline_normalized);
    r.finish();
  }

  if (top.has("smartpark")) {
    ObjectReader s(top.at("smartpark"), "smartpark");
    ScenarioGenConfig& g = c.scenario;
    s.read("trials", c.smartpark_trials);
    s.read("grid", g.grid);
    s.read("spacing", g.spacing);
    s.read("horizon", g.horizon);
    s.read("request_rate", g.request_rate);
    s.read("lead_min", g.lead_min);
    s.read("lead_max", g.lead_max);
    s.read("capacity_min", g.capacity_min);
    s.read("capacity_max", g.capacity_max);
    s.read("occupancy_max", g.occupancy_max);
    s.read("departure_prob", g.departure_prob);
    s.read("price_min", g.price_min);
    s.read("price_max", g.price_max);
    s.read("limit_quantile", g.limit_quantile);
    s.read("walking_speed", g.walking_speed);
    s.read("epsilon", c.smartpark.epsilon);
    s.read("delta", c.smartpark.delta);
    s.read("maxiter", c.smartpark.maxiter);
    s.finish();
  }
  top.finish();

  if (c.trials < 0 || c.smartpark_trials < 0) throw std::invalid_argument("config: trials must be >= 0");
  if (c.source != DataSource::synthetic && c.path.empty())
    throw std::invalid_argument("config: dataset.path is required for file sources");
  if (!(c.gamma_step_minutes > 0.0) || c.gamma_max_minutes < 0.0)
    throw std::invalid_argument("config: bad exceedance grid");
  if (c.bootstrap_resamples < 1 || !(c.confidence > 0.0 && c.confidence < 1.0))
    throw std::invalid_argument("config: bad bootstrap settings");
  validate(c.min_envy);
  return c;
}

json to_json(const ExperimentConfig& c) {
  const ScenarioGenConfig& g = c.scenario;
  return {
      {"seed", c.seed},
      {"trials", c.trials},
      {"dataset",
       {{"source", to_string(c.source)},
        {"path", c.path},
        {"synthetic_trips", c.synthetic.trips},
        {"synthetic_hotspots", c.synthetic.hotspots}}},
      {"trial",
       {{"drivers", c.trial.n_drivers},
        {"lots", c.trial.n_lots},
        {"horizon", c.trial.horizon},
        {"walking_speed", c.trial.walking_speed},
        {"region", box_json(c.trial.region)},
        {"time_mapping", to_string(c.trial.time_mapping)}}},
      {"min_envy",
       {{"epsilon", c.min_envy.epsilon},
        {"delta", c.min_envy.delta},
        {"maxiter", c.min_envy.maxiter},
        {"initializer", to_string(c.min_envy.initializer)}}},
      {"report",
       {{"gamma_max_minutes", c.gamma_max_minutes},
        {"gamma_step_minutes", c.gamma_step_minutes},
        {"bootstrap_resamples", c.bootstrap_resamples},
        {"confidence", c.confidence},
        {"baseline_normalized", c.baseline_normalized}}},
      {"smartpark",
       {{"trials", c.smartpark_trials},
        {"grid", g.grid},
        {"spacing", g.spacing},
        {"horizon", g.horizon},
        {"request_rate", g.request_rate},
        {"lead_min", g.lead_min},
        {"lead_max", g.lead_max},
        {"capacity_min", g.capacity_min},
        {"capacity_max", g.capacity_max},
        {"occupancy_max", g.occupancy_max},
        {"departure_prob", g.departure_prob},
        {"price_min", g.price_min},
        {"price_max", g.price_max},
        {"limit_quantile", g.limit_quantile},
        {"walking_speed", g.walking_speed},
        {"epsilon", c.smartpark.epsilon},
        {"delta", c.smartpark.delta},
        {"maxiter", c.smartpark.maxiter}}},
  };
}

std::vector<RawTrip> load_pool(const ExperimentConfig& c) {
  switch (c.source) {
    case DataSource::synthetic:
      return generate_synthetic_trips(c.synthetic, derive_seed(c.seed, kPoolStream));
    case DataSource::nyc_csv:
      return parse_trip_csv(c.path, c.csv).trips;
    case DataSource::sumo_xml:
      return parse_sumo_trips(c.path, c.sumo).trips;
  }
  return {};
}

const MethodOutcome& TrialRow::get(Method m) const {
  for (const MethodOutcome& o : outcomes)
    if (o.method == m) return o;
  throw std::out_of_range("trial row has no outcome for method");
}

TrialRow run_trial(std::span<const RawTrip> pool, const ExperimentConfig& config, int trial) {
  TrialRow row;
  row.trial = trial;
  row.seed = stream_seed(config.seed, kTrialStream, static_cast<std::uint64_t>(trial));
  TrialConfig tc = config.trial;
  tc.seed = row.seed;
  Instance inst;
  try {
    inst = sample_trial(pool, tc);
  } catch (const std::exception&) {
    for (Method m : kAllMethods) row.outcomes.push_back(failed(m, "error"));
    return row;
  }
  for (Method m : kAllMethods) row.outcomes.push_back(run_method(inst, m, config.min_envy));
  return row;
}

BatchResult run_batch(std::span<const RawTrip> pool, const ExperimentConfig& config, Execution exec) {
  if (config.trials > 0 && pool.size() < static_cast<std::size_t>(config.trial.n_drivers))
    throw DataError("insufficient trips: pool has " + std::to_string(pool.size()) + ", trials need " +
                    std::to_string(config.trial.n_drivers));
  BatchResult out;
  out.rows.resize(config.trials);
  for_each_trial(config.trials, config.threads, exec, [&](int t) { out.rows[t] = run_trial(pool, config, t); });
  return out;
}

std::vector<std::pair<double, double>> exceedance_curve(std::span<const double> values,
                                                        std::span<const double> grid) {
  if (values.empty()) throw std::invalid_argument("exceedance_curve: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  for (double g : grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), g);
    out.emplace_back(g, static_cast<double>(above) / n);
  }
  return out;
}

std::vector<double> gamma_grid(double max, double step) {
  if (!(step > 0.0) || max < 0.0) throw std::invalid_argument("gamma_grid: bad range");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor(max / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(static_cast<double>(i) * step);
  return g;
}

Improvement relative_improvement(std::span<const double> ours, std::span<const double> baseline,
                                 bool baseline_normalized) {
  if (ours.size() != baseline.size()) throw std::invalid_argument("relative_improvement: size mismatch");
  Improvement imp;
  for (std::size_t i = 0; i < ours.size(); ++i) {
    const double denom = baseline_normalized ? baseline[i] : ours[i];
    if (ours[i] == 0.0 && baseline[i] == 0.0) {
      imp.per_trial_pct.push_back(0.0);
    } else if (denom == 0.0) {
      ++imp.excluded;
      continue;
    } else {
      imp.per_trial_pct.push_back(100.0 * (baseline[i] - ours[i]) / denom);
    }
  }
  imp.used = imp.per_trial_pct.size();
  imp.mean_pct = mean(imp.per_trial_pct);
  return imp;
}

Interval bootstrap_mean_ci(std::span<const double> values, int resamples, double confidence, std::uint64_t seed) {
  if (values.empty()) return {kNaN, kNaN};
  Rng rng(seed);
  const auto n = static_cast<std::int64_t>(values.size());
  std::vector<double> means(resamples);
  for (double& m : means) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += values[rng.uniform_int(0, n - 1)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - confidence) / 2.0;
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(resamples - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, means.size() - 1);
    return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
  };
  return {at(alpha), at(1.0 - alpha)};
}

std::string batch_csv(const BatchResult& batch, bool timings) {
  std::string out = "trial,seed,method,status,F_minutes,H_minutes,jains,iterations,converged";
  out += timings ? ",runtime_ms\n" : "\n";
  for (const TrialRow& row : batch.rows) {
    for (const MethodOutcome& o : row.outcomes) {
      out += std::to_string(row.trial) + "," + std::to_string(row.seed) + "," + to_string(o.method) + "," + o.status +
             "," + num(o.mean_envy_min) + "," + num(o.mean_walk_min) + "," + num(o.jains) + "," +
             std::to_string(o.iterations) + "," + (o.converged ? "1" : "0");
      out += timings ? "," + num(o.runtime_ms) + "\n" : "\n";
    }
  }
  return out;
}

std::string exceedance_csv(const BatchResult& batch, const ExperimentConfig& config) {
  const std::vector<double> grid = gamma_grid(config.gamma_max_minutes, config.gamma_step_minutes);
  std::vector<std::vector<std::pair<double, double>>> curves;
  std::string out = "gamma_minutes";
  for (Method m : kAllMethods) {
    out += std::string(",") + to_string(m);
    std::vector<double> v;
    for (const TrialRow& row : batch.rows)
      if (row.get(m).ok) v.push_back(row.get(m).mean_envy_min);
    curves.push_back(v.empty() ? std::vector<std::pair<double, double>>{} : exceedance_curve(v, grid));
  }
  out += "\n";
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out += num(grid[g]);
    for (const auto& c : curves) out += "," + (c.empty() ? std::string() : num(c[g].second));
    out += "\n";
  }
  return out;
}

json batch_summary(const BatchResult& batch, const ExperimentConfig& config) {
  json summary;
  summary["trials"] = batch.rows.size();
  summary["config"] = to_json(config);
  summary["improvement_definition"] =
      config.baseline_normalized ? "(baseline - ours) / baseline" : "(baseline - ours) / ours";

  json methods = json::object();
  for (Method m : kAllMethods) {
    std::vector<double> f, h, j;
    std::size_t fails = 0;
    for (const TrialRow& row : batch.rows) {
      const MethodOutcome& o = row.get(m);
      if (!o.ok) {
        ++fails;
        continue;
      }
      f.push_back(o.mean_envy_min);
      h.push_back(o.mean_walk_min);
      j.push_back(o.jains);
    }
    methods[to_string(m)] = {{"completed", f.size()},
                             {"failed", fails},
                             {"mean_F_minutes", num_json(mean(f))},
                             {"mean_H_minutes", num_json(mean(h))},
                             {"mean_jains", num_json(mean(j))}};
  }
  summary["methods"] = methods;

  int max_iter = 0;
  std::size_t converged = 0, improved = 0, all_feasible = 0, completed = 0;
  for (const TrialRow& row : batch.rows) {
    const MethodOutcome& o = row.get(Method::min_envy);
    if (!o.ok) continue;
    ++completed;
    max_iter = std::max(max_iter, o.iterations);
    converged += o.converged;
    improved += o.mean_envy_min <= o.initial_envy_min + 1e-9;
    all_feasible += o.every_iterate_feasible;
  }
  const double denom = completed ? static_cast<double>(completed) : kNaN;
  summary["min_envy"] = {{"max_iterations", max_iter},
                         {"converged_fraction", num_json(static_cast<double>(converged) / denom)},
                         {"not_worse_than_initial_fraction", num_json(static_cast<double>(improved) / denom)},
                         {"every_iterate_feasible_fraction", num_json(static_cast<double>(all_feasible) / denom)}};

  json comparisons = json::object();
  std::uint64_t boot = 0;
  for (Method base : {Method::min_sum, Method::no_scheme}) {
    std::vector<double> fo, fb, jo, jb;
    paired(batch, Method::min_envy, base, &MethodOutcome::mean_envy_min, fo, fb);
    paired(batch, Method::min_envy, base, &MethodOutcome::jains, jo, jb);
    comparisons[to_string(base)] = {
        {"pairs", fo.size()},
        {"F_improvement_pct", improvement_json(relative_improvement(fo, fb, config.baseline_normalized), config, boot++)},
        {"jains_improvement_pct", improvement_json(jains_improvement(jo, jb), config, boot++)},
        {"F_reduction_minutes", difference_json(fb, fo, config, boot++)},
    };
  }
  summary["min_envy_vs"] = comparisons;

  const std::vector<double> grid = gamma_grid(config.gamma_max_minutes, config.gamma_step_minutes);
  json ex = {{"gamma_minutes", grid}};
  for (Method m : kAllMethods) {
    std::vector<double> v;
    for (const TrialRow& row : batch.rows)
      if (row.get(m).ok) v.push_back(row.get(m).mean_envy_min);
    json p = json::array();
    if (!v.empty())
      for (const auto& [g, prob] : exceedance_curve(v, grid)) p.push_back(prob);
    ex[to_string(m)] = p;
  }
  summary["exceedance_F"] = ex;
  return summary;
}

SmartParkRow run_smartpark_trial(const Scenario& scenario, const SmartParkParams& params) {
  SmartParkRow row;
  row.requests = static_cast<int>(scenario.requests.size());
  auto fill = [&](ObjectiveMode mode, ModeOutcome& o) {
    const SimulationResult res = simulate(scenario, mode, params);
    o.envy_utility = res.utility_metrics.mean_envy;
    o.jains_utility = res.utility_metrics.jains;
    o.envy_walk_min = to_minutes(res.walk_metrics.mean_envy);
    o.jains_walk = res.walk_metrics.jains;
    o.assigned = static_cast<int>(res.assigned_beta.size());
    o.unassigned = static_cast<int>(res.unassigned.size());
    o.cost_increases = res.cost_increases();
    o.overbooked_cells = res.overbooked_cells();
  };
  fill(ObjectiveMode::utility, row.utility);
  fill(ObjectiveMode::fair, row.fair);
  return row;
}

SmartParkBatch run_smartpark_compare(const ExperimentConfig& config, Execution exec) {
  SmartParkBatch out;
  out.rows.resize(config.smartpark_trials);
  for_each_trial(config.smartpark_trials, config.threads, exec, [&](int t) {
    const std::uint64_t seed = stream_seed(config.seed, kScenarioStream, static_cast<std::uint64_t>(t));
    SmartParkRow row = run_smartpark_trial(generate_scenario(config.scenario, seed), config.smartpark);
    row.trial = t;
    row.seed = seed;
    out.rows[t] = row;
  });
  return out;
}

std::string smartpark_csv(const SmartParkBatch& batch) {
  std::string out =
      "trial,seed,requests,mode,F_utility,jains_utility,F_walk_minutes,jains_walk,assigned,unassigned,"
      "cost_increases,overbooked_cells\n";
  for (const SmartParkRow& row : batch.rows) {
    for (const auto& [name, o] : {std::pair{"utility", &row.utility}, std::pair{"fair", &row.fair}}) {
      out += std::to_string(row.trial) + "," + std::to_string(row.seed) + "," + std::to_string(row.requests) + "," +
             name + "," + num(o->envy_utility) + "," + num(o->jains_utility) + "," + num(o->envy_walk_min) + "," +
             num(o->jains_walk) + "," + std::to_string(o->assigned) + "," + std::to_string(o->unassigned) + "," +
             std::to_string(o->cost_increases) + "," + std::to_string(o->overbooked_cells) + "\n";
    }
  }
  return out;
}

json smartpark_summary(const SmartParkBatch& batch, const ExperimentConfig& config) {
  std::vector<double> fu, ff, ju, jf, wu, wf;
  long increases = 0, overbooked = 0, unassigned_u = 0, unassigned_f = 0, requests = 0;
  for (const SmartParkRow& r : batch.rows) {
    fu.push_back(r.utility.envy_utility);
    ff.push_back(r.fair.envy_utility);
    ju.push_back(r.utility.jains_utility);
    jf.push_back(r.fair.jains_utility);
    wu.push_back(r.utility.envy_walk_min);
    wf.push_back(r.fair.envy_walk_min);
    increases += r.utility.cost_increases + r.fair.cost_increases;
    overbooked += r.utility.overbooked_cells + r.fair.overbooked_cells;
    unassigned_u += r.utility.unassigned;
    unassigned_f += r.fair.unassigned;
    requests += r.requests;
  }
  std::uint64_t boot = 100;
  json s;
  s["trials"] = batch.rows.size();
  s["config"] = to_json(config);
  s["requests"] = requests;
  s["unassigned"] = {{"utility", unassigned_u}, {"fair", unassigned_f}};
  s["cost_increases"] = increases;
  s["overbooked_cells"] = overbooked;
  s["mean_F_utility"] = {{"utility", num_json(mean(fu))}, {"fair", num_json(mean(ff))}};
  s["fair_vs_utility"] = {
      {"F_improvement_pct", improvement_json(relative_improvement(ff, fu, config.baseline_normalized), config, boot++)},
      {"jains_improvement_pct", improvement_json(jains_improvement(jf, ju), config, boot++)},
      {"F_reduction", difference_json(fu, ff, config, boot++)},
      {"F_walk_improvement_pct",
       improvement_json(relative_improvement(wf, wu, config.baseline_normalized), config, boot++)},
  };
  return s;
}

}  // namespace fairpark
