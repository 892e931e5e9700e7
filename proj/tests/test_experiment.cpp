#include <doctest.h>

#include <algorithm>

#include "fairpark/experiment.hpp"
#include "fairpark/rng.hpp"

using namespace fairpark;

namespace {

ExperimentConfig small_config(int trials) {
  ExperimentConfig c;
  c.trials = trials;
  c.synthetic.trips = 600;
  c.trial.n_drivers = 30;
  c.trial.n_lots = 4;
  c.bootstrap_resamples = 200;
  c.smartpark_trials = trials;
  return c;
}

// 1 - ECDF by counting sorted values at or below each point.
double survival_oracle(std::vector<double> v, double g) {
  std::sort(v.begin(), v.end());
  std::size_t below = 0;
  while (below < v.size() && v[below] <= g) ++below;
  return 1.0 - static_cast<double>(below) / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("exceedance curve") {
  const std::vector<double> v{1, 2, 3};
  const std::vector<double> g{0.5, 2.0};
  const auto c = exceedance_curve(v, g);
  CHECK(c[0].second == 1.0);
  CHECK(c[1].second == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(exceedance_curve(std::vector<double>{}, g), std::invalid_argument);

  Rng rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> vals;
    const int n = static_cast<int>(rng.uniform_int(1, 40));
    for (int i = 0; i < n; ++i) vals.push_back(static_cast<double>(rng.uniform_int(0, 20)) / 4.0);
    const auto grid = gamma_grid(6.0, 0.25);
    const auto curve = exceedance_curve(vals, grid);
    double last = 1.0;
    for (const auto& [gamma, p] : curve) {
      CHECK(p == doctest::Approx(survival_oracle(vals, gamma)).epsilon(1e-15));
      CHECK(p <= last);
      CHECK(p >= 0.0);
      last = p;
    }
  }
}

TEST_CASE("gamma grid") {
  CHECK(gamma_grid(1.0, 0.25) == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  CHECK(gamma_grid(0.3, 0.1).size() == 4);
  CHECK_THROWS(gamma_grid(1.0, 0.0));
}

TEST_CASE("relative improvement") {
  const std::vector<double> one{1.0};
  CHECK(relative_improvement(one, std::vector<double>{2.0}).mean_pct == doctest::Approx(100.0));
  CHECK(relative_improvement(one, one).mean_pct == 0.0);
  CHECK(relative_improvement(one, std::vector<double>{2.396}).mean_pct == doctest::Approx(139.6));
  CHECK(relative_improvement(one, std::vector<double>{2.0}, true).mean_pct == doctest::Approx(50.0));
  const Improvement z = relative_improvement(std::vector<double>{0.0, 0.0, 1.0}, std::vector<double>{1.0, 0.0, 3.0});
  CHECK(z.excluded == 1);
  CHECK(z.used == 2);
  CHECK(z.mean_pct == doctest::Approx(100.0));
}

TEST_CASE("bootstrap interval") {
  const std::vector<double> flat(30, 2.5);
  const Interval f = bootstrap_mean_ci(flat, 500, 0.95, 1);
  CHECK(f.low == 2.5);
  CHECK(f.high == 2.5);
  Rng rng(2);
  std::vector<double> v;
  for (int i = 0; i < 400; ++i) v.push_back(rng.normal(1.0, 1.0));
  const Interval ci = bootstrap_mean_ci(v, 2000, 0.95, 3);
  CHECK(ci.low < 1.0 + 0.05);
  CHECK(ci.high > 1.0 - 0.05);
  CHECK(ci.high - ci.low == doctest::Approx(2 * 1.96 / 20.0).epsilon(0.2));
  CHECK(std::isnan(bootstrap_mean_ci(std::vector<double>{}, 10, 0.95, 1).low));
}

TEST_CASE("config parsing") {
  const auto doc = nlohmann::json::parse(R"({
    "seed": 7, "trials": 3,
    "trial": {"drivers": 20, "lots": 3, "time_mapping": "stretch"},
    "min_envy": {"epsilon": 0.2, "initializer": "no-scheme"},
    "report": {"baseline_normalized": true},
    "smartpark": {"trials": 4, "grid": 2}
  })");
  const ExperimentConfig c = config_from_json(doc);
  CHECK(c.seed == 7);
  CHECK(c.trial.n_drivers == 20);
  CHECK(c.trial.time_mapping == TimeMapping::stretch);
  CHECK(c.min_envy.epsilon == 0.2);
  CHECK(c.min_envy.initializer == Initializer::no_scheme);
  CHECK(c.baseline_normalized);
  CHECK(c.scenario.grid == 2);
  CHECK(config_from_json(to_json(c)).trial.n_lots == 3);

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"trails": 3})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"min_envy": {"maxiter": 0}})")), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"dataset": {"source": "nyc-csv"}})")),
                  std::invalid_argument);
}

TEST_CASE("batch: zero trials gives headers only") {
  const ExperimentConfig c = small_config(0);
  const auto pool = load_pool(c);
  const BatchResult b = run_batch(pool, c);
  CHECK(b.rows.empty());
  CHECK(batch_csv(b) == "trial,seed,method,status,F_minutes,H_minutes,jains,iterations,converged\n");
  const auto summary = batch_summary(b, c);
  CHECK(summary["trials"] == 0);
  CHECK(summary["methods"]["min-envy"]["mean_F_minutes"].is_null());
}

TEST_CASE("batch: parallel run equals the serial reference and reruns are identical") {
  const ExperimentConfig c = small_config(6);
  const auto pool = load_pool(c);
  const BatchResult par = run_batch(pool, c, Execution::parallel);
  const BatchResult ser = run_batch(pool, c, Execution::serial);
  CHECK(batch_csv(par) == batch_csv(ser));
  CHECK(batch_summary(par, c).dump() == batch_summary(ser, c).dump());
  CHECK(batch_csv(run_batch(pool, c)) == batch_csv(par));
  CHECK(exceedance_csv(par, c) == exceedance_csv(ser, c));
  const std::string csv = batch_csv(par);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6 * 3);

  ExperimentConfig other = c;
  other.seed = c.seed + 1;
  CHECK(batch_csv(run_batch(load_pool(other), other)) != batch_csv(par));
}

TEST_CASE("batch: min-envy does not raise mean envy over min-sum in aggregate") {
  const ExperimentConfig c = small_config(12);
  const BatchResult b = run_batch(load_pool(c), c);
  double envy = 0, sum = 0;
  for (const TrialRow& r : b.rows) {
    REQUIRE(r.get(Method::min_envy).ok);
    envy += r.get(Method::min_envy).mean_envy_min;
    sum += r.get(Method::min_sum).mean_envy_min;
  }
  CHECK(envy <= sum);
}

TEST_CASE("batch: insufficient pool is a configuration error") {
  ExperimentConfig c = small_config(2);
  c.synthetic.trips = 10;
  CHECK_THROWS_AS(run_batch(load_pool(c), c), DataError);
}

TEST_CASE("smartpark compare") {
  ExperimentConfig c = small_config(5);
  const SmartParkBatch a = run_smartpark_compare(c, Execution::parallel);
  const SmartParkBatch b = run_smartpark_compare(c, Execution::serial);
  CHECK(smartpark_csv(a) == smartpark_csv(b));
  CHECK(smartpark_summary(a, c).dump() == smartpark_summary(b, c).dump());

  Scenario one;
  one.horizon = 3;
  one.lots.push_back({0, {0, 0}, 2, 0});
  one.requests.push_back({0, 1, 2, {0.1, 0}, 0.5, {1.0}, 2.0, 1.0});
  SmartParkBatch trivial;
  trivial.rows.push_back(run_smartpark_trial(one, {}));
  const auto s = smartpark_summary(trivial, c);
  CHECK(s["fair_vs_utility"]["F_improvement_pct"]["mean_pct"] == 0.0);
  CHECK(s["fair_vs_utility"]["jains_improvement_pct"]["mean_pct"] == 0.0);
}
