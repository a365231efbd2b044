#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "randpart/asymptotics.hpp"
#include "randpart/emit.hpp"
#include "randpart/experiments.hpp"
#include "randpart/random_maps.hpp"
#include "randpart/rng.hpp"
#include "randpart/set_partition.hpp"

using namespace randpart;

namespace {

ExperimentConfig make_config(ExperimentKind kind, std::uint32_t n, std::uint32_t t,
                             std::uint64_t trials, std::uint64_t seed,
                             std::uint32_t workers = 1) {
  ExperimentConfig config;
  config.kind = kind;
  config.n = n;
  config.t = t;
  config.trials = trials;
  config.master_seed = seed;
  config.worker_count = workers;
  return config;
}

}  // namespace

TEST_CASE("kind names round trip") {
  for (ExperimentKind kind :
       {ExperimentKind::inf_min, ExperimentKind::sup_max, ExperimentKind::singletons,
        ExperimentKind::two_blocks, ExperimentKind::largest_block,
        ExperimentKind::threshold_scan}) {
    const auto back = kind_from_name(kind_name(kind));
    REQUIRE(back.has_value());
    CHECK(*back == kind);
  }
  CHECK(!kind_from_name("bogus").has_value());
}

TEST_CASE("exhaustive ground truth on tiny instances") {
  CHECK(run_exhaustive(ExperimentKind::inf_min, 2, 2) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(run_exhaustive(ExperimentKind::sup_max, 2, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(run_exhaustive(ExperimentKind::sup_max, 3, 1) ==
        doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(run_exhaustive(ExperimentKind::singletons, 2, 1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(run_exhaustive(ExperimentKind::largest_block, 2, 1) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(run_exhaustive(ExperimentKind::two_blocks, 2, 2) ==
        doctest::Approx(0.75).epsilon(1e-12));

  // the formulas derived elsewhere agree with plain enumeration
  CHECK(run_exhaustive(ExperimentKind::inf_min, 3, 2) ==
        doctest::Approx(exact_inf_min_prob(3, 2)).epsilon(1e-12));
  CHECK(run_exhaustive(ExperimentKind::singletons, 4, 2) ==
        doctest::Approx(exact_E_M(4, 2)).epsilon(1e-12));

  CHECK_THROWS_AS(run_exhaustive(ExperimentKind::inf_min, 6, 2), std::length_error);
  CHECK_THROWS_AS(run_exhaustive(ExperimentKind::threshold_scan, 2, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_exhaustive(ExperimentKind::inf_min, 0, 1), std::invalid_argument);
  CHECK(run_exhaustive(ExperimentKind::inf_min, 5, 2) > 0.0);  // 5^10 under the guard
}

TEST_CASE("estimators agree with exhaustive enumeration") {
  constexpr std::uint64_t kTrials = 1000000;
  const std::pair<std::uint32_t, std::uint32_t> grid[] = {{2, 1}, {2, 2}, {3, 1}, {3, 2}};
  for (ExperimentKind kind : {ExperimentKind::inf_min, ExperimentKind::sup_max,
                              ExperimentKind::singletons, ExperimentKind::largest_block,
                              ExperimentKind::two_blocks}) {
    for (const auto& [n, t] : grid) {
      if (kind == ExperimentKind::two_blocks && t != 2) continue;
      const double truth = run_exhaustive(kind, n, t);
      const EstimateResult result = run_experiment(make_config(kind, n, t, kTrials, 0, 2));
      REQUIRE(result.trials == kTrials);
      const double slack = 4.0 * std::max(result.std_error, 1e-9);
      INFO(kind_name(kind), " n=", n, " t=", t, " est=", result.point_estimate,
           " truth=", truth);
      CHECK(std::abs(result.point_estimate - truth) <= slack);
    }
  }
}

TEST_CASE("result bytes are independent of the worker count") {
  const ExperimentConfig base[] = {
      make_config(ExperimentKind::inf_min, 30, 2, 500, 42),
      make_config(ExperimentKind::singletons, 50, 3, 400, 42),
      make_config(ExperimentKind::largest_block, 40, 2, 300, 7),
      make_config(ExperimentKind::two_blocks, 40, 2, 300, 7),
  };
  for (const ExperimentConfig& config : base) {
    std::vector<std::string> csv_variants, json_variants;
    std::vector<std::vector<std::int64_t>> trials_variants;
    for (std::uint32_t workers : {1u, 3u, 7u}) {
      ExperimentConfig run = config;
      run.worker_count = workers;
      std::vector<EstimateResult> results{run_experiment(run)};
      zero_elapsed(results);
      csv_variants.push_back(emit_csv(results));
      json_variants.push_back(emit_json(results));
      trials_variants.push_back(results.front().per_trial);
    }
    CHECK(csv_variants[1] == csv_variants[0]);
    CHECK(csv_variants[2] == csv_variants[0]);
    CHECK(json_variants[1] == json_variants[0]);
    CHECK(json_variants[2] == json_variants[0]);
    CHECK(trials_variants[1] == trials_variants[0]);
    CHECK(trials_variants[2] == trials_variants[0]);
  }

  // scans too: rows are streamed per (t, trial), so order cannot drift
  ExperimentConfig scan = make_config(ExperimentKind::threshold_scan, 20, 1, 300, 5);
  scan.t_max = 4;
  std::vector<std::string> scan_bytes;
  for (std::uint32_t workers : {1u, 4u}) {
    scan.worker_count = workers;
    auto rows = run_threshold_scan(scan);
    zero_elapsed(rows);
    scan_bytes.push_back(emit_csv(rows) + emit_json(rows));
  }
  CHECK(scan_bytes[0] == scan_bytes[1]);
}

TEST_CASE("repeat runs reproduce results exactly") {
  const ExperimentConfig config = make_config(ExperimentKind::singletons, 60, 2, 250, 99, 3);
  const EstimateResult a = run_experiment(config);
  const EstimateResult b = run_experiment(config);
  CHECK(a.success_count == b.success_count);
  CHECK(a.point_estimate == b.point_estimate);
  CHECK(a.per_trial == b.per_trial);

  const EstimateResult other_seed =
      run_experiment(make_config(ExperimentKind::singletons, 60, 2, 250, 100, 3));
  CHECK(a.per_trial != other_seed.per_trial);
}

TEST_CASE("estimate bookkeeping") {
  const EstimateResult counted =
      run_experiment(make_config(ExperimentKind::singletons, 20, 2, 150, 3));
  std::int64_t total = 0;
  for (const std::int64_t v : counted.per_trial) total += v;
  CHECK(counted.success_count == static_cast<std::uint64_t>(total));
  CHECK(counted.point_estimate ==
        static_cast<double>(counted.success_count) / static_cast<double>(counted.trials));
  CHECK(std::isfinite(counted.ci_lo));
  CHECK(counted.ci_lo == doctest::Approx(counted.point_estimate -
                                         1.959963984540054 * counted.std_error));

  const EstimateResult small =
      run_experiment(make_config(ExperimentKind::inf_min, 20, 2, 50, 3));
  CHECK(std::isnan(small.ci_lo));
  CHECK(std::isnan(small.ci_hi));
  CHECK(small.per_trial.empty());

  const EstimateResult proportion =
      run_experiment(make_config(ExperimentKind::sup_max, 10, 4, 200, 3));
  CHECK(proportion.per_trial.empty());
  CHECK(proportion.point_estimate ==
        static_cast<double>(proportion.success_count) / 200.0);
}

TEST_CASE("extras carry the derived statistics") {
  auto find_extra = [](const EstimateResult& result, const std::string& name) {
    for (const auto& [key, value] : result.extras)
      if (key == name) return value;
    FAIL("missing extra ", name);
    return 0.0;
  };

  const EstimateResult inf =
      run_experiment(make_config(ExperimentKind::inf_min, 25, 2, 200, 1));
  CHECK(find_extra(inf, "exact_prob") == doctest::Approx(exact_inf_min_prob(25, 2)));

  const EstimateResult singles =
      run_experiment(make_config(ExperimentKind::singletons, 30, 2, 400, 1));
  CHECK(find_extra(singles, "exact_mean") == doctest::Approx(exact_E_M(30, 2)));
  CHECK(find_extra(singles, "exact_variance") == doctest::Approx(exact_var_M(30, 2)));
  CHECK(find_extra(singles, "sample_mean") == doctest::Approx(singles.point_estimate));
  const double frac = find_extra(singles, "frac_M_over_n_ge_0.04");
  CHECK(frac >= 0.0);
  CHECK(frac <= 1.0);

  const EstimateResult pairs =
      run_experiment(make_config(ExperimentKind::two_blocks, 30, 2, 400, 1));
  double fm1 = 0.0, fm2 = 0.0;
  for (const std::int64_t v : pairs.per_trial) {
    fm1 += static_cast<double>(v);
    fm2 += static_cast<double>(v) * (static_cast<double>(v) - 1) / 2.0;
  }
  CHECK(find_extra(pairs, "fm1") == doctest::Approx(fm1 / 400.0));
  CHECK(find_extra(pairs, "fm2") == doctest::Approx(fm2 / 400.0));

  ExperimentConfig blocks_config = make_config(ExperimentKind::largest_block, 40, 2, 300, 1);
  blocks_config.thresholds = {10.0};
  const EstimateResult blocks = run_experiment(blocks_config);
  std::uint64_t over = 0;
  std::int64_t max_l = 0, min_l = blocks_config.n;
  for (const std::int64_t v : blocks.per_trial) {
    over += v >= 10;
    max_l = std::max(max_l, v);
    min_l = std::min(min_l, v);
  }
  CHECK(find_extra(blocks, "frac_ge_10") == doctest::Approx(over / 300.0));
  CHECK(find_extra(blocks, "q0") == doctest::Approx(min_l / 40.0));
  CHECK(find_extra(blocks, "q100") == doctest::Approx(max_l / 40.0));
  const double q50 = find_extra(blocks, "q50");
  CHECK(q50 >= find_extra(blocks, "q25"));
  CHECK(find_extra(blocks, "q75") >= q50);
  CHECK(find_extra(blocks, "mean_L_over_n") ==
        doctest::Approx(blocks.point_estimate / 40.0));
  CHECK(find_extra(blocks, "mean_deficit_times_exp_t") ==
        doctest::Approx((1.0 - blocks.point_estimate / 40.0) * std::exp(2.0)));
}

TEST_CASE("threshold scan sweeps t") {
  ExperimentConfig config = make_config(ExperimentKind::threshold_scan, 30, 1, 2000, 0, 2);
  config.t_max = 6;
  const auto rows = run_threshold_scan(config);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].config.t == 1 + i);
    CHECK(rows[i].trials == 2000);
  }
  // coarsening in t: connection probability climbs, modulo noise
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double combined = std::sqrt(rows[i].std_error * rows[i].std_error +
                                      rows[i + 1].std_error * rows[i + 1].std_error);
    CHECK(rows[i + 1].point_estimate - rows[i].point_estimate >= -2.0 * combined);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(run_experiment(make_config(ExperimentKind::inf_min, 0, 2, 10, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(make_config(ExperimentKind::inf_min, 5, 0, 10, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(make_config(ExperimentKind::inf_min, 5, 2, 0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(make_config(ExperimentKind::inf_min, 5, 2, 10, 0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(make_config(ExperimentKind::two_blocks, 5, 3, 10, 0)),
                  std::invalid_argument);
  ExperimentConfig scan = make_config(ExperimentKind::threshold_scan, 5, 4, 10, 0);
  scan.t_max = 3;
  CHECK_THROWS_AS(run_threshold_scan(scan), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(scan), std::invalid_argument);
}

TEST_CASE("coupled prefixes are monotone in the lattice") {
  Xoshiro256StarStar rng = derive_trial_rng({31337, 0});
  for (int round = 0; round < 50; ++round) {
    const std::uint32_t n = 30;
    std::vector<std::vector<std::uint32_t>> maps;
    for (std::uint32_t m = 0; m < 5; ++m)
      maps.push_back(sample_uniform_map(n, rng).values);

    for (std::uint32_t t = 1; t < 5; ++t) {
      const std::vector<std::vector<std::uint32_t>> prefix(maps.begin(), maps.begin() + t);
      const std::vector<std::vector<std::uint32_t>> next(maps.begin(), maps.begin() + t + 1);
      // joins coarsen as maps accumulate
      CHECK(refines(join_streaming(n, prefix), join_streaming(n, next)));
      // meets refine as maps accumulate
      SetPartition inf_prefix = partition_from_map(prefix[0]);
      for (std::uint32_t m = 1; m < t; ++m)
        inf_prefix = meet(inf_prefix, partition_from_map(prefix[m]));
      const SetPartition inf_next = meet(inf_prefix, partition_from_map(maps[t]));
      CHECK(refines(inf_next, inf_prefix));
    }
  }
}

TEST_CASE("singleton count caps the largest block") {
  // with M >= 1 singletons and M < n blocks left over, some other block exists
  // and it avoids all M singletons: L <= n - M (excluding the one-block case)
  Xoshiro256StarStar rng = derive_trial_rng({11, 22});
  for (int round = 0; round < 500; ++round) {
    const std::uint32_t n = 40;
    const SetPartition sup = sup_of_random_maps(n, 2, rng);
    const BlockStats stats = block_stats(sup);
    if (stats.singletons >= 1 && stats.singletons < n && !sup.is_one_block())
      CHECK(stats.largest_block <= n - stats.singletons);
  }
}

TEST_CASE("canonical formatting") {
  CHECK(csv_header() == "kind,n,t,trials,seed,success,estimate,stderr,ci_lo,ci_hi,elapsed_ms");
  CHECK(format_sig12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig12(0.0) == "0");
  CHECK(format_sig12(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_sig12(0.60972280147006797) == "0.60972280147");
}

TEST_CASE("emission formats encode the same numbers") {
  std::vector<EstimateResult> results{
      run_experiment(make_config(ExperimentKind::singletons, 25, 2, 150, 8))};
  zero_elapsed(results);

  const std::string csv = emit_csv(results);
  const std::string json_text = emit_json(results);

  // csv: header plus one row of 11 fields
  const std::size_t newline = csv.find('\n');
  REQUIRE(newline != std::string::npos);
  CHECK(csv.substr(0, newline) == csv_header());
  std::vector<std::string> fields;
  std::size_t start = newline + 1;
  const std::string row = csv.substr(start, csv.size() - start - 1);
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = row.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(row.substr(pos));
      break;
    }
    fields.push_back(row.substr(pos, comma - pos));
    pos = comma + 1;
  }
  REQUIRE(fields.size() == 11);
  CHECK(fields[0] == "singletons");
  CHECK(fields[1] == "25");
  CHECK(fields[6] == format_sig12(results.front().point_estimate));
  CHECK(fields[10] == "0");

  // json object round-trips to the very same decimal strings
  const nlohmann::json parsed = nlohmann::json::parse(json_text);
  REQUIRE(parsed.is_object());
  CHECK(parsed.at("kind") == "singletons");
  CHECK(parsed.at("n") == 25);
  CHECK(parsed.at("trials") == 150);
  CHECK(format_sig12(parsed.at("estimate").get<double>()) == fields[6]);
  CHECK(format_sig12(parsed.at("stderr").get<double>()) == fields[7]);
  CHECK(parsed.at("per_trial").size() == 150);
  CHECK(parsed.at("extras").contains("exact_mean"));

  // NaN intervals: "nan" in csv, null in json
  std::vector<EstimateResult> tiny{
      run_experiment(make_config(ExperimentKind::inf_min, 10, 2, 50, 8))};
  zero_elapsed(tiny);
  const std::string tiny_csv = emit_csv(tiny);
  CHECK(tiny_csv.find(",nan,") != std::string::npos);
  const nlohmann::json tiny_json = nlohmann::json::parse(emit_json(tiny));
  CHECK(tiny_json.at("ci_lo").is_null());
  CHECK(tiny_json.at("ci_hi").is_null());

  // a scan emits an array
  ExperimentConfig scan = make_config(ExperimentKind::threshold_scan, 10, 1, 120, 8);
  scan.t_max = 2;
  auto rows = run_threshold_scan(scan);
  zero_elapsed(rows);
  const nlohmann::json scan_json = nlohmann::json::parse(emit_json(rows));
  REQUIRE(scan_json.is_array());
  CHECK(scan_json.size() == 2);
  CHECK(scan_json[0].at("t") == 1);
  CHECK(scan_json[1].at("t") == 2);
}
