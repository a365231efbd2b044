#include "randpart/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "randpart/asymptotics.hpp"
#include "randpart/random_maps.hpp"
#include "randpart/rng.hpp"
#include "randpart/set_partition.hpp"
#include "randpart/union_find.hpp"

namespace randpart {

namespace {

constexpr double kNormal95 = 1.959963984540054;

std::string format_threshold(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

void validate(const ExperimentConfig& config) {
  if (config.n < 1 || config.t < 1 || config.trials < 1 || config.worker_count < 1)
    throw std::invalid_argument("experiment config: need n, t, trials, workers all >= 1");
  if (config.kind == ExperimentKind::threshold_scan && config.t_max < config.t)
    throw std::invalid_argument("threshold-scan: need t_max >= t");
  if (config.kind == ExperimentKind::two_blocks && config.t != 2)
    throw std::invalid_argument("two-blocks: t is fixed at 2");
}

// Reusable per-worker buffers; every trial is O(n) space regardless of t.
struct TrialScratch {
  std::vector<std::uint32_t> map_values;
  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> sorted;
  UnionFind uf{1};
  std::vector<std::uint32_t> first_elem;
  std::vector<std::uint32_t> stamp;
};

void draw_map(std::uint32_t n, Xoshiro256StarStar& rng, std::vector<std::uint32_t>& out) {
  out.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(rng.below(n));
}

// Sorted multiset of inf-block sizes is not needed in full: the kernels below
// only read run lengths of the sorted tuple keys. Combining map m multiplies
// the label space by n, so keys stay below n^2 (labels are re-densified
// between maps); the final map's keys are left packed and just sorted.
void inf_sorted_keys(std::uint32_t n, std::uint32_t t, Xoshiro256StarStar& rng,
                     TrialScratch& scratch) {
  auto& keys = scratch.keys;
  auto& sorted = scratch.sorted;
  draw_map(n, rng, scratch.map_values);
  keys.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) keys[i] = scratch.map_values[i];
  for (std::uint32_t m = 2; m <= t; ++m) {
    draw_map(n, rng, scratch.map_values);
    for (std::uint32_t i = 0; i < n; ++i)
      keys[i] = keys[i] * n + scratch.map_values[i];
    if (m < t) {
      sorted = keys;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (auto& key : keys)
        key = static_cast<std::uint64_t>(
            std::lower_bound(sorted.begin(), sorted.end(), key) - sorted.begin());
    }
  }
  sorted = keys;
  std::sort(sorted.begin(), sorted.end());
}

// Walk the t maps through a disjoint-set forest: elements sharing a value of
// any map are united. Epoch stamps avoid clearing the first-seen table.
void sup_components(std::uint32_t n, std::uint32_t t, Xoshiro256StarStar& rng,
                    TrialScratch& scratch) {
  scratch.uf.reset(n);
  scratch.first_elem.assign(n, 0);
  scratch.stamp.assign(n, 0);
  for (std::uint32_t m = 1; m <= t; ++m) {
    draw_map(n, rng, scratch.map_values);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t v = scratch.map_values[i];
      if (scratch.stamp[v] == m) {
        scratch.uf.unite(i, scratch.first_elem[v]);
      } else {
        scratch.stamp[v] = m;
        scratch.first_elem[v] = i;
      }
    }
  }
}

struct SupSummary {
  std::uint32_t num_blocks = 0;
  std::uint32_t largest = 0;
  std::uint32_t singletons = 0;
};

SupSummary summarize_sup(TrialScratch& scratch) {
  SupSummary summary;
  summary.num_blocks = scratch.uf.count();
  const std::uint32_t n = scratch.uf.element_count();
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!scratch.uf.is_root(i)) continue;
    const std::uint32_t size = scratch.uf.root_size(i);
    summary.largest = std::max(summary.largest, size);
    if (size == 1) ++summary.singletons;
  }
  return summary;
}

using TrialFn = std::function<std::int64_t(std::uint64_t trial, TrialScratch& scratch)>;

// Pull-based pool: workers grab the next trial index atomically and write into
// disjoint slots, so the record vector is independent of scheduling.
std::vector<std::int64_t> run_pool(std::uint64_t trials, std::uint32_t worker_count,
                                   const TrialFn& per_trial) {
  std::vector<std::int64_t> records(trials);
  std::atomic<std::uint64_t> next{0};
  auto drain = [&] {
    TrialScratch scratch;
    for (;;) {
      const std::uint64_t index = next.fetch_add(1, std::memory_order_relaxed);
      if (index >= trials) break;
      records[index] = per_trial(index, scratch);
    }
  };
  if (worker_count <= 1) {
    drain();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (std::uint32_t w = 0; w < worker_count; ++w) workers.emplace_back(drain);
    for (auto& worker : workers) worker.join();
  }
  return records;
}

double checked_ratio(std::uint64_t numerator, std::uint64_t denominator) {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

// Mean/variance from the index-ordered records (two-pass: deterministic and
// immune to the worker schedule).
std::pair<double, double> sample_moments(const std::vector<std::int64_t>& records) {
  double mean = 0.0;
  for (std::int64_t v : records) mean += static_cast<double>(v);
  mean /= static_cast<double>(records.size());
  double ss = 0.0;
  for (std::int64_t v : records) {
    const double d = static_cast<double>(v) - mean;
    ss += d * d;
  }
  const double variance =
      records.size() > 1 ? ss / (static_cast<double>(records.size()) - 1.0) : 0.0;
  return {mean, variance};
}

void attach_interval(EstimateResult& result) {
  if (result.trials >= 100) {
    result.ci_lo = result.point_estimate - kNormal95 * result.std_error;
    result.ci_hi = result.point_estimate + kNormal95 * result.std_error;
  } else {
    result.ci_lo = std::numeric_limits<double>::quiet_NaN();
    result.ci_hi = std::numeric_limits<double>::quiet_NaN();
  }
}

EstimateResult from_indicator_records(const ExperimentConfig& config,
                                      std::vector<std::int64_t> records) {
  EstimateResult result;
  result.config = config;
  result.trials = records.size();
  for (std::int64_t v : records) result.success_count += static_cast<std::uint64_t>(v);
  result.point_estimate = checked_ratio(result.success_count, result.trials);
  result.std_error = std::sqrt(result.point_estimate * (1.0 - result.point_estimate) /
                               static_cast<double>(result.trials));
  attach_interval(result);
  return result;  // indicator records not retained
}

EstimateResult from_count_records(const ExperimentConfig& config,
                                  std::vector<std::int64_t> records) {
  EstimateResult result;
  result.config = config;
  result.trials = records.size();
  for (std::int64_t v : records) result.success_count += static_cast<std::uint64_t>(v);
  result.point_estimate = checked_ratio(result.success_count, result.trials);
  const auto [mean, variance] = sample_moments(records);
  (void)mean;  // equals point_estimate by construction
  result.std_error = std::sqrt(variance / static_cast<double>(result.trials));
  attach_interval(result);
  result.per_trial = std::move(records);
  return result;
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

std::uint64_t scan_stream_index(std::uint32_t t, std::uint64_t trial) {
  return (static_cast<std::uint64_t>(t) << 32) | trial;
}

EstimateResult run_sup_max_row(const ExperimentConfig& config, std::uint32_t t,
                               bool scan_streams) {
  ExperimentConfig row = config;
  row.t = t;
  auto records = run_pool(
      config.trials, config.worker_count,
      [&config, t, scan_streams](std::uint64_t trial, TrialScratch& scratch) -> std::int64_t {
        const std::uint64_t stream = scan_streams ? scan_stream_index(t, trial) : trial;
        auto rng = derive_trial_rng({config.master_seed, stream});
        sup_components(config.n, t, rng, scratch);
        return scratch.uf.count() == 1 ? 1 : 0;
      });
  return from_indicator_records(row, std::move(records));
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::inf_min: return "inf-min";
    case ExperimentKind::sup_max: return "sup-max";
    case ExperimentKind::singletons: return "singletons";
    case ExperimentKind::two_blocks: return "two-blocks";
    case ExperimentKind::largest_block: return "largest-block";
    case ExperimentKind::threshold_scan: return "threshold-scan";
  }
  throw std::logic_error("kind_name: unreachable");
}

std::optional<ExperimentKind> kind_from_name(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::inf_min, ExperimentKind::sup_max, ExperimentKind::singletons,
        ExperimentKind::two_blocks, ExperimentKind::largest_block,
        ExperimentKind::threshold_scan})
    if (kind_name(kind) == name) return kind;
  return std::nullopt;
}

EstimateResult run_inf_min(const ExperimentConfig& config) {
  validate(config);
  Stopwatch timer;
  auto records = run_pool(
      config.trials, config.worker_count,
      [&config](std::uint64_t trial, TrialScratch& scratch) -> std::int64_t {
        auto rng = derive_trial_rng({config.master_seed, trial});
        inf_sorted_keys(config.n, config.t, rng, scratch);
        const auto& sorted = scratch.sorted;
        for (std::size_t i = 1; i < sorted.size(); ++i)
          if (sorted[i] == sorted[i - 1]) return 0;
        return 1;
      });
  EstimateResult result = from_indicator_records(config, std::move(records));
  result.extras.emplace_back("exact_prob", exact_inf_min_prob(config.n, config.t));
  result.elapsed_ms = timer.ms();
  return result;
}

EstimateResult run_sup_max(const ExperimentConfig& config) {
  validate(config);
  Stopwatch timer;
  EstimateResult result = run_sup_max_row(config, config.t, /*scan_streams=*/false);
  result.elapsed_ms = timer.ms();
  return result;
}

EstimateResult run_singletons(const ExperimentConfig& config) {
  validate(config);
  Stopwatch timer;
  auto records = run_pool(
      config.trials, config.worker_count,
      [&config](std::uint64_t trial, TrialScratch& scratch) -> std::int64_t {
        auto rng = derive_trial_rng({config.master_seed, trial});
        sup_components(config.n, config.t, rng, scratch);
        return summarize_sup(scratch).singletons;
      });
  EstimateResult result = from_count_records(config, std::move(records));
  const auto [mean, variance] = sample_moments(result.per_trial);
  std::uint64_t above = 0;
  const double floor_frac = 0.04 * config.n;
  for (std::int64_t v : result.per_trial)
    if (static_cast<double>(v) >= floor_frac) ++above;
  result.extras.emplace_back("sample_mean", mean);
  result.extras.emplace_back("sample_variance", variance);
  result.extras.emplace_back("exact_mean", exact_E_M(config.n, config.t));
  result.extras.emplace_back("exact_variance", exact_var_M(config.n, config.t));
  result.extras.emplace_back("frac_M_over_n_ge_0.04", checked_ratio(above, result.trials));
  result.elapsed_ms = timer.ms();
  return result;
}

EstimateResult run_two_block_poisson(const ExperimentConfig& config) {
  validate(config);
  Stopwatch timer;
  // Records hold |A| per trial; success means |A| = 0.
  auto records = run_pool(
      config.trials, config.worker_count,
      [&config](std::uint64_t trial, TrialScratch& scratch) -> std::int64_t {
        auto rng = derive_trial_rng({config.master_seed, trial});
        inf_sorted_keys(config.n, config.t, rng, scratch);
        const auto& sorted = scratch.sorted;
        std::int64_t two_blocks = 0;
        std::size_t i = 0;
        while (i < sorted.size()) {
          std::size_t j = i + 1;
          while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
          if (j - i == 2) ++two_blocks;
          i = j;
        }
        return two_blocks;
      });

  EstimateResult result;
  result.config = config;
  result.trials = records.size();
  for (std::int64_t v : records)
    if (v == 0) ++result.success_count;
  result.point_estimate = checked_ratio(result.success_count, result.trials);
  result.std_error = std::sqrt(result.point_estimate * (1.0 - result.point_estimate) /
                               static_cast<double>(result.trials));
  attach_interval(result);

  double fm1 = 0.0, fm2 = 0.0;
  for (std::int64_t v : records) {
    fm1 += static_cast<double>(v);
    fm2 += static_cast<double>(v) * (static_cast<double>(v) - 1.0) / 2.0;
  }
  result.extras.emplace_back("fm1", fm1 / static_cast<double>(result.trials));
  result.extras.emplace_back("fm2", fm2 / static_cast<double>(result.trials));
  result.per_trial = std::move(records);
  result.elapsed_ms = timer.ms();
  return result;
}

EstimateResult run_largest_block(const ExperimentConfig& config) {
  validate(config);
  Stopwatch timer;
  auto records = run_pool(
      config.trials, config.worker_count,
      [&config](std::uint64_t trial, TrialScratch& scratch) -> std::int64_t {
        auto rng = derive_trial_rng({config.master_seed, trial});
        sup_components(config.n, config.t, rng, scratch);
        return summarize_sup(scratch).largest;
      });
  EstimateResult result = from_count_records(config, std::move(records));

  std::vector<double> thresholds = config.thresholds;
  if (thresholds.empty()) thresholds.push_back(config.n / 3.0);
  for (double threshold : thresholds) {
    std::uint64_t hits = 0;
    for (std::int64_t v : result.per_trial)
      if (static_cast<double>(v) >= threshold) ++hits;
    result.extras.emplace_back("frac_ge_" + format_threshold(threshold),
                               checked_ratio(hits, result.trials));
  }

  std::vector<std::int64_t> ordered = result.per_trial;
  std::sort(ordered.begin(), ordered.end());
  const double dn = config.n;
  for (int q : {0, 25, 50, 75, 100}) {
    const std::size_t pos =
        std::min(ordered.size() - 1, static_cast<std::size_t>(q) * (ordered.size() - 1) / 100 +
                                         ((q * (ordered.size() - 1)) % 100 >= 50 ? 1 : 0));
    result.extras.emplace_back("q" + std::to_string(q),
                               static_cast<double>(ordered[pos]) / dn);
  }
  double mean_frac = 0.0, mean_deficit = 0.0;
  for (std::int64_t v : result.per_trial) {
    mean_frac += static_cast<double>(v) / dn;
    mean_deficit += 1.0 - static_cast<double>(v) / dn;
  }
  mean_frac /= static_cast<double>(result.trials);
  mean_deficit /= static_cast<double>(result.trials);
  result.extras.emplace_back("mean_L_over_n", mean_frac);
  result.extras.emplace_back("mean_deficit_times_exp_t",
                             mean_deficit * std::exp(static_cast<double>(config.t)));
  result.elapsed_ms = timer.ms();
  return result;
}

std::vector<EstimateResult> run_threshold_scan(const ExperimentConfig& config) {
  validate(config);
  std::vector<EstimateResult> rows;
  rows.reserve(config.t_max - config.t + 1);
  for (std::uint32_t t = config.t; t <= config.t_max; ++t) {
    Stopwatch timer;
    EstimateResult row = run_sup_max_row(config, t, /*scan_streams=*/true);
    row.elapsed_ms = timer.ms();
    rows.push_back(std::move(row));
  }
  return rows;
}

EstimateResult run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::inf_min: return run_inf_min(config);
    case ExperimentKind::sup_max: return run_sup_max(config);
    case ExperimentKind::singletons: return run_singletons(config);
    case ExperimentKind::two_blocks: return run_two_block_poisson(config);
    case ExperimentKind::largest_block: return run_largest_block(config);
    case ExperimentKind::threshold_scan: break;
  }
  throw std::invalid_argument("run_experiment: threshold-scan needs run_threshold_scan");
}

double run_exhaustive(ExperimentKind kind, std::uint32_t n, std::uint32_t t) {
  if (n < 1 || t < 1) throw std::invalid_argument("run_exhaustive: need n >= 1, t >= 1");
  if (kind == ExperimentKind::threshold_scan)
    throw std::invalid_argument("run_exhaustive: threshold-scan has no single exact value");
  const double tuple_count = std::pow(static_cast<double>(n), static_cast<double>(t) * n);
  if (!(tuple_count <= 1e8))
    throw std::length_error("run_exhaustive: n^(t*n) exceeds 1e8");

  std::vector<std::uint32_t> digits(static_cast<std::size_t>(t) * n, 0);
  std::vector<std::vector<std::uint32_t>> maps(t, std::vector<std::uint32_t>(n));
  double total = 0.0;
  std::uint64_t tuples = 0;
  for (;;) {
    for (std::uint32_t m = 0; m < t; ++m)
      for (std::uint32_t i = 0; i < n; ++i) maps[m][i] = digits[m * n + i];

    double stat = 0.0;
    switch (kind) {
      case ExperimentKind::inf_min: {
        SetPartition inf = partition_from_map(maps[0]);
        for (std::uint32_t m = 1; m < t; ++m) inf = meet(inf, partition_from_map(maps[m]));
        stat = inf.is_singletons() ? 1.0 : 0.0;
        break;
      }
      case ExperimentKind::two_blocks: {
        SetPartition inf = partition_from_map(maps[0]);
        for (std::uint32_t m = 1; m < t; ++m) inf = meet(inf, partition_from_map(maps[m]));
        const auto histogram = block_stats(inf).size_histogram;
        const auto it = histogram.find(2);
        stat = (it == histogram.end() || it->second == 0) ? 1.0 : 0.0;
        break;
      }
      case ExperimentKind::sup_max:
        stat = join_streaming(n, maps).is_one_block() ? 1.0 : 0.0;
        break;
      case ExperimentKind::singletons:
        stat = block_stats(join_streaming(n, maps)).singletons;
        break;
      case ExperimentKind::largest_block:
        stat = block_stats(join_streaming(n, maps)).largest_block;
        break;
      case ExperimentKind::threshold_scan:
        break;  // rejected above
    }
    total += stat;
    ++tuples;

    std::size_t pos = 0;
    while (pos < digits.size() && ++digits[pos] == n) digits[pos++] = 0;
    if (pos == digits.size()) break;
  }
  return total / static_cast<double>(tuples);
}

}  // namespace randpart
