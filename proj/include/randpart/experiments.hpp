#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace randpart {

enum class ExperimentKind {
  inf_min,        // P(inf of t map-partitions = p_min)
  sup_max,        // P(sup of t map-partitions = p_max)
  singletons,     // M: singleton blocks of the sup
  two_blocks,     // |A|: two-element blocks of the inf (t = 2)
  largest_block,  // L: largest block of the sup
  threshold_scan  // sup-max swept over a t-range
};

std::string kind_name(ExperimentKind kind);
std::optional<ExperimentKind> kind_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::inf_min;
  std::uint32_t n = 1;
  std::uint32_t t = 1;
  std::uint32_t t_max = 0;  // threshold-scan: inclusive upper end of the t-range
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  std::uint32_t worker_count = 1;
  std::vector<double> thresholds;  // largest-block: absolute L cutoffs; default {n/3}
};

struct EstimateResult {
  ExperimentConfig config;  // echo; config.t holds this row's t for scan rows
  std::uint64_t success_count = 0;
  std::uint64_t trials = 0;
  double point_estimate = 0.0;  // always success_count / trials
  double std_error = 0.0;
  double ci_lo = 0.0;  // 95% normal approximation; NaN when trials < 100
  double ci_hi = 0.0;
  // Retained only for kinds that need quantiles or moments downstream
  // (singletons, two-blocks, largest-block); empty for proportions.
  std::vector<std::int64_t> per_trial;
  std::vector<std::pair<std::string, double>> extras;
  double elapsed_ms = 0.0;
};

// Per-trial generator streams derive from (master_seed, trial index); results
// are pure functions of (config minus worker_count, master_seed), so any
// worker count reproduces the same bytes. Trials run on a pull-based pool of
// config.worker_count threads, O(n) memory per worker.
EstimateResult run_inf_min(const ExperimentConfig& config);
EstimateResult run_sup_max(const ExperimentConfig& config);
EstimateResult run_singletons(const ExperimentConfig& config);
EstimateResult run_two_block_poisson(const ExperimentConfig& config);
EstimateResult run_largest_block(const ExperimentConfig& config);

// One sup-max row per t in [config.t, config.t_max]; row streams are indexed
// by (t << 32) | trial so rows are independent and insertion-order free.
std::vector<EstimateResult> run_threshold_scan(const ExperimentConfig& config);

// Dispatch for every kind except threshold_scan.
EstimateResult run_experiment(const ExperimentConfig& config);

// Ground truth by iterating all n^(t*n) map tuples through the plain lattice
// ops (no shared kernels with the Monte Carlo path). Returns the mean of the
// same per-trial statistic the estimator uses. Guard: n^(t*n) <= 1e8, else
// std::length_error.
double run_exhaustive(ExperimentKind kind, std::uint32_t n, std::uint32_t t);

}  // namespace randpart
