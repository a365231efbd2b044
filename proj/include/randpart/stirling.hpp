#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace randpart {

// Exact Stirling-number triangle S(n,k) for 0 <= k <= n <= n_max, built on the
// recurrence S(n,k) = k*S(n-1,k) + S(n-1,k-1). Rows up to a resident bound are
// cached; larger n (still <= n_max) are answered by rolling a single O(n)-memory
// row forward from the deepest cached row. Not thread-safe; share via
// stirling_exact() which serializes access to a process-wide table.
class StirlingTable {
 public:
  explicit StirlingTable(std::uint32_t n_max = default_n_max());

  // Exact S(n,k). Throws std::invalid_argument when k > n,
  // std::length_error when n > n_max().
  mpz_class value(std::uint32_t n, std::uint32_t k);

  std::uint32_t n_max() const { return n_max_; }

  // RANDPART_STIRLING_CAP env override, else 2000.
  static std::uint32_t default_n_max();

 private:
  void grow_cache(std::uint32_t n);

  std::uint32_t n_max_;
  std::uint32_t resident_rows_;  // triangle cached for n <= resident_rows_
  std::vector<std::vector<mpz_class>> rows_;
};

// One row of log S(n,k), k = 1..n, via log-sum-exp on the same recurrence.
// abs_error_bound is an a-priori bound on |stored - log S(n,k)| from rounding
// accumulated across the n row updates.
struct LogStirlingRow {
  std::uint32_t n = 0;
  std::vector<double> log_values;  // index k-1 holds log S(n,k)
  double abs_error_bound = 0.0;

  double log_value(std::uint32_t k) const;
};

// O(n) memory, O(n^2) time. Throws std::length_error when n exceeds the cap
// (RANDPART_LOG_STIRLING_CAP env override, else 5000).
LogStirlingRow log_stirling_row(std::uint32_t n);

mpz_class stirling_exact(std::uint32_t n, std::uint32_t k);

// log S(n,k) for 1 <= k <= n; keeps the most recent row cached, so sweeping
// k at fixed n costs one row build.
double stirling_log(std::uint32_t n, std::uint32_t k);

// S(k,l) * l!, the number of surjections [k] -> [l]. Requires 1 <= l <= k.
mpz_class surjection_count(std::uint32_t k, std::uint32_t l);

// S(n,k)^2 >= S(n,k-1)*S(n,k+1) for all 2 <= k <= n-1, exact. Requires n >= 3.
bool check_log_concavity(std::uint32_t n);

// S(k,l-1)/S(k,l) <= l(l-1) / (2(k-l+1)), compared cross-multiplied in exact
// integers. Requires 2 <= l <= k.
bool check_ratio_bound(std::uint32_t k, std::uint32_t l);

// Bell numbers via the Bell triangle — independent of the Stirling recurrence,
// used to cross-check row sums.
mpz_class bell_number(std::uint32_t n);

// Natural log of a positive big integer (via mpz_get_d_2exp).
double log_mpz(const mpz_class& value);

}  // namespace randpart
