#include "randpart/stirling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

namespace randpart {

namespace {

// Rows this deep stay resident (~tens of MB); deeper queries roll a single row.
constexpr std::uint32_t kResidentRowBound = 400;

std::uint32_t env_cap(const char* name, std::uint32_t fallback) {
  const char* text = std::getenv(name);
  if (!text || !*text) return fallback;
  char* end = nullptr;
  const unsigned long parsed = std::strtoul(text, &end, 10);
  if (end == text || *end != '\0' || parsed == 0 || parsed > 1u << 20) return fallback;
  return static_cast<std::uint32_t>(parsed);
}

// In place: row holding S(m-1, 0..m-1) becomes S(m, 0..m).
void advance_exact_row(std::vector<mpz_class>& row, std::uint32_t m) {
  row.emplace_back(0);
  for (std::uint32_t k = m; k >= 1; --k) {
    mpz_mul_ui(row[k].get_mpz_t(), row[k].get_mpz_t(), k);
    mpz_add(row[k].get_mpz_t(), row[k].get_mpz_t(), row[k - 1].get_mpz_t());
  }
  row[0] = 0;
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);  // max-first keeps the log1p argument in [0,1]
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

std::uint32_t StirlingTable::default_n_max() { return env_cap("RANDPART_STIRLING_CAP", 2000); }

StirlingTable::StirlingTable(std::uint32_t n_max)
    : n_max_(n_max), resident_rows_(std::min(n_max, kResidentRowBound)) {
  rows_.emplace_back();
  rows_.back().emplace_back(1);  // S(0,0) = 1
}

void StirlingTable::grow_cache(std::uint32_t n) {
  while (rows_.size() <= n) {
    const auto m = static_cast<std::uint32_t>(rows_.size());
    std::vector<mpz_class> row = rows_.back();
    advance_exact_row(row, m);
    rows_.push_back(std::move(row));
  }
}

mpz_class StirlingTable::value(std::uint32_t n, std::uint32_t k) {
  if (k > n)
    throw std::invalid_argument("stirling: k = " + std::to_string(k) + " exceeds n = " +
                                std::to_string(n));
  if (n > n_max_)
    throw std::length_error("stirling: n = " + std::to_string(n) + " exceeds table capacity " +
                            std::to_string(n_max_) + " (RANDPART_STIRLING_CAP raises it)");
  if (n <= resident_rows_) {
    grow_cache(n);
    return rows_[n][k];
  }
  grow_cache(resident_rows_);
  std::vector<mpz_class> row = rows_[resident_rows_];
  for (std::uint32_t m = resident_rows_ + 1; m <= n; ++m) advance_exact_row(row, m);
  return row[k];
}

mpz_class stirling_exact(std::uint32_t n, std::uint32_t k) {
  static std::mutex mutex;
  static StirlingTable table;
  std::lock_guard<std::mutex> lock(mutex);
  return table.value(n, k);
}

double LogStirlingRow::log_value(std::uint32_t k) const {
  if (k < 1 || k > n)
    throw std::invalid_argument("log_stirling_row: k = " + std::to_string(k) +
                                " outside [1, " + std::to_string(n) + "]");
  return log_values[k - 1];
}

LogStirlingRow log_stirling_row(std::uint32_t n) {
  const std::uint32_t cap = env_cap("RANDPART_LOG_STIRLING_CAP", 5000);
  if (n == 0) throw std::invalid_argument("log_stirling_row: n must be >= 1");
  if (n > cap)
    throw std::length_error("log_stirling_row: n = " + std::to_string(n) + " exceeds cap " +
                            std::to_string(cap) + " (RANDPART_LOG_STIRLING_CAP raises it)");

  LogStirlingRow row;
  row.n = n;
  auto& lv = row.log_values;
  lv.reserve(n);
  lv.push_back(0.0);  // log S(1,1)
  for (std::uint32_t m = 2; m <= n; ++m) {
    lv.push_back(0.0);  // log S(m,m) = 0; lower k still hold row m-1
    for (std::uint32_t k = m - 1; k >= 2; --k)
      lv[k - 1] = log_add_exp(std::log(static_cast<double>(k)) + lv[k - 1], lv[k - 2]);
    // log S(m,1) = 0 already in place
  }
  double max_log = 1.0;
  for (double v : lv) max_log = std::max(max_log, std::abs(v));
  row.abs_error_bound = 8.0 * std::numeric_limits<double>::epsilon() * n * max_log;
  return row;
}

double stirling_log(std::uint32_t n, std::uint32_t k) {
  if (k < 1 || k > n)
    throw std::invalid_argument("stirling_log: need 1 <= k <= n");
  static std::mutex mutex;
  static LogStirlingRow cached;
  std::lock_guard<std::mutex> lock(mutex);
  if (cached.n != n) cached = log_stirling_row(n);
  return cached.log_value(k);
}

mpz_class surjection_count(std::uint32_t k, std::uint32_t l) {
  if (l < 1 || l > k) throw std::invalid_argument("surjection_count: need 1 <= l <= k");
  mpz_class factorial;
  mpz_fac_ui(factorial.get_mpz_t(), l);
  return stirling_exact(k, l) * factorial;
}

bool check_log_concavity(std::uint32_t n) {
  if (n < 3) throw std::invalid_argument("check_log_concavity: need n >= 3");
  mpz_class prev = stirling_exact(n, 1);
  mpz_class curr = stirling_exact(n, 2);
  for (std::uint32_t k = 2; k + 1 <= n; ++k) {
    const mpz_class next = stirling_exact(n, k + 1);
    if (curr * curr < prev * next) return false;
    prev = curr;
    curr = next;
  }
  return true;
}

bool check_ratio_bound(std::uint32_t k, std::uint32_t l) {
  if (l < 2 || l > k) throw std::invalid_argument("check_ratio_bound: need 2 <= l <= k");
  const mpz_class lhs = 2 * mpz_class(k - l + 1) * stirling_exact(k, l - 1);
  const mpz_class rhs = mpz_class(l) * (l - 1) * stirling_exact(k, l);
  return lhs <= rhs;
}

mpz_class bell_number(std::uint32_t n) {
  std::vector<mpz_class> row{1};  // Bell triangle row for n = 0
  for (std::uint32_t m = 1; m <= n; ++m) {
    std::vector<mpz_class> next;
    next.reserve(m + 1);
    next.push_back(row.back());
    for (std::size_t i = 0; i < row.size(); ++i) next.push_back(next.back() + row[i]);
    row = std::move(next);
  }
  return row.front();
}

double log_mpz(const mpz_class& value) {
  if (value <= 0) throw std::invalid_argument("log_mpz: value must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

}  // namespace randpart
