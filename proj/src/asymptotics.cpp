#include "randpart/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "randpart/stirling.hpp"

namespace randpart {

namespace {

constexpr double kDomainEdge = 1e-6;
constexpr double kResidualTarget = 1e-12;
constexpr int kMaxBisectIters = 200;

double gamma_map(double gamma) { return -gamma * std::expm1(-1.0 / gamma); }

// x log x extended by its limit 0 at x <= 0 (guards underflow of gamma - c).
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

GammaSolve solve_gamma(double c) {
  if (!(c > kDomainEdge && c < 1.0 - kDomainEdge))
    throw std::domain_error("solve_gamma: c = " + std::to_string(c) +
                            " outside (1e-6, 1 - 1e-6)");
  // gamma_map(c) = c (1 - e^{-1/c}) < c, so c brackets from below; the map
  // tends to 1 > c, so doubling finds an upper bracket.
  double lo = c;
  double hi = std::max(1.0, c);
  while (gamma_map(hi) < c) hi *= 2.0;

  GammaSolve best{c, lo, std::numeric_limits<double>::infinity()};
  for (int iter = 0; iter < kMaxBisectIters; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double residual = gamma_map(mid) - c;
    if (std::abs(residual) < best.residual) {
      best.gamma = mid;
      best.residual = std::abs(residual);
    }
    if (best.residual <= kResidualTarget || mid == lo || mid == hi) break;
    (residual < 0.0 ? lo : hi) = mid;
  }
  return best;
}

double g_of_c(double c) {
  const double gamma = solve_gamma(c).gamma;
  return c + std::log(gamma) + xlogx(gamma - c) - gamma * std::log(gamma);
}

double entropy_H(double c) {
  if (c <= 0.0 || c >= 1.0) return 0.0;
  return -c * std::log(c) - (1.0 - c) * std::log1p(-c);
}

double x_of_c(double c) {
  if (!(c > 0.0)) throw std::domain_error("x_of_c: need c > 0");
  const double e = std::exp(1.0);
  // Discriminant of e x^2 - (2ec+2) x + e c^2 is 4 (2ec + 1) > 0.
  const double larger_root = (e * c + 1.0 + std::sqrt(2.0 * e * c + 1.0)) / e;
  return c * c / larger_root;
}

double mu4(double c) {
  if (!(c > 0.0 && c <= 0.5))
    throw std::domain_error("mu4: c = " + std::to_string(c) + " outside (0, 1/2]");
  const double x = x_of_c(c);
  if (!(c - x > 0.0)) throw std::domain_error("mu4: c - x(c) not positive");
  return (1.0 - c) * std::log1p(-c) - x * std::log(2.0) + 2.0 * c * std::log(c) -
         2.0 * (c - x) * std::log(c - x) - x * std::log(x);
}

double lambda4(double c) { return entropy_H(c) + 4.0 * mu4(c); }

double mu3(double c) {
  const double half = c / 2.0;
  return std::log(2.0) * (half - 1.0 / 6.0) - (1.0 - half) * std::log1p(-half) - half +
         g_of_c(c) / 2.0 + std::log1p(-half) / 2.0;
}

Interval lambda4_negative_interval() {
  constexpr double kStep = 1e-4;
  // lambda4 > 0 near 0, dips negative once, recovers before 1/2: exactly two
  // sign changes to bracket and refine.
  auto refine = [](double lo, double hi) {
    // sign(lambda4(lo)) != sign(lambda4(hi))
    const bool lo_negative = lambda4(lo) < 0.0;
    for (int iter = 0; iter < kMaxBisectIters; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if ((lambda4(mid) < 0.0) == lo_negative)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  Interval interval;
  bool have_lower = false;
  double prev_c = kStep;
  double prev_value = lambda4(prev_c);
  for (double c = 2 * kStep; c <= 0.5 + kStep / 2; c += kStep) {
    const double clamped = std::min(c, 0.5);
    const double value = lambda4(clamped);
    if ((prev_value < 0.0) != (value < 0.0)) {
      const double crossing = refine(prev_c, clamped);
      if (!have_lower) {
        interval.lower = crossing;
        have_lower = true;
      } else {
        interval.upper = crossing;
      }
    }
    prev_c = clamped;
    prev_value = value;
  }
  if (!have_lower || interval.upper == 0.0)
    throw std::runtime_error("lambda4_negative_interval: expected two sign changes");
  return interval;
}

double f_k_l_log(std::uint32_t n, std::uint32_t k, std::uint32_t l) {
  if (!(1 <= l && l <= k && k <= n - 1) || n < 2)
    throw std::invalid_argument("f_k_l_log: need 1 <= l <= k <= n-1");
  const double dn = n;
  return (static_cast<double>(l) - dn) * std::log(dn) + stirling_log(k, l) +
         (dn - k) * std::log(dn - l);
}

double s_t_k_log(std::uint32_t n, std::uint32_t t, std::uint32_t k) {
  if (!(1 <= k && k <= t) || k + 1 > n)
    throw std::invalid_argument("s_t_k_log: need 1 <= k <= t and k <= n-1");
  const double dn = n;
  return (static_cast<double>(k) - t) * std::log(dn) + stirling_log(t, k) +
         t * std::log1p(-static_cast<double>(k) / dn);
}

double exact_E_M(std::uint32_t n, std::uint32_t t) {
  if (n < 1 || t < 1) throw std::invalid_argument("exact_E_M: need n >= 1, t >= 1");
  if (n == 1) return 1.0;
  const double log_keep = (n - 1.0) * std::log1p(-1.0 / n);  // log (1-1/n)^{n-1}
  return n * std::exp(t * log_keep);
}

double exact_E_M_pairs(std::uint32_t n, std::uint32_t t) {
  if (n < 1 || t < 1) throw std::invalid_argument("exact_E_M_pairs: need n >= 1, t >= 1");
  if (n == 1) return 0.0;
  const double log_pairs = std::log(static_cast<double>(n)) +
                           std::log(n - 1.0) - std::log(2.0);
  // (1 - 2/n)^{n-2} is an empty product at n = 2.
  const double log_keep =
      std::log1p(-1.0 / n) + (n == 2 ? 0.0 : (n - 2.0) * std::log1p(-2.0 / n));
  return std::exp(log_pairs + t * log_keep);
}

double exact_var_M(std::uint32_t n, std::uint32_t t) {
  const double mean = exact_E_M(n, t);
  return 2.0 * exact_E_M_pairs(n, t) + mean - mean * mean;
}

double exact_inf_min_prob(std::uint32_t n, std::uint32_t t) {
  if (n < 1 || t < 1) throw std::invalid_argument("exact_inf_min_prob: need n >= 1, t >= 1");
  const double tuple_count = std::pow(static_cast<double>(n), static_cast<double>(t));
  double log_prob = 0.0;
  for (std::uint32_t s = 1; s < n; ++s)
    log_prob += std::log1p(-static_cast<double>(s) / tuple_count);
  return std::exp(log_prob);
}

ExponentPoint exponent_point(double c) {
  ExponentPoint point;
  point.c = c;
  point.entropy = entropy_H(c);
  point.x = c > 0.0 ? x_of_c(c) : quiet_nan();
  const bool mu4_domain = c > 0.0 && c <= 0.5;
  point.mu4 = mu4_domain ? mu4(c) : quiet_nan();
  point.lambda4 = mu4_domain ? lambda4(c) : quiet_nan();
  const bool gamma_domain = c > kDomainEdge && c < 1.0 - kDomainEdge;
  point.mu3 = gamma_domain ? mu3(c) : quiet_nan();
  point.g = gamma_domain ? g_of_c(c) : quiet_nan();
  return point;
}

}  // namespace randpart
