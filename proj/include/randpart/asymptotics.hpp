#pragma once

#include <cstdint>

namespace randpart {

// Root of gamma * (1 - e^{-1/gamma}) = c. The defining map is strictly
// increasing from 0 (gamma -> 0) to 1 (gamma -> infinity), so the root is
// unique for c in (0, 1).
struct GammaSolve {
  double c = 0.0;
  double gamma = 0.0;
  double residual = 0.0;  // |gamma * (1 - e^{-1/gamma}) - c|
};

// Bisection to residual <= 1e-12 (at most 200 iterations). Domain clamped to
// (1e-6, 1 - 1e-6); throws std::domain_error outside.
GammaSolve solve_gamma(double c);

// g(c) = c + log(gamma) + (gamma - c) log(gamma - c) - gamma log(gamma).
// As c -> 0, gamma -> c from above and the middle term has the x log x limit 0.
double g_of_c(double c);

// Binary entropy in nats; 0 at (and beyond) both endpoints by continuity.
double entropy_H(double c);

// Smallest root of 2x = e (c - x)^2, for c > 0. Computed from the stable form
// of the quadratic e x^2 - (2ec + 2) x + e c^2 = 0: the larger root by the
// standard formula (no cancellation), the smaller as c^2 over it.
double x_of_c(double c);

// Exponents behind the largest-block analysis at t = 4: domain (0, 1/2],
// std::domain_error outside or when c - x(c) is not numerically positive.
double mu4(double c);
double lambda4(double c);  // entropy_H(c) + 4 mu4(c)

// The t = 3 exponent; domain that of solve_gamma.
double mu3(double c);

// Sign-change abscissae of lambda4: scan on a 1e-4 grid over (0, 1/2], refine
// each crossing by bisection. Negative exactly on [lower, upper].
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};
Interval lambda4_negative_interval();

// log of f_k(l) = n^{l-n} S(k,l) (n-l)^{n-k}; requires 1 <= l <= k <= n-1.
double f_k_l_log(std::uint32_t n, std::uint32_t k, std::uint32_t l);

// log of s_t(k) = n^{k-t} S(t,k) (1 - k/n)^t; requires 1 <= k <= t and k <= n-1.
double s_t_k_log(std::uint32_t n, std::uint32_t t, std::uint32_t k);

// Singleton-block counts of the supremum of t random maps, exactly:
//   E[M]        = n ((1 - 1/n)^{n-1})^t
//   E[C(M,2)]   = C(n,2) ((1 - 1/n)(1 - 2/n)^{n-2})^t
//   Var(M)      = 2 E[C(M,2)] + E[M] - E[M]^2
double exact_E_M(std::uint32_t n, std::uint32_t t);
double exact_E_M_pairs(std::uint32_t n, std::uint32_t t);
double exact_var_M(std::uint32_t n, std::uint32_t t);

// P(inf of t map-partitions = p_min) = prod_{s=0}^{n-1} (1 - s/n^t), exactly
// the probability that i -> (phi_1(i), ..., phi_t(i)) is injective. Log-space.
double exact_inf_min_prob(std::uint32_t n, std::uint32_t t);

// All curves at one abscissa; fields outside their domain hold NaN.
struct ExponentPoint {
  double c = 0.0;
  double entropy = 0.0;
  double x = 0.0;
  double mu4 = 0.0;
  double lambda4 = 0.0;
  double mu3 = 0.0;
  double g = 0.0;
};
ExponentPoint exponent_point(double c);

}  // namespace randpart
