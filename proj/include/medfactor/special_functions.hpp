#ifndef MEDFACTOR_SPECIAL_FUNCTIONS_HPP
#define MEDFACTOR_SPECIAL_FUNCTIONS_HPP

#include <cstdint>
#include <limits>

#include "medfactor/factorization.hpp"

namespace medfactor {

// A positive real carried as its natural log, so densities and Euler
// products can be combined without underflow. Exact zero is -inf.
struct LogValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static LogValue from_log(double lg) { return {lg}; }
  static LogValue from_value(double v);  // requires v >= 0
  static LogValue zero() { return {}; }

  bool is_zero() const { return log_magnitude == -std::numeric_limits<double>::infinity(); }
  double value() const;  // exp(log_magnitude), may underflow to 0
};

// Euler-product evaluation control: explicit product up to prime_cutoff,
// then a tail expansion in 1/q of order tail_order.
struct PrecisionConfig {
  std::uint64_t prime_cutoff = 100'000;  // Q0
  int tail_order = 6;                    // K
  double target_rel_err = 1e-12;

  void validate() const;  // throws std::domain_error outside the allowed ranges
};

// ln Gamma(s) for s > 0, relative error <= 1e-12 (Lanczos rational
// approximation, g = 6.0246800407767296, 13 terms).
double ln_gamma(double s);

// Standard normal CDF via erfc, absolute error <= 1e-12, relatively
// accurate in both tails.
double normal_cdf(double v);

// Riemann zeta for s >= 1.1 (Euler-Maclaurin, 4 Bernoulli corrections).
double zeta(double s);
// zeta(s) - 1 without cancellation; same domain.
double zeta_minus_one(double s);

// Prime zeta P(s) = sum over primes of p^-s, s >= 2, via
// sum_k mu(k)/k * ln zeta(ks).
double prime_zeta(double s);

// Euler-Mascheroni constant (fixed 15+ digit constant).
double euler_gamma();
// Meissel-Mertens constant, computed as gamma - sum_{k>=2} P(k)/k.
double meissel_mertens();

// ln of the Euler-product constant H_nu(z):
//   omega:      e^kappa * prod_q (1 + z/(q-1)) e^{-z/q},  z > 0
//   big_omega:  e^{gamma z} * prod_q (1-1/q)^z (1-z/q)^{-1},  0 < z < 2
// Explicit product over q <= Q0 plus an order-K tail in 1/q.
double log_H(Nu nu, double z, const PrecisionConfig& cfg = {});

}  // namespace medfactor

#endif
