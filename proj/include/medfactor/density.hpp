#ifndef MEDFACTOR_DENSITY_HPP
#define MEDFACTOR_DENSITY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "medfactor/factorization.hpp"
#include "medfactor/special_functions.hpp"

namespace medfactor {

// A scale abscissa in log-log coordinates. L1 = log x, L2 = log log x,
// L3 = log log log x; exact_x is carried along when x is word-sized, so the
// theory side works unchanged for x as large as e^(e^40).
struct ScalePoint {
  double L1 = 0;
  double L2 = 0;
  double L3 = 0;
  std::optional<std::uint64_t> exact_x;
};

// Throw std::domain_error unless log log x > 1.
ScalePoint scale_point_from_x(std::uint64_t x);
ScalePoint scale_point_from_log(double L1);

// beta_p = log log p / log log x, in (0, 1]. Requires p >= 3 (log log 2 < 0).
double beta_of(std::uint64_t p, const ScalePoint& s);
double beta_of_log(double log_p, const ScalePoint& s);

// Local-law exponent kappa(v) = 2 sqrt(v(1-v)) - 1 on (0, 1); max 0 at 1/2.
double kappa_v(double v);

// Piecewise exponent of the uniform local-law bound:
//   (1-3v)/2 on (0, a_nu], 1 - 2 sqrt(v(1-v)) on [a_nu, 1).
double gamma_nu(Nu nu, double v);

// Rate function Q(v) = v log v - v + 1 of the Hall-Tenenbaum bounds, v > 0.
double q_fn(double v);

// Left endpoint of the density's support: 0 for omega, 1/5 for big_omega.
double a_nu(Nu nu);

double lambda_of(const ScalePoint& s, double t);  // L2/2 + t sqrt(L2)
double eta_of(const ScalePoint& s);               // sqrt(L3/L2)
double eps_of(const ScalePoint& s);               // 1/L2

// f_nu(z) = H_nu(z) e^{-gamma/z} / Gamma(1 + 1/z), log space, 0 < z < 2.
LogValue f_nu(Nu nu, double z, const PrecisionConfig& cfg = {});

struct DensityValue {
  LogValue value;
  double v = 0;
  Nu nu = Nu::omega;
};

// Local-law density rho_nu(v) = (1+w) f_nu(w) / (2w sqrt(pi v w)),
// w = sqrt((1-v)/v), on (a_nu, 1). Evaluation is refused above v = 0.995
// where the Euler-product accuracy degrades.
DensityValue rho_nu(Nu nu, double v, const PrecisionConfig& cfg = {});

// Main term of the local law:
//   M_nu(x, p) ~ rho_nu(beta_p) x / (p (log x)^{1 - 2 sqrt(beta_p(1-beta_p))} sqrt(log_2 x)).
// Valid for beta_p in (a_nu + 0.01, 0.99); outside, throws std::domain_error.
LogValue predict_local_law(Nu nu, const ScalePoint& s, std::uint64_t p,
                           const PrecisionConfig& cfg = {});

// h_{nu,x}(v) = rho_nu(v) (log x)^{kappa(v)}.
LogValue h_nu_x(Nu nu, double v, const ScalePoint& s, const PrecisionConfig& cfg = {});

// Semi-theoretical CDF: sqrt(L2) * integral of h_{nu,x} over
// [1/2 - eta_x, 1/2 + t sqrt(eps_x)), intersected with the density's
// validity window (a_nu + 0.01, 0.995]; 0 when empty.
double predict_cdf(Nu nu, const ScalePoint& s, double t,
                   const PrecisionConfig& cfg = {});

// Same values on an ascending t-grid, integrating each increment once.
std::vector<double> predict_cdf_grid(Nu nu, const ScalePoint& s,
                                     std::span<const double> t_grid,
                                     const PrecisionConfig& cfg = {});

// Optimality constant tau = d/dv log rho_nu(1/2 + v) at v = 0, by central
// differences with one Richardson step (kappa is even around 1/2, so it
// contributes no odd term).
double estimate_tau(Nu nu, const PrecisionConfig& cfg = {}, double step = 5e-4);

}  // namespace medfactor

#endif
