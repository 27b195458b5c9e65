#include "medfactor/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "medfactor/quadrature.hpp"

namespace medfactor {

namespace {

constexpr double kBetaMargin = 0.01;   // hardened epsilon of the theorem window
constexpr double kRhoUpperLimit = 0.995;

ScalePoint make_scale(double L1, std::optional<std::uint64_t> exact_x) {
  if (!(L1 > 1.0))
    throw std::domain_error("scale point requires log log x > 1 (x > e^e)");
  ScalePoint s;
  s.L1 = L1;
  s.L2 = std::log(L1);
  if (!(s.L2 > 1.0))
    throw std::domain_error("scale point requires log log x > 1 (x > e^e^1)");
  s.L3 = std::log(s.L2);
  s.exact_x = exact_x;
  return s;
}

}  // namespace

ScalePoint scale_point_from_x(std::uint64_t x) {
  if (x < 16) throw std::domain_error("scale_point_from_x requires x >= 16");
  return make_scale(std::log(static_cast<double>(x)), x);
}

ScalePoint scale_point_from_log(double L1) { return make_scale(L1, std::nullopt); }

double beta_of(std::uint64_t p, const ScalePoint& s) {
  if (p < 3)
    throw std::domain_error("beta_of requires p >= 3 (log log p <= 0 at p = 2)");
  return beta_of_log(std::log(static_cast<double>(p)), s);
}

double beta_of_log(double log_p, const ScalePoint& s) {
  if (!(log_p > 1.0))
    throw std::domain_error("beta_of requires log p > 1");
  const double beta = std::log(log_p) / s.L2;
  if (beta > 1.0 + 1e-12)
    throw std::domain_error("beta_of requires p <= x");
  return std::min(beta, 1.0);
}

double kappa_v(double v) {
  if (!(v > 0 && v < 1)) throw std::domain_error("kappa_v requires 0 < v < 1");
  return 2.0 * std::sqrt(v * (1.0 - v)) - 1.0;
}

double gamma_nu(Nu nu, double v) {
  if (!(v > 0 && v < 1)) throw std::domain_error("gamma_nu requires 0 < v < 1");
  const double a = a_nu(nu);
  if (v <= a) return 0.5 * (1.0 - 3.0 * v);
  return 1.0 - 2.0 * std::sqrt(v * (1.0 - v));
}

double q_fn(double v) {
  if (!(v > 0)) throw std::domain_error("q_fn requires v > 0");
  return v * std::log(v) - v + 1.0;
}

double a_nu(Nu nu) { return nu == Nu::omega ? 0.0 : 0.2; }

double lambda_of(const ScalePoint& s, double t) { return 0.5 * s.L2 + t * std::sqrt(s.L2); }

double eta_of(const ScalePoint& s) { return std::sqrt(s.L3 / s.L2); }

double eps_of(const ScalePoint& s) { return 1.0 / s.L2; }

LogValue f_nu(Nu nu, double z, const PrecisionConfig& cfg) {
  // the omega-side product is entire in z; the Omega side has a pole at 2
  if (nu == Nu::omega ? !(z > 0) : !(z > 0 && z < 2))
    throw std::domain_error(nu == Nu::omega ? "f_nu(omega, z) requires z > 0"
                                            : "f_nu(Omega, z) requires 0 < z < 2");
  const double lg = log_H(nu, z, cfg) - euler_gamma() / z - ln_gamma(1.0 + 1.0 / z);
  return LogValue::from_log(lg);
}

DensityValue rho_nu(Nu nu, double v, const PrecisionConfig& cfg) {
  const double a = a_nu(nu);
  if (!(v > a && v < 1)) {
    throw std::domain_error(nu == Nu::omega
                                ? "rho_nu(omega, v) requires 0 < v < 1"
                                : "rho_nu(Omega, v) requires 1/5 < v < 1");
  }
  if (v > kRhoUpperLimit)
    throw std::domain_error("rho_nu evaluation refused for v > 0.995");
  const double w = std::sqrt((1.0 - v) / v);
  const double lg = std::log1p(w) + f_nu(nu, w, cfg).log_magnitude -
                    std::log(2.0 * w) - 0.5 * std::log(M_PI * v * w);
  return {LogValue::from_log(lg), v, nu};
}

LogValue predict_local_law(Nu nu, const ScalePoint& s, std::uint64_t p,
                           const PrecisionConfig& cfg) {
  const double beta = beta_of(p, s);
  const double lo = a_nu(nu) + kBetaMargin;
  if (!(beta > lo && beta < 0.99))
    throw std::domain_error(
        "predict_local_law: beta_p outside the local-law theorem window "
        "(requires 1/5 + eps < beta_p < 1 - eps; hardened to (a_nu + 0.01, 0.99))");
  const double lg = s.L1 + rho_nu(nu, beta, cfg).value.log_magnitude -
                    std::log(static_cast<double>(p)) + kappa_v(beta) * s.L2 -
                    0.5 * std::log(s.L2);
  return LogValue::from_log(lg);
}

LogValue h_nu_x(Nu nu, double v, const ScalePoint& s, const PrecisionConfig& cfg) {
  const double lg = rho_nu(nu, v, cfg).value.log_magnitude + kappa_v(v) * s.L2;
  return LogValue::from_log(lg);
}

namespace {

// Integration window of the semi-theoretical CDF at threshold t.
struct CdfWindow {
  double lo;
  double hi;
  bool empty;
};

CdfWindow cdf_window(Nu nu, const ScalePoint& s, double t) {
  const double lo = std::max(0.5 - eta_of(s), a_nu(nu) + kBetaMargin);
  const double hi = std::min(0.5 + t * std::sqrt(eps_of(s)), kRhoUpperLimit);
  return {lo, hi, !(hi > lo)};
}

double integrate_h(Nu nu, const ScalePoint& s, double a, double b,
                   const PrecisionConfig& cfg) {
  if (!(b > a)) return 0;
  auto f = [&](double v) { return h_nu_x(nu, v, s, cfg).value(); };
  // split at the integrand's peak when it lies inside
  double total = 0;
  if (a < 0.5 && 0.5 < b) {
    total += integrate(f, a, 0.5, 1e-8, 1e-14).value;
    total += integrate(f, 0.5, b, 1e-8, 1e-14).value;
  } else {
    total += integrate(f, a, b, 1e-8, 1e-14).value;
  }
  return total;
}

}  // namespace

double predict_cdf(Nu nu, const ScalePoint& s, double t, const PrecisionConfig& cfg) {
  if (std::isnan(t)) throw std::domain_error("predict_cdf requires finite t");
  const auto win = cdf_window(nu, s, t);
  if (win.empty) return 0;
  return std::sqrt(s.L2) * integrate_h(nu, s, win.lo, win.hi, cfg);
}

std::vector<double> predict_cdf_grid(Nu nu, const ScalePoint& s,
                                     std::span<const double> t_grid,
                                     const PrecisionConfig& cfg) {
  std::vector<double> out;
  out.reserve(t_grid.size());
  const double root = std::sqrt(s.L2);
  double prev_hi = 0;
  double acc = 0;
  bool started = false;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (i > 0 && !(t_grid[i] >= t_grid[i - 1]))
      throw std::invalid_argument("predict_cdf_grid requires an ascending t grid");
    const auto win = cdf_window(nu, s, t_grid[i]);
    if (win.empty) {
      out.push_back(0);
      continue;
    }
    if (!started) {
      acc = integrate_h(nu, s, win.lo, win.hi, cfg);
      prev_hi = win.hi;
      started = true;
    } else if (win.hi > prev_hi) {
      acc += integrate_h(nu, s, prev_hi, win.hi, cfg);
      prev_hi = win.hi;
    }
    out.push_back(root * acc);
  }
  return out;
}

double estimate_tau(Nu nu, const PrecisionConfig& cfg, double step) {
  if (!(step > 0 && step < 0.1))
    throw std::domain_error("estimate_tau requires 0 < step < 0.1");
  auto log_rho = [&](double v) { return rho_nu(nu, v, cfg).value.log_magnitude; };
  auto central = [&](double h) {
    return (log_rho(0.5 + h) - log_rho(0.5 - h)) / (2.0 * h);
  };
  const double d1 = central(step);
  const double d2 = central(step / 2);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace medfactor
