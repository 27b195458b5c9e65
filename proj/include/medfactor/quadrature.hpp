#ifndef MEDFACTOR_QUADRATURE_HPP
#define MEDFACTOR_QUADRATURE_HPP

#include <functional>

namespace medfactor {

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
  long evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7, K15) with bisection. Stops when the summed
// local error estimates drop below max(abs_tol, rel_tol * |integral|).
// Throws std::runtime_error if the tolerance cannot be met within the
// subdivision budget.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-8, double abs_tol = 0.0,
                           int max_depth = 48);

}  // namespace medfactor

#endif
