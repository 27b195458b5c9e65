#include "medfactor/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace medfactor {

namespace {

// QUADPACK qk15 nodes and weights on [-1, 1]
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelEstimate {
  double kronrod;
  double gauss;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b,
                   long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resg = 0, resk = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    evals += 2;
    resk += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
  }
  const double fc = f(c);
  ++evals;
  resk += kWgk[7] * fc;
  resg += kWg[3] * fc;
  return {resk * h, resg * h};
}

struct Adaptive {
  const std::function<double(double)>& f;
  double rel_tol;
  double abs_tol;
  int max_depth;
  QuadratureResult out;

  void descend(double a, double b, double whole_scale, int depth) {
    const auto [k, g] = gk15(f, a, b, out.evaluations);
    const double err = std::pow(200.0 * std::abs(k - g), 1.5);
    const double local_tol =
        std::max(abs_tol, rel_tol * std::max(whole_scale, std::abs(k))) *
        std::abs(b - a) / span;
    if (err <= local_tol || depth >= max_depth) {
      if (depth >= max_depth && err > local_tol * 64)
        throw std::runtime_error("adaptive quadrature failed to converge");
      out.value += k;
      out.error_estimate += err;
      return;
    }
    const double m = 0.5 * (a + b);
    descend(a, m, whole_scale, depth + 1);
    descend(m, b, whole_scale, depth + 1);
  }

  double span = 1;
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return {};
  double sign = 1;
  if (a > b) {
    std::swap(a, b);
    sign = -1;
  }
  Adaptive ad{f, rel_tol, abs_tol, max_depth, {}, b - a};
  // first pass for the magnitude scale
  long dummy = 0;
  const auto first = gk15(f, a, b, dummy);
  const double scale = std::abs(first.kronrod);
  ad.descend(a, b, scale, 0);
  ad.out.value *= sign;
  return ad.out;
}

}  // namespace medfactor
