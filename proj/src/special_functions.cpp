#include "medfactor/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "medfactor/sieve.hpp"

namespace medfactor {

LogValue LogValue::from_value(double v) {
  if (v < 0) throw std::domain_error("LogValue requires a nonnegative value");
  if (v == 0) return zero();
  return {std::log(v)};
}

double LogValue::value() const { return std::exp(log_magnitude); }

void PrecisionConfig::validate() const {
  if (prime_cutoff < 1000)
    throw std::domain_error("PrecisionConfig: prime_cutoff must be >= 1000");
  if (tail_order < 2 || tail_order > 8)
    throw std::domain_error("PrecisionConfig: tail_order must be in [2, 8]");
  if (target_rel_err < 1e-13)
    throw std::domain_error("PrecisionConfig: target_rel_err must be >= 1e-13");
}

// ---------------------------------------------------------------------------
// ln Gamma, Lanczos g=6.024680040776729583740234375, N=13 (coefficients due
// to Godfrey/Pugh, accurate to ~1e-16 relative in double).
// ---------------------------------------------------------------------------

namespace {

constexpr double kLanczosG = 6.024680040776729583740234375;

constexpr std::array<double, 13> kLanczosNum = {
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
};

constexpr std::array<double, 13> kLanczosDen = {
    0, 39916800, 120543840, 150917976, 105258076, 45995730, 13339535,
    2637558, 357423, 32670, 1925, 66, 1,
};

double lanczos_sum(double z) {
  // Horner from whichever end keeps the recursion variable <= 1
  double num = 0, den = 0;
  if (z <= 1.0) {
    for (std::size_t i = 13; i-- > 0;) {
      num = num * z + kLanczosNum[i];
      den = den * z + kLanczosDen[i];
    }
  } else {
    const double rz = 1.0 / z;
    for (std::size_t i = 0; i < 13; ++i) {
      num = num * rz + kLanczosNum[i];
      den = den * rz + kLanczosDen[i];
    }
  }
  return num / den;
}

double ln_gamma_lanczos(double z) {
  // valid for z >= 1
  const double zg = z + kLanczosG - 0.5;
  return (z - 0.5) * std::log(zg) - zg + std::log(lanczos_sum(z));
}

}  // namespace

double ln_gamma(double s) {
  if (!(s > 0)) throw std::domain_error("ln_gamma requires s > 0");
  if (s >= 1.0) return ln_gamma_lanczos(s);
  // Gamma(s) = Gamma(s+1) / s
  return ln_gamma_lanczos(s + 1.0) - std::log(s);
}

double normal_cdf(double v) {
  if (std::isnan(v)) throw std::domain_error("normal_cdf requires a finite argument");
  return 0.5 * std::erfc(-v / std::sqrt(2.0));
}

// ---------------------------------------------------------------------------
// zeta via Euler-Maclaurin
// ---------------------------------------------------------------------------

double zeta_minus_one(double s) {
  if (!(s >= 1.1)) throw std::domain_error("zeta requires s >= 1.1");
  constexpr int kN = 32;
  // B_{2k}/(2k)! for k = 1..4
  constexpr double kBern[] = {1.0 / 12, -1.0 / 720, 1.0 / 30240, -1.0 / 1209600};
  double sum = 0;
  for (int n = kN - 1; n >= 2; --n) sum += std::pow(n, -s);
  const double nms = std::pow(kN, -s);
  sum += nms * kN / (s - 1);  // N^{1-s}/(s-1)
  sum += 0.5 * nms;
  double rising = s;       // s(s+1)...(s+2k-2)
  double npow = nms / kN;  // N^{-s-2k+1}
  for (int k = 0; k < 4; ++k) {
    sum += kBern[k] * rising * npow;
    rising *= (s + 2 * k + 1) * (s + 2 * k + 2);
    npow /= kN * kN;
  }
  return sum;
}

double zeta(double s) { return 1.0 + zeta_minus_one(s); }

namespace {

int mobius(std::uint64_t n) {
  int result = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

}  // namespace

double prime_zeta(double s) {
  if (!(s >= 2)) throw std::domain_error("prime_zeta requires s >= 2");
  double acc = 0;
  for (int k = 1; k <= 1200; ++k) {
    if (k * s > 1100) break;  // zeta(ks)-1 underflows
    const int mu = mobius(static_cast<std::uint64_t>(k));
    if (mu == 0) continue;
    const double term = mu * std::log1p(zeta_minus_one(k * s)) / k;
    acc += term;
    if (std::abs(term) < 1e-18 && k > 1) break;
  }
  return acc;
}

double euler_gamma() { return 0.577215664901532860606512; }

namespace {

double prime_zeta_cached(int j) {
  static std::array<double, 65> table = [] {
    std::array<double, 65> t{};
    for (int k = 2; k <= 64; ++k) t[k] = prime_zeta(k);
    return t;
  }();
  if (j < 2 || j > 64) throw std::domain_error("cached prime_zeta order out of range");
  return table[j];
}

}  // namespace

double meissel_mertens() {
  static const double kappa = [] {
    double acc = euler_gamma();
    for (int k = 2; k <= 64; ++k) {
      const double term = prime_zeta_cached(k) / k;
      acc -= term;
      if (term < 1e-18) break;
    }
    return acc;
  }();
  return kappa;
}

// ---------------------------------------------------------------------------
// log H: explicit product over q <= Q0, tail of order K via
// c_j(z) * (P(j) - sum_{q<=Q0} q^{-j}).
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxTailOrder = 9;  // highest 1/q power kept in tables

struct EulerTailTable {
  std::vector<double> primes;                    // q <= Q0, as doubles
  std::array<double, kMaxTailOrder + 1> below{}; // below[j] = sum_{q<=Q0} q^{-j}
};

std::shared_ptr<const EulerTailTable> tail_table(std::uint64_t q0) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const EulerTailTable>> cache;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(q0);
    if (it != cache.end()) return it->second;
  }
  auto table = std::make_shared<EulerTailTable>();
  const auto primes = primes_up_to(q0);
  table->primes.reserve(primes.size());
  for (const std::uint64_t q : primes) table->primes.push_back(static_cast<double>(q));
  for (int j = 2; j <= kMaxTailOrder; ++j) {
    double s = 0;
    for (auto it = table->primes.rbegin(); it != table->primes.rend(); ++it)
      s += std::pow(*it, -j);  // ascending magnitude
    table->below[j] = s;
  }
  std::lock_guard<std::mutex> lk(mu);
  auto [it, _] = cache.emplace(q0, std::move(table));
  return it->second;
}

}  // namespace

double log_H(Nu nu, double z, const PrecisionConfig& cfg) {
  cfg.validate();
  if (nu == Nu::omega) {
    if (!(z > 0)) throw std::domain_error("log_H(omega, z) requires z > 0");
  } else {
    if (!(z > 0)) throw std::domain_error("log_H(Omega, z) requires z > 0");
    if (z >= 2)
      throw std::domain_error(
          "log_H(Omega, z) has a pole at z = 2 (factor (1 - z/q)^-1 at q = 2); requires z < 2");
  }
  const auto table = tail_table(cfg.prime_cutoff);

  double head;
  if (nu == Nu::omega) {
    head = meissel_mertens();
    for (const double q : table->primes) head += std::log1p(z / (q - 1)) - z / q;
  } else {
    head = euler_gamma() * z;
    for (const double q : table->primes)
      head += z * std::log1p(-1.0 / q) - std::log1p(-z / q);
  }

  // tail: coefficient of q^-j in the per-prime log term
  double tail = 0;
  for (int j = 2; j <= cfg.tail_order; ++j) {
    const double cj = nu == Nu::omega
                          ? (1.0 - std::pow(1.0 - z, j)) / j
                          : (std::pow(z, j) - z) / j;
    tail += cj * (prime_zeta_cached(j) - table->below[j]);
  }
  return head + tail;
}

}  // namespace medfactor
