#include "medfactor/factorization.hpp"

#include <stdexcept>

namespace medfactor {

std::string_view to_string(Nu nu) {
  return nu == Nu::omega ? "omega" : "Omega";
}

Nu nu_from_string(std::string_view s) {
  if (s == "omega") return Nu::omega;
  if (s == "Omega") return Nu::big_omega;
  throw std::invalid_argument("nu must be \"omega\" or \"Omega\", got \"" +
                              std::string(s) + "\"");
}

std::uint64_t FactorizationView::big_omega() const {
  std::uint64_t k = 0;
  for (const auto& f : factors) k += f.exponent;
  return k;
}

std::uint64_t FactorizationView::nu_count(Nu nu) const {
  return nu == Nu::omega ? omega() : big_omega();
}

std::uint64_t FactorizationView::smallest_prime() const {
  return factors.empty() ? 0 : factors.front().prime;
}

std::uint64_t FactorizationView::largest_prime() const {
  return factors.empty() ? 0 : factors.back().prime;
}

bool FactorizationView::squarefree() const {
  for (const auto& f : factors)
    if (f.exponent > 1) return false;
  return true;
}

std::uint64_t FactorizationView::recompose() const {
  std::uint64_t prod = 1;
  for (const auto& f : factors)
    for (std::uint32_t i = 0; i < f.exponent; ++i) prod *= f.prime;
  return prod;
}

Factorization factorize(std::uint64_t n) {
  if (n < 2) throw std::domain_error("factorize requires n >= 2");
  Factorization out;
  out.n = n;
  auto strip = [&](std::uint64_t p) {
    if (n % p != 0) return;
    std::uint32_t k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    out.factors.push_back({p, k});
  };
  strip(2);
  strip(3);
  // 6k +- 1 wheel
  for (std::uint64_t d = 5; d <= n / d; d += 6) {
    strip(d);
    strip(d + 2);
  }
  if (n > 1) out.factors.push_back({n, 1});
  return out;
}

std::uint64_t middle_prime(const FactorizationView& f, Nu nu) {
  if (f.factors.empty()) throw std::domain_error("middle_prime of empty factorization");
  if (nu == Nu::omega) {
    const std::size_t idx = (f.omega() + 1) / 2;  // ceil(omega/2), 1-based
    return f.factors[idx - 1].prime;
  }
  const std::uint64_t target = (f.big_omega() + 1) / 2;
  std::uint64_t seen = 0;
  for (const auto& pk : f.factors) {
    seen += pk.exponent;
    if (seen >= target) return pk.prime;
  }
  return f.factors.back().prime;  // unreachable for valid input
}

std::uint64_t nu_count_restricted(const FactorizationView& f, Nu nu,
                                  std::uint64_t p_lo, std::uint64_t p_hi) {
  if (p_lo > p_hi)
    throw std::invalid_argument("nu_count_restricted: interval lower end exceeds upper end");
  std::uint64_t k = 0;
  for (const auto& pk : f.factors) {
    if (pk.prime < p_lo || pk.prime > p_hi) continue;
    k += nu == Nu::omega ? 1 : pk.exponent;
  }
  return k;
}

std::string format_factorization(const FactorizationView& f) {
  std::string s;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    if (i) s += '*';
    s += std::to_string(f.factors[i].prime);
    s += '^';
    s += std::to_string(f.factors[i].exponent);
  }
  return s;
}

}  // namespace medfactor
