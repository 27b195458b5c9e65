#ifndef MEDFACTOR_FACTORIZATION_HPP
#define MEDFACTOR_FACTORIZATION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace medfactor {

// Which prime-factor count a statistic refers to: omega counts distinct
// primes, big_omega counts with multiplicity.
enum class Nu { omega, big_omega };

std::string_view to_string(Nu nu);            // "omega" / "Omega"
Nu nu_from_string(std::string_view s);        // throws std::invalid_argument

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Non-owning view of one integer together with its ascending factorization.
struct FactorizationView {
  std::uint64_t n = 0;
  std::span<const PrimePower> factors;

  std::size_t omega() const { return factors.size(); }
  std::uint64_t big_omega() const;
  std::uint64_t nu_count(Nu nu) const;

  std::uint64_t smallest_prime() const;  // P^-(n)
  std::uint64_t largest_prime() const;   // P^+(n)
  bool squarefree() const;
  std::uint64_t recompose() const;
};

// Owning factorization, convertible to a view.
struct Factorization {
  std::uint64_t n = 0;
  std::vector<PrimePower> factors;

  FactorizationView view() const { return {n, factors}; }
  operator FactorizationView() const { return view(); }
};

// Complete ascending factorization by trial division. Throws
// std::domain_error for n < 2. Intended for oracle checks and small
// inputs; bulk work goes through the segmented sieve.
Factorization factorize(std::uint64_t n);

// The ceil(nu(n)/2)-th element of the ascending factor sequence,
// distinct (omega) or with multiplicity (big_omega).
std::uint64_t middle_prime(const FactorizationView& f, Nu nu);

// nu(n, E) for the prime interval E = [p_lo, p_hi]. Throws
// std::invalid_argument when p_lo > p_hi.
std::uint64_t nu_count_restricted(const FactorizationView& f, Nu nu,
                                  std::uint64_t p_lo, std::uint64_t p_hi);

// Debug dump format: "2^2*3^1*5^1".
std::string format_factorization(const FactorizationView& f);

}  // namespace medfactor

#endif
