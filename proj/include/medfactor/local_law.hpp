#ifndef MEDFACTOR_LOCAL_LAW_HPP
#define MEDFACTOR_LOCAL_LAW_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "medfactor/factorization.hpp"

namespace medfactor {

// Mergeable histogram of the local law M_nu(x, p) = #{n <= x : p_m,nu(n) = p}.
// Primes up to p_cut are counted exactly; larger middle primes are binned by
// beta_p = log log p / log log x into buckets of width delta_beta.
struct LocalLawCounts {
  std::uint64_t x = 0;
  Nu nu = Nu::omega;
  std::uint64_t p_cut = 0;
  double delta_beta = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> exact_counts;  // (p, count), ascending, nonzero
  std::vector<std::uint64_t> bucket_counts;                           // ceil(1/delta_beta) buckets
  std::uint64_t total = 0;

  bool same_config(const LocalLawCounts& other) const;
  std::uint64_t exact_count(std::uint64_t p) const;  // 0 when absent
};

inline constexpr std::uint64_t kDefaultPcut = std::uint64_t{1} << 20;
inline constexpr double kDefaultDeltaBeta = 0.005;

// Counts over all 2 <= n <= x.
LocalLawCounts accumulate(std::uint64_t x, Nu nu, std::uint64_t p_cut = kDefaultPcut,
                          double delta_beta = kDefaultDeltaBeta,
                          std::uint64_t segment_size = std::uint64_t{1} << 18,
                          unsigned workers = 1);

// Shard over [lo, hi) of the same x-configuration, for split runs.
LocalLawCounts accumulate_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t x,
                                Nu nu, std::uint64_t p_cut = kDefaultPcut,
                                double delta_beta = kDefaultDeltaBeta,
                                std::uint64_t segment_size = std::uint64_t{1} << 18,
                                unsigned workers = 1);

LocalLawCounts empty_counts(std::uint64_t x, Nu nu, std::uint64_t p_cut = kDefaultPcut,
                            double delta_beta = kDefaultDeltaBeta);

// Pointwise sum of two shards of the same configuration; commutative and
// associative. Throws std::invalid_argument on a configuration mismatch.
LocalLawCounts merge(const LocalLawCounts& a, const LocalLawCounts& b);

// A_nu(x, t) = (1/x) * sum over log log p < lambda(x, t) of M_nu(x, p).
// Bucketed mass is attributed at the bucket midpoint.
double empirical_cdf(const LocalLawCounts& c, double t);

// Partial sum E(x) = sum of 1/p over primes p in [e_lo, e_hi] with p <= x.
// Throws std::domain_error when the interval contains no prime <= x.
double prime_harmonic(std::uint64_t e_lo, std::uint64_t e_hi, std::uint64_t x);

enum class TailSide { below, above };

// Hall-Tenenbaum tail count: #{n <= x : nu(n, E) <= a E(x)} (below) or
// >= b E(x) (above), with the sub-Gaussian reference bound x e^{-E(x) Q(factor)}.
struct TailCountReport {
  std::uint64_t x = 0;
  Nu nu = Nu::omega;
  std::uint64_t e_lo = 0;
  std::uint64_t e_hi = 0;
  TailSide side = TailSide::above;
  double factor = 0;
  double e_of_x = 0;
  std::uint64_t count = 0;
  double bound = 0;
};

// Validity: 0 < factor < 1 for below, factor > 1 for above (the source
// lemma additionally wants factor < min E; not enforced).
TailCountReport tail_count(std::uint64_t x, Nu nu, std::uint64_t e_lo, std::uint64_t e_hi,
                           TailSide side, double factor,
                           std::uint64_t segment_size = std::uint64_t{1} << 18,
                           unsigned workers = 1);

}  // namespace medfactor

#endif
