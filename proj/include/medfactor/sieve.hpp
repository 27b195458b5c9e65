#ifndef MEDFACTOR_SIEVE_HPP
#define MEDFACTOR_SIEVE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "medfactor/factorization.hpp"

namespace medfactor {

// All primes <= limit, ascending (simple Eratosthenes, odd-only).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// floor(sqrt(n)) without floating-point edge cases.
std::uint64_t integer_sqrt(std::uint64_t n);

// One factorization pass over the half-open range [lo, hi).
struct SegmentPlan {
  std::uint64_t lo = 2;
  std::uint64_t hi = 2;
  std::uint64_t segment_size = std::uint64_t{1} << 18;
  std::vector<std::uint64_t> base_primes;  // exactly the primes <= floor(sqrt(hi-1))
};

// Builds a valid plan; throws std::invalid_argument on a bad range or
// segment size. `cached_primes` (ascending) is used when it covers
// floor(sqrt(hi-1)), otherwise the base primes are sieved fresh.
SegmentPlan make_segment_plan(std::uint64_t lo, std::uint64_t hi,
                              std::uint64_t segment_size = std::uint64_t{1} << 18,
                              const std::vector<std::uint64_t>& cached_primes = {});

using FactorizationVisitor = std::function<void(const FactorizationView&)>;
using IndexedFactorizationVisitor =
    std::function<void(unsigned worker, const FactorizationView&)>;

// Calls the visitor exactly once for every n in [plan.lo, plan.hi) with its
// complete ascending factorization. With workers > 1 the visitor runs
// concurrently from several threads, never twice for the same n; the
// multiset of visited factorizations is independent of segmentation and
// scheduling. The view's factor span is only valid during the call.
void stream_factorizations(const SegmentPlan& plan, const FactorizationVisitor& visit,
                           unsigned workers = 1);

// Same engine, with the worker index exposed for shard-local accumulation.
// worker is always < workers.
void stream_factorizations_indexed(const SegmentPlan& plan,
                                   const IndexedFactorizationVisitor& visit,
                                   unsigned workers);

// Binary base-prime cache: 8-byte magic "MFPRIME1" followed by ascending
// little-endian 64-bit primes.
std::vector<std::uint64_t> load_prime_cache(const std::string& path);
void save_prime_cache(const std::string& path, const std::vector<std::uint64_t>& primes);

// Primes <= bound, consulting the MEDFACTOR_PRIME_CACHE environment
// variable: a usable cache is loaded, an absent or insufficient one is
// rewritten after sieving.
std::vector<std::uint64_t> base_primes_with_cache(std::uint64_t bound);

}  // namespace medfactor

#endif
