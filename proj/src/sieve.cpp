#include "medfactor/sieve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace medfactor {

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  primes.push_back(2);
  if (limit < 3) return primes;
  // odd-only bitmap: index i represents 2i+3
  const std::uint64_t m = (limit - 1) / 2;  // count of odd candidates 3..limit
  std::vector<bool> composite(m, false);
  for (std::uint64_t i = 0;; ++i) {
    const std::uint64_t p = 2 * i + 3;
    if (p * p > limit) break;
    if (composite[i]) continue;
    for (std::uint64_t j = (p * p - 3) / 2; j < m; j += p) composite[j] = true;
  }
  const double est = limit > 10 ? static_cast<double>(limit) / std::log(static_cast<double>(limit)) : 8.0;
  primes.reserve(static_cast<std::size_t>(est * 1.15) + 8);
  for (std::uint64_t i = 0; i < m; ++i)
    if (!composite[i]) primes.push_back(2 * i + 3);
  return primes;
}

std::uint64_t integer_sqrt(std::uint64_t n) {
  if (n == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

namespace {

std::uint64_t isqrt_u64(std::uint64_t n) { return integer_sqrt(n); }

bool divisible_by_any(std::uint64_t m, const std::vector<std::uint64_t>& primes) {
  for (const std::uint64_t p : primes) {
    if (p * p > m) break;
    if (m % p == 0) return true;
  }
  return false;
}

// True when `primes` contains every prime <= bound (ascending input). The
// largest listed prime may sit below the bound; the remaining gap is scanned
// and must be prime-free (prime gaps in 64-bit range are < 1600).
bool covers_primes_up_to(const std::vector<std::uint64_t>& primes, std::uint64_t bound) {
  if (bound < 2) return true;
  if (primes.empty()) return false;
  const std::uint64_t top = primes.back();
  if (top >= bound) return true;
  if (bound - top > 2000) return false;
  for (std::uint64_t m = top + 1; m <= bound; ++m)
    if (!divisible_by_any(m, primes)) return false;
  return true;
}

}  // namespace

SegmentPlan make_segment_plan(std::uint64_t lo, std::uint64_t hi,
                              std::uint64_t segment_size,
                              const std::vector<std::uint64_t>& cached_primes) {
  if (lo < 2 || lo >= hi)
    throw std::invalid_argument("segment plan requires 2 <= lo < hi");
  if (segment_size < 1) throw std::invalid_argument("segment_size must be >= 1");
  SegmentPlan plan;
  plan.lo = lo;
  plan.hi = hi;
  plan.segment_size = segment_size;
  const std::uint64_t bound = isqrt_u64(hi - 1);
  if (covers_primes_up_to(cached_primes, bound)) {
    auto end = std::upper_bound(cached_primes.begin(), cached_primes.end(), bound);
    plan.base_primes.assign(cached_primes.begin(), end);
  } else {
    plan.base_primes = primes_up_to(bound);
  }
  return plan;
}

namespace {

// Factors every n in [seg_lo, seg_hi) by striding the base primes and
// stripping multiplicities from a residual array; a residual > 1 at the end
// is a prime exceeding sqrt(hi-1).
class SegmentWorkspace {
 public:
  explicit SegmentWorkspace(std::size_t capacity)
      : residual_(capacity), lists_(capacity) {}

  void run(std::uint64_t seg_lo, std::uint64_t seg_hi,
           const std::vector<std::uint64_t>& base_primes,
           const std::function<void(const FactorizationView&)>& emit) {
    const std::size_t len = static_cast<std::size_t>(seg_hi - seg_lo);
    for (std::size_t i = 0; i < len; ++i) {
      residual_[i] = seg_lo + i;
      lists_[i].clear();
    }
    for (const std::uint64_t p : base_primes) {
      std::uint64_t m = ((seg_lo + p - 1) / p) * p;
      if (m >= seg_hi) continue;
      for (; m < seg_hi; m += p) {
        const std::size_t i = static_cast<std::size_t>(m - seg_lo);
        std::uint64_t r = residual_[i];
        std::uint32_t k = 0;
        while (r % p == 0) {
          r /= p;
          ++k;
        }
        residual_[i] = r;
        lists_[i].push_back({p, k});
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (residual_[i] > 1) lists_[i].push_back({residual_[i], 1});
      emit(FactorizationView{seg_lo + i, lists_[i]});
    }
  }

 private:
  std::vector<std::uint64_t> residual_;
  std::vector<std::vector<PrimePower>> lists_;
};

void validate_plan(const SegmentPlan& plan) {
  if (plan.lo < 2 || plan.lo >= plan.hi)
    throw std::invalid_argument("segment plan requires 2 <= lo < hi");
  if (plan.segment_size < 1)
    throw std::invalid_argument("segment_size must be >= 1");
  if (!covers_primes_up_to(plan.base_primes, isqrt_u64(plan.hi - 1)))
    throw std::invalid_argument("base_primes do not cover sqrt(hi-1)");
}

}  // namespace

void stream_factorizations_indexed(const SegmentPlan& plan,
                                   const IndexedFactorizationVisitor& visit,
                                   unsigned workers) {
  validate_plan(plan);
  if (workers < 1) workers = 1;
  const std::uint64_t span = plan.hi - plan.lo;
  const std::uint64_t n_segments = (span + plan.segment_size - 1) / plan.segment_size;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};

  auto body = [&](unsigned w) {
    try {
      SegmentWorkspace ws(static_cast<std::size_t>(
          std::min<std::uint64_t>(plan.segment_size, span)));
      auto emit = [&](const FactorizationView& v) { visit(w, v); };
      for (;;) {
        const std::uint64_t s = next.fetch_add(1, std::memory_order_relaxed);
        if (s >= n_segments || failed.load(std::memory_order_relaxed)) break;
        const std::uint64_t seg_lo = plan.lo + s * plan.segment_size;
        const std::uint64_t seg_hi = std::min(plan.hi, seg_lo + plan.segment_size);
        ws.run(seg_lo, seg_hi, plan.base_primes, emit);
      }
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
      throw;
    }
  };

  if (workers == 1) {
    body(0);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        body(w);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void stream_factorizations(const SegmentPlan& plan, const FactorizationVisitor& visit,
                           unsigned workers) {
  stream_factorizations_indexed(
      plan, [&](unsigned, const FactorizationView& v) { visit(v); }, workers);
}

namespace {

constexpr char kPrimeMagic[8] = {'M', 'F', 'P', 'R', 'I', 'M', 'E', '1'};

std::uint64_t decode_le64(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void encode_le64(std::uint64_t v, unsigned char* b) {
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<unsigned char>(v & 0xff);
    v >>= 8;
  }
}

}  // namespace

std::vector<std::uint64_t> load_prime_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open prime cache: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kPrimeMagic, 8) != 0)
    throw std::runtime_error("bad prime cache magic in " + path);
  std::vector<std::uint64_t> primes;
  unsigned char buf[8];
  while (in.read(reinterpret_cast<char*>(buf), 8)) {
    const std::uint64_t v = decode_le64(buf);
    if (!primes.empty() && v <= primes.back())
      throw std::runtime_error("prime cache not ascending: " + path);
    primes.push_back(v);
  }
  return primes;
}

void save_prime_cache(const std::string& path, const std::vector<std::uint64_t>& primes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write prime cache: " + tmp);
    out.write(kPrimeMagic, 8);
    unsigned char buf[8];
    for (const std::uint64_t p : primes) {
      encode_le64(p, buf);
      out.write(reinterpret_cast<const char*>(buf), 8);
    }
    if (!out) throw std::runtime_error("short write to prime cache: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename prime cache into place: " + path);
}

std::vector<std::uint64_t> base_primes_with_cache(std::uint64_t bound) {
  const char* env = std::getenv("MEDFACTOR_PRIME_CACHE");
  if (env == nullptr || *env == '\0') return primes_up_to(bound);
  const std::string path(env);
  try {
    auto cached = load_prime_cache(path);
    if (!cached.empty() && cached.back() >= bound) {
      auto end = std::upper_bound(cached.begin(), cached.end(), bound);
      cached.erase(end, cached.end());
      return cached;
    }
  } catch (const std::exception&) {
    // unusable cache: fall through and rebuild
  }
  auto primes = primes_up_to(bound);
  try {
    save_prime_cache(path, primes);
  } catch (const std::exception&) {
    // cache write failure is non-fatal
  }
  return primes;
}

}  // namespace medfactor
