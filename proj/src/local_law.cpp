#include "medfactor/local_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "medfactor/density.hpp"
#include "medfactor/sieve.hpp"

namespace medfactor {

namespace {

std::size_t bucket_dim(double delta_beta) {
  return static_cast<std::size_t>(std::ceil(1.0 / delta_beta));
}

void validate_config(std::uint64_t x, std::uint64_t p_cut, double delta_beta) {
  if (x < 2) throw std::domain_error("accumulate requires x >= 2");
  if (p_cut < 2) throw std::domain_error("accumulate requires p_cut >= 2");
  if (!(delta_beta > 0 && delta_beta <= 0.01))
    throw std::domain_error("accumulate requires 0 < delta_beta <= 0.01");
}

}  // namespace

bool LocalLawCounts::same_config(const LocalLawCounts& other) const {
  return x == other.x && nu == other.nu && p_cut == other.p_cut &&
         delta_beta == other.delta_beta;
}

std::uint64_t LocalLawCounts::exact_count(std::uint64_t p) const {
  auto it = std::lower_bound(exact_counts.begin(), exact_counts.end(), p,
                             [](const auto& e, std::uint64_t v) { return e.first < v; });
  return it != exact_counts.end() && it->first == p ? it->second : 0;
}

LocalLawCounts empty_counts(std::uint64_t x, Nu nu, std::uint64_t p_cut,
                            double delta_beta) {
  validate_config(x, p_cut, delta_beta);
  LocalLawCounts c;
  c.x = x;
  c.nu = nu;
  c.p_cut = p_cut;
  c.delta_beta = delta_beta;
  c.bucket_counts.assign(bucket_dim(delta_beta), 0);
  return c;
}

LocalLawCounts accumulate_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t x,
                                Nu nu, std::uint64_t p_cut, double delta_beta,
                                std::uint64_t segment_size, unsigned workers) {
  validate_config(x, p_cut, delta_beta);
  if (lo < 2 || hi > x + 1 || lo > hi)
    throw std::domain_error("accumulate_range requires 2 <= lo <= hi <= x + 1");
  LocalLawCounts result = empty_counts(x, nu, p_cut, delta_beta);
  if (lo == hi) return result;
  if (workers < 1) workers = 1;

  const double L2 = std::log(std::log(static_cast<double>(x)));
  const std::size_t nb = result.bucket_counts.size();

  // middle primes never exceed x, so the dense table stops there
  const std::uint64_t dense_cut = std::min(p_cut, x);
  struct Shard {
    std::vector<std::uint64_t> dense;    // index = prime p <= dense_cut
    std::vector<std::uint64_t> buckets;
  };
  std::vector<Shard> shards(workers);
  for (auto& sh : shards) {
    sh.dense.assign(static_cast<std::size_t>(dense_cut) + 1, 0);
    sh.buckets.assign(nb, 0);
  }

  auto plan = make_segment_plan(lo, hi, segment_size,
                                base_primes_with_cache(integer_sqrt(hi - 1)));
  stream_factorizations_indexed(
      plan,
      [&](unsigned w, const FactorizationView& v) {
        const std::uint64_t p = middle_prime(v, nu);
        Shard& sh = shards[w];
        if (p <= p_cut) {
          ++sh.dense[static_cast<std::size_t>(p)];
        } else {
          const double beta = std::log(std::log(static_cast<double>(p))) / L2;
          auto idx = static_cast<std::size_t>(std::max(0.0, beta / delta_beta));
          if (idx >= nb) idx = nb - 1;
          ++sh.buckets[idx];
        }
      },
      workers);

  // fold shards into the sparse result
  std::uint64_t total = 0;
  for (std::size_t p = 2; p <= dense_cut; ++p) {
    std::uint64_t c = 0;
    for (const auto& sh : shards) c += sh.dense[p];
    if (c) {
      result.exact_counts.emplace_back(p, c);
      total += c;
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    std::uint64_t c = 0;
    for (const auto& sh : shards) c += sh.buckets[i];
    result.bucket_counts[i] = c;
    total += c;
  }
  result.total = total;
  return result;
}

LocalLawCounts accumulate(std::uint64_t x, Nu nu, std::uint64_t p_cut, double delta_beta,
                          std::uint64_t segment_size, unsigned workers) {
  return accumulate_range(2, x + 1, x, nu, p_cut, delta_beta, segment_size, workers);
}

LocalLawCounts merge(const LocalLawCounts& a, const LocalLawCounts& b) {
  if (!a.same_config(b))
    throw std::invalid_argument("merge requires identical (x, nu, p_cut, delta_beta)");
  LocalLawCounts out = empty_counts(a.x, a.nu, a.p_cut, a.delta_beta);
  out.exact_counts.reserve(a.exact_counts.size() + b.exact_counts.size());
  auto ia = a.exact_counts.begin();
  auto ib = b.exact_counts.begin();
  while (ia != a.exact_counts.end() || ib != b.exact_counts.end()) {
    if (ib == b.exact_counts.end() ||
        (ia != a.exact_counts.end() && ia->first < ib->first)) {
      out.exact_counts.push_back(*ia++);
    } else if (ia == a.exact_counts.end() || ib->first < ia->first) {
      out.exact_counts.push_back(*ib++);
    } else {
      out.exact_counts.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  for (std::size_t i = 0; i < out.bucket_counts.size(); ++i)
    out.bucket_counts[i] = a.bucket_counts[i] + b.bucket_counts[i];
  out.total = a.total + b.total;
  return out;
}

double empirical_cdf(const LocalLawCounts& c, double t) {
  if (std::isnan(t)) throw std::domain_error("empirical_cdf requires finite t");
  const double L2 = std::log(std::log(static_cast<double>(c.x)));
  const double lambda = 0.5 * L2 + t * std::sqrt(L2);
  std::uint64_t sum = 0;
  for (const auto& [p, cnt] : c.exact_counts) {
    if (std::log(std::log(static_cast<double>(p))) < lambda) sum += cnt;
  }
  for (std::size_t i = 0; i < c.bucket_counts.size(); ++i) {
    if (c.bucket_counts[i] == 0) continue;
    const double beta_mid = (static_cast<double>(i) + 0.5) * c.delta_beta;
    if (beta_mid * L2 < lambda) sum += c.bucket_counts[i];
  }
  return static_cast<double>(sum) / static_cast<double>(c.x);
}

double prime_harmonic(std::uint64_t e_lo, std::uint64_t e_hi, std::uint64_t x) {
  if (e_lo > e_hi) throw std::invalid_argument("prime interval lower end exceeds upper end");
  const std::uint64_t limit = std::min(e_hi, x);
  if (limit < 2 || e_lo > limit)
    throw std::domain_error("prime_harmonic: interval contains no prime <= x");
  const auto primes = primes_up_to(limit);
  double sum = 0;
  bool any = false;
  for (const std::uint64_t p : primes) {
    if (p < e_lo) continue;
    sum += 1.0 / static_cast<double>(p);
    any = true;
  }
  if (!any) throw std::domain_error("prime_harmonic: interval contains no prime <= x");
  return sum;
}

TailCountReport tail_count(std::uint64_t x, Nu nu, std::uint64_t e_lo, std::uint64_t e_hi,
                           TailSide side, double factor, std::uint64_t segment_size,
                           unsigned workers) {
  if (x < 2) throw std::domain_error("tail_count requires x >= 2");
  if (side == TailSide::below && !(factor > 0 && factor < 1))
    throw std::domain_error("tail_count below-side requires 0 < a < 1");
  if (side == TailSide::above && !(factor > 1))
    throw std::domain_error("tail_count above-side requires b > 1");
  if (workers < 1) workers = 1;

  TailCountReport rep;
  rep.x = x;
  rep.nu = nu;
  rep.e_lo = e_lo;
  rep.e_hi = e_hi;
  rep.side = side;
  rep.factor = factor;
  rep.e_of_x = prime_harmonic(e_lo, e_hi, x);
  const double threshold = factor * rep.e_of_x;

  std::vector<std::uint64_t> partial(workers, 0);
  auto plan = make_segment_plan(2, x + 1, segment_size);
  stream_factorizations_indexed(
      plan,
      [&](unsigned w, const FactorizationView& v) {
        const auto k = static_cast<double>(nu_count_restricted(v, nu, e_lo, e_hi));
        const bool hit = side == TailSide::below ? k <= threshold : k >= threshold;
        if (hit) ++partial[w];
      },
      workers);
  for (const std::uint64_t c : partial) rep.count += c;
  rep.bound = static_cast<double>(x) * std::exp(-rep.e_of_x * q_fn(factor));
  return rep;
}

}  // namespace medfactor
