#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <vector>

#include "medfactor/factorization.hpp"
#include "medfactor/sieve.hpp"

using namespace medfactor;

namespace {

// Independent trial-division oracle (kept separate from factorize on purpose).
std::vector<PrimePower> oracle_factor(std::uint64_t n) {
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    std::uint32_t k = 0;
    while (n % d == 0) {
      n /= d;
      ++k;
    }
    out.push_back({d, k});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

using FactorTable = std::map<std::uint64_t, std::vector<PrimePower>>;

FactorTable collect(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_size,
                    unsigned workers) {
  FactorTable table;
  std::mutex mu;
  auto plan = make_segment_plan(lo, hi, segment_size);
  stream_factorizations(
      plan,
      [&](const FactorizationView& v) {
        std::vector<PrimePower> copy(v.factors.begin(), v.factors.end());
        std::lock_guard<std::mutex> lk(mu);
        auto [it, inserted] = table.emplace(v.n, std::move(copy));
        REQUIRE(inserted);  // never twice for the same n
      },
      workers);
  return table;
}

}  // namespace

TEST_CASE("factorize on the worked examples") {
  auto f12 = factorize(12);
  CHECK(f12.factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  auto f97 = factorize(97);
  CHECK(f97.factors == std::vector<PrimePower>{{97, 1}});
  auto f60 = factorize(60);
  CHECK(f60.factors == std::vector<PrimePower>{{2, 2}, {3, 1}, {5, 1}});
  CHECK(f60.view().omega() == 3);
  CHECK(f60.view().big_omega() == 4);
  CHECK_THROWS_AS(factorize(1), std::domain_error);
  CHECK_THROWS_AS(factorize(0), std::domain_error);
}

TEST_CASE("factorize matches the oracle and recomposes") {
  for (std::uint64_t n = 2; n <= 20000; ++n) {
    auto f = factorize(n);
    CHECK(f.factors == oracle_factor(n));
    CHECK(f.view().recompose() == n);
  }
}

TEST_CASE("middle_prime on the worked examples") {
  CHECK(middle_prime(factorize(12), Nu::omega) == 2);
  CHECK(middle_prime(factorize(60), Nu::omega) == 3);
  CHECK(middle_prime(factorize(60), Nu::big_omega) == 2);
  for (std::uint64_t p : {2ULL, 97ULL, 65537ULL}) {
    CHECK(middle_prime(factorize(p), Nu::omega) == p);
    CHECK(middle_prime(factorize(p), Nu::big_omega) == p);
  }
  // 6 = {2,3}: ceil(2/2) = 1 -> smallest
  CHECK(middle_prime(factorize(6), Nu::omega) == 2);
}

TEST_CASE("middle_prime sits between P- and P+, equality on squarefree") {
  for (std::uint64_t n = 2; n <= 50000; ++n) {
    auto f = factorize(n);
    const auto v = f.view();
    for (Nu nu : {Nu::omega, Nu::big_omega}) {
      const auto m = middle_prime(v, nu);
      CHECK(v.smallest_prime() <= m);
      CHECK(m <= v.largest_prime());
    }
    if (v.squarefree())
      CHECK(middle_prime(v, Nu::omega) == middle_prime(v, Nu::big_omega));
  }
}

TEST_CASE("nu_count_restricted on the worked examples") {
  CHECK(nu_count_restricted(factorize(60), Nu::big_omega, 2, 2) == 2);
  CHECK(nu_count_restricted(factorize(60), Nu::omega, 3, 5) == 2);
  CHECK(nu_count_restricted(factorize(97), Nu::omega, 2, 89) == 0);
  CHECK(nu_count_restricted(factorize(97), Nu::big_omega, 2, 89) == 0);
  CHECK_THROWS_AS(nu_count_restricted(factorize(60), Nu::omega, 5, 3),
                  std::invalid_argument);
}

TEST_CASE("segment plan holds exactly the primes up to floor(sqrt(hi-1))") {
  auto plan = make_segment_plan(2, 100001);
  CHECK(integer_sqrt(100000) == 316);
  CHECK(plan.base_primes == primes_up_to(316));
  CHECK_THROWS_AS(make_segment_plan(1, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_segment_plan(5, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_segment_plan(2, 10, 0), std::invalid_argument);
}

TEST_CASE("stream over [2,10) visits each n once with the right factors") {
  auto table = collect(2, 10, 4, 1);
  REQUIRE(table.size() == 8);
  for (std::uint64_t n = 2; n < 10; ++n) CHECK(table.at(n) == oracle_factor(n));
}

TEST_CASE("stream equals trial division for every n < 1e5") {
  auto table = collect(2, 100000, std::uint64_t{1} << 14, 2);
  REQUIRE(table.size() == 99998);
  for (const auto& [n, factors] : table) CHECK(factors == oracle_factor(n));
}

TEST_CASE("stream equals trial division on a window above 1e6") {
  auto table = collect(1000000, 1010000, std::uint64_t{1} << 12, 2);
  REQUIRE(table.size() == 10000);
  for (const auto& [n, factors] : table) CHECK(factors == oracle_factor(n));
}

TEST_CASE("segmentation and worker count do not change the outcome") {
  const auto baseline = collect(2, 100000, 1000, 1);
  for (std::uint64_t seg : {std::uint64_t{1000}, std::uint64_t{10000}, std::uint64_t{100000}}) {
    for (unsigned workers : {1u, 4u}) {
      if (seg == 1000 && workers == 1) continue;
      CHECK(collect(2, 100000, seg, workers) == baseline);
    }
  }
}

TEST_CASE("prime cache round-trips and rejects junk") {
  const std::string path = "/tmp/medfactor_test_primes.bin";
  auto primes = primes_up_to(10000);
  save_prime_cache(path, primes);
  CHECK(load_prime_cache(path) == primes);

  // corrupt the magic
  {
    FILE* f = std::fopen(path.c_str(), "r+b");
    REQUIRE(f != nullptr);
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS(load_prime_cache(path));
  std::remove(path.c_str());
  CHECK_THROWS(load_prime_cache(path));
}

TEST_CASE("base_primes_with_cache builds and reuses the env cache") {
  const std::string path = "/tmp/medfactor_test_cache_env.bin";
  std::remove(path.c_str());
  setenv("MEDFACTOR_PRIME_CACHE", path.c_str(), 1);
  auto first = base_primes_with_cache(1000);
  CHECK(first == primes_up_to(1000));
  auto cached = load_prime_cache(path);
  CHECK(cached == first);
  // a second call with a smaller bound truncates the cached list
  auto second = base_primes_with_cache(100);
  CHECK(second == primes_up_to(100));
  unsetenv("MEDFACTOR_PRIME_CACHE");
  std::remove(path.c_str());
}

TEST_CASE("format_factorization uses the p^k*p^k dump format") {
  CHECK(format_factorization(factorize(12)) == "2^2*3^1");
  CHECK(format_factorization(factorize(97)) == "97^1");
}

TEST_CASE("nu round-trips through its names") {
  CHECK(nu_from_string("omega") == Nu::omega);
  CHECK(nu_from_string("Omega") == Nu::big_omega);
  CHECK(to_string(Nu::omega) == "omega");
  CHECK(to_string(Nu::big_omega) == "Omega");
  CHECK_THROWS_AS(nu_from_string("OMEGA"), std::invalid_argument);
}
