#include <doctest.h>

#include <map>
#include <mutex>
#include <random>
#include <set>

#include "spsp/numth.hpp"
#include "spsp/primes.hpp"
#include "spsp/pseudoprime.hpp"
#include "spsp/search.hpp"

using namespace spsp;
using namespace spsp::search;

namespace {

const BaseVector kV9 = BaseVector::first(9);

struct Row {
  u64 b, p1, p2, lambda;
  const char* sigma;
};

// feasible 2-tuples with b < 2e6 under Q_11, computed by brute force over all prime pairs
const Row kSmallProducts[] = {
    {685441, 31, 22111, 22110, "(0,1,0,0,1,1,1,0,1)"},     {919801, 31, 29671, 29670, "(0,1,0,0,1,1,1,0,1)"},
    {1267249, 31, 40879, 204390, "(0,1,0,0,1,1,1,0,1)"},   {399169, 43, 9283, 9282, "(1,1,1,1,0,0,0,1,0)"},
    {703609, 43, 16363, 114534, "(1,1,1,1,0,0,0,1,0)"},    {1379569, 43, 32083, 224574, "(1,1,1,1,0,0,0,1,0)"},
    {1487929, 43, 34603, 242214, "(1,1,1,1,0,0,0,1,0)"},   {1772761, 43, 41227, 288582, "(1,1,1,1,0,0,0,1,0)"},
    {741049, 47, 15767, 362618, "(0,0,1,0,1,1,0,1,1)"},    {1879201, 47, 39983, 919586, "(0,0,1,0,1,1,0,1,1)"},
    {117049, 67, 1747, 19206, "(1,1,1,1,1,1,0,0,0)"},      {1578721, 67, 23563, 23562, "(1,1,1,1,1,1,0,0,0)"},
    {1354609, 71, 19079, 667730, "(0,0,0,1,1,1,1,0,1)"},   {722929, 79, 9151, 118950, "(0,1,0,1,0,0,1,0,0)"},
    {1272769, 79, 16111, 209430, "(0,1,0,1,0,0,1,0,0)"},   {457081, 83, 5507, 225746, "(1,0,1,0,0,1,0,1,0)"},
    {1391329, 83, 16763, 687242, "(1,0,1,0,0,1,0,1,0)"},   {1739929, 83, 20963, 859442, "(1,0,1,0,0,1,0,1,0)"},
    {1652401, 107, 15443, 818426, "(1,0,1,1,0,0,1,0,0)"},  {1730689, 139, 12451, 286350, "(1,1,0,0,0,0,1,1,1)"},
    {1790881, 163, 10987, 296622, "(1,1,1,1,1,1,1,1,1)"},  {528889, 167, 3167, 262778, "(0,0,1,0,0,1,1,0,1)"},
    {1851529, 167, 11087, 920138, "(0,0,1,0,0,1,1,0,1)"},  {1892881, 211, 8971, 62790, "(1,1,0,1,0,0,1,0,1)"},
    {1552849, 229, 6781, 128820, "(2,0,1,2,1,2,0,0,2)"},   {416329, 263, 1583, 207242, "(0,0,1,1,0,0,0,1,0)"},
    {223609, 311, 719, 111290, "(0,0,0,0,1,0,1,1,1)"},     {1912849, 331, 5779, 317790, "(1,1,0,1,1,1,0,0,1)"},
    {825841, 379, 2179, 45738, "(1,1,0,1,1,1,1,0,0)"},     {540409, 439, 1231, 89790, "(0,1,0,0,0,0,1,0,1)"},
    {503281, 463, 1087, 83622, "(0,1,1,1,1,1,0,1,1)"},     {929041, 503, 1847, 463346, "(0,0,1,0,0,0,1,1,0)"},
    {1627921, 571, 2851, 2850, "(1,1,0,1,0,0,1,1,0)"},     {1280449, 787, 1627, 213006, "(1,1,1,0,0,1,1,0,0)"},
    {1616521, 919, 1759, 268974, "(0,1,0,1,0,0,0,1,0)"},   {1538161, 1063, 1447, 255942, "(0,1,1,0,0,0,0,0,0)"},
    {1772521, 1103, 1607, 884906, "(0,0,1,1,1,1,0,1,0)"},
};

/// Odd primes below bound (not bases of v) grouped by signature.
std::map<Signature, std::vector<u64>> primes_by_signature(u64 bound, const BaseVector& v) {
  std::map<Signature, std::vector<u64>> out;
  for (u64 q : primes::sieve_range(3, bound))
    if (!v.contains(q)) out[signature(q, v)].push_back(q);
  return out;
}

bool in_any(const std::vector<ResidueClass>& cs, u64 q) {
  return std::any_of(cs.begin(), cs.end(), [&](const ResidueClass& c) { return c.contains(q); });
}

bool all_qr(u64 q, const BaseVector& v) {
  for (u64 a : v.bases())
    if (numth::jacobi_u(a, q) != 1) return false;
  return true;
}

std::vector<u64> hit_values(const std::vector<Hit>& hits) {
  std::vector<u64> out;
  for (const auto& h : hits) out.push_back(h.n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("case names round-trip") {
  for (Case c : {Case::Square, Case::T2, Case::T3, Case::T4, Case::T5}) CHECK(parse_case(case_name(c)) == c);
  CHECK(parse_case("3") == Case::T3);
  CHECK_FALSE(parse_case("t7").has_value());
}

TEST_CASE("30 classes for a 3 mod 4 prime with five bases") {
  for (u64 p1 : {31u, 43u, 18191u, 1000003u}) {
    REQUIRE(p1 % 4 == 3);
    auto br = residue_branches(p1, kV9, 5);
    REQUIRE(br.size() == 1);
    CHECK(br[0].classes.size() == 30);
    for (const auto& c : br[0].classes) CHECK(c.modulus == 9240);
    // brute force: residues mod 9240 that are 3 mod 4 with matching symbols
    std::vector<ResidueClass> want;
    for (u64 r = 3; r < 9240; r += 4) {
      bool ok = numth::gcd(r, 1155) == 1;
      for (std::size_t i = 0; i < 5 && ok; ++i) ok = numth::jacobi_u(kV9[i], r) == numth::jacobi_u(kV9[i], p1);
      if (ok) want.emplace_back(9240, r);
    }
    CHECK(br[0].classes == want);
  }
}

TEST_CASE("30 classes modulo 18480 for the q == 9 mod 16 branches") {
  // p1 == 5 mod 8 with f == e == 2: the all-+1 branch is q == 9 mod 16
  u64 p1 = 0;
  for (u64 p : primes::sieve_range(29, 100000))
    if (p % 8 == 5 && signature(p, kV9).max_entry() == 2) {
      p1 = p;
      break;
    }
  REQUIRE(p1 != 0);
  auto br = residue_branches(p1, kV9, 5);
  REQUIRE(br.size() == 2);
  CHECK(br[1].label == "plus");
  CHECK(br[1].classes.size() == 30);
  for (const auto& c : br[1].classes) {
    CHECK(c.modulus == 18480);
    CHECK(c.residue % 16 == 9);
  }
  // p1 == 9 mod 16 with f == e == 3: the matching branch is q == 9 mod 16
  u64 p9 = 0;
  for (u64 p : primes::sieve_range(29, 1000000))
    if (p % 16 == 9 && signature(p, kV9).max_entry() == 3) {
      p9 = p;
      break;
    }
  REQUIRE(p9 != 0);
  auto m = residue_branches(p9, kV9, 5);
  CHECK(m[0].classes.size() == 30);
  for (const auto& c : m[0].classes) CHECK(c.modulus == 18480);
}

TEST_CASE("class filters never exclude a true signature match") {
  const u64 bound = 10000000;
  auto groups = primes_by_signature(bound, kV9);
  std::mt19937_64 rng(2024);
  std::map<std::string, std::vector<u64>> by_case;
  for (u64 p : primes::sieve_range(29, 200000)) {
    unsigned e = numth::val2(p - 1), f = signature(p, kV9).max_entry();
    std::string k = e == 1 ? "3mod4" : f == e ? "f=e" : "f<e";
    by_case[k].push_back(p);
  }
  REQUIRE(by_case.size() == 3);
  for (auto& [label, ps] : by_case) {
    std::shuffle(ps.begin(), ps.end(), rng);
    for (std::size_t i = 0; i < std::min<std::size_t>(100, ps.size()); ++i) {
      u64 p1 = ps[i];
      auto classes = residue_classes(p1, kV9, 5);
      auto left = leftover_class(p1, kV9);
      std::vector<ResidueClass> complete;
      for (auto& b : complete_branches(p1, kV9, 6)) complete.insert(complete.end(), b.classes.begin(), b.classes.end());
      for (u64 q : groups[signature(p1, kV9)]) {
        if (q <= p1) continue;
        bool covered = in_any(classes, q) || (left && left->contains(q) && all_qr(q, kV9));
        INFO(label << " p1=" << p1 << " q=" << q);
        REQUIRE(covered);
        REQUIRE(in_any(complete, q));
      }
    }
  }
}

TEST_CASE("signature_candidates equals the brute-force match list") {
  const u64 hi = 3000000;
  auto groups = primes_by_signature(hi + 1, kV9);
  EvenMuPool pool(kV9);
  pool.extend_to(hi);
  for (u64 p1 : primes::sieve_range(29, 3000)) {
    auto got = signature_candidates(p1, p1, hi, kV9, &pool).primes;
    std::vector<u64> want;
    for (u64 q : groups[signature(p1, kV9)])
      if (q > p1 && q <= hi) want.push_back(q);
    REQUIRE(got == want);
  }
  EvenMuPool small(kV9);
  small.extend_to(1000);
  CHECK_THROWS_AS(signature_candidates(31, 31, 5000, kV9, &small), std::logic_error);
}

TEST_CASE("feasible 2-tuples with small product") {
  SearchConfig cfg;
  auto tuples = feasible_2tuples(cfg, 2000000);
  REQUIRE(tuples.size() == std::size(kSmallProducts));
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& t = tuples[i];
    const auto& r = kSmallProducts[i];
    CHECK(t.b == r.b);
    CHECK(t.primes == std::vector<u64>{r.p1, r.p2});
    CHECK(t.lambda == r.lambda);
    CHECK(t.sigma.to_string() == r.sigma);
  }
}

TEST_CASE("feasible 3-tuples under Q_11") {
  SearchConfig cfg;
  auto tuples = feasible_3tuples(cfg);
  CHECK(tuples.size() == 88729);
  for (std::size_t i = 0; i < tuples.size(); i += 97) {
    const auto& t = tuples[i];
    REQUIRE(t.primes.size() == 3);
    CHECK(static_cast<numth::u128>(t.primes[0]) * t.primes[1] * t.primes[2] * t.primes[2] < kQ11);
    CHECK(signature(t.primes[1], kV9) == t.sigma);
    CHECK(signature(t.primes[2], kV9) == t.sigma);
  }
}

TEST_CASE("equal-signature sequences under Q_11") {
  SearchConfig cfg;
  auto res = search_t_ge5(cfg);
  struct Want {
    std::vector<u64> primes;
    const char* sigma;
    u64 five;
  };
  const std::vector<Want> want{
      {{167, 3167, 11087, 14423, 21383, 75407}, "(0,0,1,0,0,1,1,0,1)", 1},
      {{263, 1583, 8423, 9767, 12503, 18743, 50423, 54623, 106367, 127247}, "(0,0,1,1,0,0,0,1,0)", 13},
      {{443, 4547, 5483, 8243, 19163, 26987, 42683}, "(1,0,1,1,1,0,0,1,1)", 2},
      {{463, 1087, 13687, 17383, 25447, 37447}, "(0,1,1,1,1,1,0,1,1)", 1},
      {{479, 4919, 5519, 6599, 7559, 29399, 51719}, "(0,0,0,0,0,1,1,1,0)", 4},
      {{2503, 2767, 5167, 5623, 11887, 31543}, "(0,1,1,1,0,1,0,0,0)", 1},
  };
  REQUIRE(res.sequences.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(res.sequences[i].primes == want[i].primes);
    CHECK(res.sequences[i].sigma.to_string() == want[i].sigma);
    CHECK(res.sequences[i].subsets_by_size.at(5) == want[i].five);
    CHECK(res.sequences[i].subsets_by_size.size() == 1);  // nothing of size 6 or more
  }
  CHECK(res.report.hits.empty());
}

TEST_CASE("s_p_prefix edge cases") {
  EvenMuPool pool(kV9);
  CHECK(s_p_prefix(23, kQ11, kV9, pool).empty());  // a base
  CHECK(s_p_prefix(29, kQ11, kV9, pool).empty());
  auto s = s_p_prefix(167, kQ11, kV9, pool);
  REQUIRE(s.size() == 6);
  numth::u128 four = numth::u128{167} * 3167 * 11087 * 14423;
  CHECK(four * s.back() > kQ11);
  CHECK(four * s[4] <= kQ11);
}

TEST_CASE("structured search equals the naive scan") {
  for (std::size_t m : {1u, 2u, 3u})
    for (u64 bound : {1000000ULL, 10000000ULL, 100000000ULL}) {
      auto naive = naive_spsp_scan(m, bound);
      auto res = find_psi(m, bound - 1);
      INFO("m=" << m << " bound=" << bound);
      CHECK(hit_values(res.hits) == naive);
      for (const auto& h : res.hits) {
        CHECK(is_spsp_all(h.n, BaseVector::first(m)));
        if (h.found_by != Case::Square) CHECK(spsp_by_signature(h.primes, BaseVector::first(m)));
      }
    }
}

TEST_CASE("smallest strong pseudoprimes for one to four bases") {
  CHECK(find_psi(1, 3000).psi == 2047u);
  CHECK(find_psi(2, 1500000).psi == 1373653u);
  CHECK(find_psi(3, 30000000).psi == 25326001u);
  CHECK(find_psi(4, 3300000000ULL).psi == 3215031751ULL);
  CHECK_FALSE(find_psi(4, 3215031750ULL).psi.has_value());
}

TEST_CASE("every walked candidate lies in b^-1 mod lambda") {
  SearchConfig cfg;
  cfg.bases = BaseVector::first(4);
  cfg.bound = 10000000000000ULL;
  std::mutex mu;
  u64 seen = 0, bad = 0;
  cfg.on_candidate = [&](u64 b, u64 lambda, u64 c) {
    std::lock_guard lock(mu);
    ++seen;
    if (numth::mod_mul(b % lambda, c % lambda, lambda) != 1 % lambda) ++bad;
  };
  for (Case c : {Case::T2, Case::T3, Case::T4}) {
    SearchConfig sc = cfg;
    if (c == Case::T2) sc.p1_hi = 20000;
    run_case(c, sc);
  }
  CHECK(seen > 100000);
  CHECK(bad == 0);
}

TEST_CASE("shard invariance of the t = 3 search") {
  SearchConfig cfg;
  cfg.bases = BaseVector::first(4);
  cfg.bound = 10000000000000ULL;
  auto whole = search_t3(cfg);
  SearchReport merged;
  for (auto [lo, hi] : {std::pair<u64, u64>{0, 200}, {201, 3000}, {3001, UINT64_MAX}}) {
    SearchConfig sc = cfg;
    sc.p1_lo = lo;
    sc.p1_hi = hi;
    merged.absorb(search_t3(sc));
  }
  CHECK(merged.p1_examined == whole.p1_examined);
  CHECK(merged.feasible == whole.feasible);
  CHECK(merged.candidates == whole.candidates);
  CHECK(merged.pool_tuples == whole.pool_tuples);
  CHECK(merged.hits == whole.hits);
  CHECK(!whole.hits.empty());

  SearchConfig threaded = cfg;
  threaded.threads = 3;
  auto par = search_t3(threaded);
  CHECK(par.hits == whole.hits);
  CHECK(par.candidates == whole.candidates);
}

TEST_CASE("gcd trick finds exactly the primes with 2^(b-1) == 3^(b-1) == 1") {
  const u64 hi = 1000000;
  // L_q = lcm(ord_q 2, ord_q 3); q qualifies for b iff L_q | b - 1
  std::vector<std::pair<u64, u64>> orders;
  for (u64 q : primes::sieve_range(5, hi + 1)) {
    auto f = primes::factorize(q - 1);
    orders.emplace_back(q, numth::lcm(numth::mult_order(2, q, f.factors), numth::mult_order(3, q, f.factors)));
  }
  u64 incomplete = 0;
  for (u64 b = 3; b < 10000; b += 2) {
    auto res = gcd_trick_p3(b, b, hi);
    if (!res.complete) {
      ++incomplete;
      continue;
    }
    std::vector<u64> want;
    for (auto [q, L] : orders)
      if (q > b && (b - 1) % L == 0) want.push_back(q);
    INFO("b=" << b);
    REQUIRE(res.primes == want);
  }
  CHECK(incomplete == 0);
  CHECK_THROWS_AS(gcd_trick_p3(4, 1, 10), std::domain_error);
}

TEST_CASE("gcd trick refinement keeps primes dividing every a^(b-1) - 1") {
  for (const Row& r : kSmallProducts) {
    u64 hi = kQ11 / r.b;
    auto plain = gcd_trick_p3(r.b, r.p2, hi, 100000, {}, std::span<const u64>{});
    auto refined = gcd_trick_p3(r.b, r.p2, hi, 100000, {}, kV9.bases());
    REQUIRE(refined.complete);
    for (u64 q : refined.primes)
      for (u64 a : kV9.bases()) REQUIRE(numth::mod_pow(a, r.b - 1, q) == 1);
    if (plain.complete)
      for (u64 q : refined.primes) CHECK(std::binary_search(plain.primes.begin(), plain.primes.end(), q));
  }
}

TEST_CASE("the square case finds 1093^2") {
  SearchConfig cfg;
  cfg.bases = BaseVector::first(1);
  cfg.bound = 10000000;
  auto rep = search_square(cfg);
  REQUIRE(rep.hits.size() >= 1);
  CHECK(rep.hits[0].n == 1194649);
  CHECK(rep.hits[0].primes == std::vector<u64>{1093, 1093});
  SearchConfig nine;
  nine.bound = 1000000000000ULL;
  CHECK(search_square(nine).hits.empty());
}

TEST_CASE("p1_upper") {
  SearchConfig cfg;
  CHECK(p1_upper(Case::T2, cfg) == numth::isqrt(kQ11));
  CHECK(p1_upper(Case::T5, cfg) == 5206);
  cfg.t3_product_limit = 2000000;
  CHECK(p1_upper(Case::T3, cfg) == 1414);
}
