// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Criterion 8 (full-scale counts, hours of CPU) runs only with SPSP_EXTENDED=1.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "spsp/numth.hpp"
#include "spsp/primes.hpp"
#include "spsp/pseudoprime.hpp"
#include "spsp/search.hpp"

using namespace spsp;
using namespace spsp::search;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.note << " [exception: " << e.what() << "]";
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (s > limit_s) {
    o.ok = false;
    o.note << " [over time limit " << limit_s << "s]";
  }
  if (!o.ok) ++failures;
  std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << std::fixed
            << std::setprecision(2) << s << "s)" << o.note.str() << std::endl;
}

std::vector<u64> odd_primes_below(u64 n) {
  std::vector<u64> out;
  for (auto p : primes::primes_up_to(static_cast<std::uint32_t>(n - 1)))
    if (p > 2) out.push_back(p);
  return out;
}

bool direct_all(u64 n, const BaseVector& v) {
  for (u64 a : v.bases())
    if (!is_spsp(n, a)) return false;
  return true;
}

}  // namespace

int main() {
  const BaseVector v9 = BaseVector::first(9);

  criterion(1, "Q_11 is spsp to the first 11 primes; factor signatures coincide", 1.0, [](Outcome& o) {
    BaseVector v11 = BaseVector::first(11);
    for (u64 a : v11.bases()) o.expect(is_spsp(kQ11, a), "base " + std::to_string(a));
    o.expect(spsp_by_signature(std::vector<u64>{149491, 747451, 34233211}, v11), "signature test");
  });

  criterion(2, "psi_1..psi_4", 900.0, [](Outcome& o) {
    const std::vector<std::tuple<std::size_t, u64, u64>> cases{
        {1, 3000, 2047}, {2, 1500000, 1373653}, {3, 30000000, 25326001}, {4, 3300000000ULL, 3215031751ULL}};
    for (auto [m, Q, want] : cases) {
      auto r = find_psi(m, Q);
      o.expect(r.psi == want, "psi_" + std::to_string(m));
      o.note << " psi_" << m << "=" << (r.psi ? std::to_string(*r.psi) : "none");
    }
  });

  criterion(3, "six t>=5 sequences, 5-subset counts 1,13,2,1,4,1, no spsp", 120.0, [&](Outcome& o) {
    SearchConfig cfg;
    auto res = search_t_ge5(cfg);
    const std::vector<u64> leads{167, 263, 443, 463, 479, 2503};
    const std::vector<std::string> sigmas{"(0,0,1,0,0,1,1,0,1)", "(0,0,1,1,0,0,0,1,0)", "(1,0,1,1,1,0,0,1,1)",
                                          "(0,1,1,1,1,1,0,1,1)", "(0,0,0,0,0,1,1,1,0)", "(0,1,1,1,0,1,0,0,0)"};
    const std::vector<u64> fives{1, 13, 2, 1, 4, 1};
    o.expect(res.sequences.size() == 6, "six sequences");
    for (std::size_t i = 0; i < std::min<std::size_t>(6, res.sequences.size()); ++i) {
      const auto& s = res.sequences[i];
      o.expect(s.primes.front() == leads[i], "leading prime " + std::to_string(leads[i]));
      o.expect(s.sigma.to_string() == sigmas[i], "signature of " + std::to_string(leads[i]));
      auto it = s.subsets_by_size.find(5);
      o.expect(it != s.subsets_by_size.end() && it->second == fives[i], "5-subsets of " + std::to_string(leads[i]));
      o.expect(s.subsets_by_size.size() == 1, "no subset of size 6+ under the bound");
    }
    o.expect(res.report.hits.empty(), "no spsp");
  });

  criterion(4, "t=3 tuples with b < 2e6 match the 37-row table", 600.0, [&](Outcome& o) {
    struct Row {
      u64 b, p1, p2, lambda;
      const char* sigma;
    };
    const std::vector<Row> table{
        {685441, 31, 22111, 22110, "(0,1,0,0,1,1,1,0,1)"},    {919801, 31, 29671, 29670, "(0,1,0,0,1,1,1,0,1)"},
        {1267249, 31, 40879, 204390, "(0,1,0,0,1,1,1,0,1)"},  {399169, 43, 9283, 9282, "(1,1,1,1,0,0,0,1,0)"},
        {703609, 43, 16363, 114534, "(1,1,1,1,0,0,0,1,0)"},   {1379569, 43, 32083, 224574, "(1,1,1,1,0,0,0,1,0)"},
        {1487929, 43, 34603, 242214, "(1,1,1,1,0,0,0,1,0)"},  {1772761, 43, 41227, 288582, "(1,1,1,1,0,0,0,1,0)"},
        {741049, 47, 15767, 362618, "(0,0,1,0,1,1,0,1,1)"},   {1879201, 47, 39983, 919586, "(0,0,1,0,1,1,0,1,1)"},
        {117049, 67, 1747, 19206, "(1,1,1,1,1,1,0,0,0)"},     {1578721, 67, 23563, 23562, "(1,1,1,1,1,1,0,0,0)"},
        {1354609, 71, 19079, 667730, "(0,0,0,1,1,1,1,0,1)"},  {722929, 79, 9151, 118950, "(0,1,0,1,0,0,1,0,0)"},
        {1272769, 79, 16111, 209430, "(0,1,0,1,0,0,1,0,0)"},  {457081, 83, 5507, 225746, "(1,0,1,0,0,1,0,1,0)"},
        {1391329, 83, 16763, 687242, "(1,0,1,0,0,1,0,1,0)"},  {1739929, 83, 20963, 859442, "(1,0,1,0,0,1,0,1,0)"},
        {1652401, 107, 15443, 818426, "(1,0,1,1,0,0,1,0,0)"}, {1730689, 139, 12451, 286350, "(1,1,0,0,0,0,1,1,1)"},
        {1790881, 163, 10987, 296622, "(1,1,1,1,1,1,1,1,1)"}, {528889, 167, 3167, 262778, "(0,0,1,0,0,1,1,0,1)"},
        {1851529, 167, 11087, 920138, "(0,0,1,0,0,1,1,0,1)"}, {1892881, 211, 8971, 62790, "(1,1,0,1,0,0,1,0,1)"},
        {1552849, 229, 6781, 128820, "(2,0,1,2,1,2,0,0,2)"},  {416329, 263, 1583, 207242, "(0,0,1,1,0,0,0,1,0)"},
        {223609, 311, 719, 111290, "(0,0,0,0,1,0,1,1,1)"},    {1912849, 331, 5779, 317790, "(1,1,0,1,1,1,0,0,1)"},
        {825841, 379, 2179, 45738, "(1,1,0,1,1,1,1,0,0)"},    {540409, 439, 1231, 89790, "(0,1,0,0,0,0,1,0,1)"},
        {503281, 463, 1087, 83622, "(0,1,1,1,1,1,0,1,1)"},    {929041, 503, 1847, 463346, "(0,0,1,0,0,0,1,1,0)"},
        {1627921, 571, 2851, 2850, "(1,1,0,1,0,0,1,1,0)"},    {1280449, 787, 1627, 213006, "(1,1,1,0,0,1,1,0,0)"},
        {1616521, 919, 1759, 268974, "(0,1,0,1,0,0,0,1,0)"},  {1538161, 1063, 1447, 255942, "(0,1,1,0,0,0,0,0,0)"},
        {1772521, 1103, 1607, 884906, "(0,0,1,1,1,1,0,1,0)"},
    };
    SearchConfig cfg;
    cfg.t3_product_limit = 2000000;
    std::vector<FeasibleTuple> got;
    auto rep = search_t3(cfg, [&](const P1Outcome& po) { got.insert(got.end(), po.tuples.begin(), po.tuples.end()); });
    std::set<std::tuple<u64, u64, u64, u64, std::string>> want_set, got_set;
    for (const auto& r : table) want_set.emplace(r.b, r.p1, r.p2, r.lambda, r.sigma);
    for (const auto& t : got) got_set.emplace(t.b, t.primes[0], t.primes[1], t.lambda, t.sigma.to_string());
    u64 missing = 0, extra = 0;
    for (const auto& w : want_set) missing += !got_set.count(w);
    for (const auto& g : got_set) extra += !want_set.count(g);
    o.expect(missing == 0, std::to_string(missing) + " table rows missing");
    o.note << " rows=" << got_set.size() << " extra(other branches)=" << extra << " spsp=" << rep.hits.size()
           << " gcd-trick=" << rep.gcd_trick_uses << " fallbacks=" << rep.gcd_trick_fallbacks;
    o.expect(rep.hits.empty(), "no spsp with b < 2e6");
  });

  criterion(5, "survey classification spot checks", 60.0, [&](Outcome& o) {
    struct Row {
      u64 p, mu;
      std::string label;
    };
    for (const Row& r : std::vector<Row>{{18191, 2, "mu2_3mod4"},
                                         {87481, 2, "mu2_1mod4"},
                                         {4775569, 3, "mu3"},
                                         {25433521, 4, "mu4"},
                                         {650086271, 5, "mu5"},
                                         {1785200041, 6, "mu6"},
                                         {945552637, 7, "mu7"},
                                         {120543721, 4, "mu4+binary"}}) {
      PrimeRecord rec = prime_record(r.p, v9);
      o.expect(rec.mu == r.mu && survey_label(rec) == r.label, std::to_string(r.p));
    }
    o.expect(87481 % 8 == 1 && 120543721 % 16 == 9, "residues");
  });

  criterion(6, "structured search equals naive scan; signature criteria hold", 600.0, [&](Outcome& o) {
    for (std::size_t m : {1u, 2u, 3u})
      for (u64 B : {1000000ULL, 10000000ULL}) {
        auto naive = naive_spsp_scan(m, B);
        auto res = find_psi(m, B - 1);
        std::vector<u64> got;
        for (const auto& h : res.hits) got.push_back(h.n);
        o.expect(got == naive, "m=" + std::to_string(m) + " B=" + std::to_string(B));
      }
    // pairs: exhaustive below 1e4; random products: 1e4 instances
    auto ps = odd_primes_below(10000);
    u64 pairs = 0;
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j, ++pairs)
        if (spsp_by_signature(std::vector<u64>{ps[i], ps[j]}, v9) != direct_all(ps[i] * ps[j], v9)) {
          o.expect(false, "pair " + std::to_string(ps[i]) + "*" + std::to_string(ps[j]));
          return;
        }
    std::mt19937_64 rng(1);
    for (std::size_t m : {1u, 2u}) {
      BaseVector v = BaseVector::first(m);
      for (int k = 0; k < 10000; ++k) {
        u64 p = ps[rng() % ps.size()], q = ps[rng() % ps.size()];
        if (p == q) continue;
        std::vector<u64> f{std::min(p, q), std::max(p, q)};
        if (spsp_by_signature(f, v) != direct_all(p * q, v)) o.expect(false, "random pair");
      }
    }
    std::map<std::pair<unsigned, Signature>, u64> seen;
    for (u64 p : ps) {
      if (v9.contains(p)) continue;
      auto [it, fresh] = seen.emplace(std::make_pair(numth::val2(p - 1), signature(p, v9)), p);
      if (!fresh)
        for (u64 a : v9.bases())
          if (numth::jacobi_u(a, p) != numth::jacobi_u(a, it->second)) o.expect(false, "symbols " + std::to_string(p));
    }
    o.note << " pairs=" << pairs;
  });

  criterion(7, "30 classes mod 9240 and 30 classes mod 18480", 1.0, [&](Outcome& o) {
    auto a = residue_branches(31, v9, 5);
    o.expect(a.size() == 1 && a[0].classes.size() == 30, "3 mod 4 count");
    for (const auto& c : a[0].classes) o.expect(c.modulus == 9240, "modulus 9240");
    u64 p1 = 0;
    for (u64 p : primes::sieve_range(29, 100000))
      if (p % 8 == 5 && signature(p, v9).max_entry() == 2) {
        p1 = p;
        break;
      }
    auto b = residue_branches(p1, v9, 5);
    o.expect(b.size() == 2 && b[1].classes.size() == 30, "9 mod 16 count");
    for (const auto& c : b[1].classes) o.expect(c.modulus == 18480 && c.residue % 16 == 9, "modulus 18480");
  });

  const char* ext = std::getenv("SPSP_EXTENDED");
  if (!ext || std::string(ext) != "1") {
    std::cout << "SKIP criterion 8: full-scale counts (set SPSP_EXTENDED=1)" << std::endl;
  } else {
    criterion(8, "full-scale counts", 1e9, [&](Outcome& o) {
      SearchConfig cfg;
      cfg.threads = std::max(1u, std::thread::hardware_concurrency());
      o.expect(feasible_3tuples(cfg).size() == 88729, "3-tuples");
      std::map<std::string, u64> by;
      for (const auto& t : feasible_2tuples(cfg)) {
        u64 r = t.primes[0] % 8;
        by[r % 4 == 3 ? "3mod4" : r == 5 ? "5mod8" : "1mod8"]++;
      }
      o.note << " 2-tuples 3mod4=" << by["3mod4"] << " 5mod8=" << by["5mod8"] << " 1mod8=" << by["1mod8"];
      o.expect(by["3mod4"] == 10524046, "3 mod 4 2-tuples");
      o.expect(by["5mod8"] == 522239, "5 mod 8 2-tuples");
      o.expect(by["1mod8"] == 30728, "1 mod 8 2-tuples");
      SurveyOptions so;
      so.threads = cfg.threads;
      auto totals = survey_mu(numth::isqrt(kQ11), v9, [](const PrimeRecord&) {}, so);
      const std::map<std::string, u64> want{{"mu2_3mod4", 93878}, {"mu2_1mod4", 91541}, {"mu3", 2226}, {"mu4", 111},
                                            {"mu5", 6},           {"mu6", 1},           {"mu7", 1},    {"binary", 45}};
      for (const auto& [k, c] : want) {
        o.expect(totals.by_class[k] == c, "survey " + k);
        o.note << " " << k << "=" << totals.by_class[k];
      }
      auto psi9 = find_psi(9, kQ11, cfg);
      o.expect(psi9.hits.size() == 1 && psi9.psi == kQ11, "exactly one spsp(v) up to Q_11");
    });
  }
  return failures ? 1 : 0;
}
