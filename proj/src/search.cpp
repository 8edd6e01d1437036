#include "spsp/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace spsp::search {

using numth::u128;

std::string case_name(Case c) {
  switch (c) {
    case Case::Square: return "square";
    case Case::T2: return "t2";
    case Case::T3: return "t3";
    case Case::T4: return "t4";
    case Case::T5: return "t5";
  }
  return "?";
}

std::optional<Case> parse_case(const std::string& s) {
  for (Case c : {Case::Square, Case::T2, Case::T3, Case::T4, Case::T5})
    if (case_name(c) == s) return c;
  if (s == "2") return Case::T2;
  if (s == "3") return Case::T3;
  if (s == "4") return Case::T4;
  if (s == "5") return Case::T5;
  return std::nullopt;
}

void SearchReport::absorb(const SearchReport& o) {
  p1_examined += o.p1_examined;
  feasible += o.feasible;
  candidates += o.candidates;
  pool_tuples += o.pool_tuples;
  gcd_trick_uses += o.gcd_trick_uses;
  gcd_trick_fallbacks += o.gcd_trick_fallbacks;
  hits.insert(hits.end(), o.hits.begin(), o.hits.end());
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

u128 product(std::span<const u64> xs) {
  u128 acc = 1;
  for (u64 x : xs) {
    acc *= x;
    if (acc > (u128{1} << 64)) return u128{1} << 64;  // saturate
  }
  return acc;
}

bool gcd_trick_applicable(const BaseVector& v) { return v.contains(2) && v.contains(3); }

/// lambda_q, memoized for the duration of one p1.
class LambdaCache {
 public:
  LambdaCache(const BaseVector& v, const primes::FactorOptions& f) : v_(v), f_(f) {}
  u64 operator()(u64 q) {
    auto it = memo_.find(q);
    if (it != memo_.end()) return it->second;
    u64 l = prime_record(q, v_, f_).lambda;
    memo_.emplace(q, l);
    return l;
  }

 private:
  const BaseVector& v_;
  const primes::FactorOptions& f_;
  std::unordered_map<u64, u64> memo_;
};

/// Tests c as the largest prime of n = b * c. Both routes (signature
/// test and direct strong tests) must agree on every hit.
void try_last(const SearchConfig& cfg, std::span<const u64> prefix, u64 b, const ResidueClass& cls, const Signature& sig,
              u64 c, Case label, SearchReport& rep) {
  if (!cls.contains(c)) return;  // gcd trick output need not lie in the class
  ++rep.candidates;
  if (cfg.on_candidate) cfg.on_candidate(b, cls.modulus, c);
  if (c <= prefix.back() || (c & 1) == 0 || cfg.bases.contains(c)) return;
  u128 n = static_cast<u128>(b) * c;
  if (n > cfg.bound) return;
  if (!signature_matches(c, sig, cfg.bases) || !primes::is_prime(c)) return;
  std::vector<u64> factors(prefix.begin(), prefix.end());
  factors.push_back(c);
  u64 nn = static_cast<u64>(n);
  bool by_sig = spsp_by_signature(factors, cfg.bases);
  bool direct = is_spsp_all(nn, cfg.bases);
  if (by_sig != direct)
    throw std::logic_error("signature test and direct strong test disagree on " + std::to_string(nn));
  if (direct) rep.hits.push_back(Hit{std::move(factors), nn, label});
}

/// Walks cls over (lo, hi], calling fn on each term.
template <class Fn>
void walk(const ResidueClass& cls, u64 lo, u64 hi, Fn&& fn) {
  auto first = cls.first_above(lo);
  if (!first) return;
  for (u64 x = *first; x <= hi; x += cls.modulus) {
    fn(x);
    if (x > UINT64_MAX - cls.modulus) break;
  }
}

/// Runs per_p1 over the primes p1 in [max(cfg.p1_lo, 3), min(cfg.p1_hi, upper)]
/// that are not bases, in parallel batches, delivering outcomes in order.
template <class Fn>
void drive_p1(const SearchConfig& cfg, u64 upper, Fn&& per_p1, const P1Observer& obs, SearchReport& rep) {
  u64 lo = std::max<u64>(cfg.p1_lo, 3);
  u64 hi = std::min(cfg.p1_hi, upper);
  if (lo > hi) return;
  primes::PrimeStream stream(lo, hi + 1);
  const unsigned threads = std::max(1u, cfg.threads);
  const std::size_t batch = std::max<std::size_t>(64, std::size_t{threads} * 32);
  std::vector<u64> ps;
  while (true) {
    ps.clear();
    while (ps.size() < batch) {
      auto p = stream.next();
      if (!p) break;
      if (*p == 2 || cfg.bases.contains(*p)) continue;
      ps.push_back(*p);
    }
    if (ps.empty()) break;
    std::vector<P1Outcome> outs(ps.size());
    std::vector<SearchReport> reps(ps.size());
    std::vector<std::exception_ptr> errors(ps.size());
    auto run_one = [&](std::size_t i) {
      try {
        outs[i].p1 = ps[i];
        reps[i].p1_examined = 1;
        per_p1(ps[i], reps[i], outs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    };
    if (threads == 1) {
      for (std::size_t i = 0; i < ps.size(); ++i) run_one(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next.fetch_add(1)) < ps.size();) run_one(i);
        });
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      outs[i].hits = reps[i].hits;
      rep.absorb(reps[i]);
      if (obs) obs(outs[i]);
    }
    if (ps.size() < batch) break;
  }
}

u64 first_p1(const SearchConfig& cfg) {
  for (u64 p : primes::sieve_range(std::max<u64>(cfg.p1_lo, 3), std::max<u64>(cfg.p1_lo, 3) + 100000))
    if (!cfg.bases.contains(p) && p != 2) return p;
  return std::max<u64>(cfg.p1_lo, 3);
}

}  // namespace

// --- gcd trick ----------------------------------------------------------

GcdTrickResult gcd_trick_p3(u64 b, u64 lo, u64 hi, u64 trial_bound, const primes::FactorOptions& opts,
                            std::span<const u64> refine_bases) {
  if (b < 3 || (b & 1) == 0) throw std::domain_error("gcd_trick_p3: b must be odd and at least 3");
  GcdTrickResult res;
  const u64 k = b - 1;
  res.g = numth::big_gcd(numth::Natural::pow_minus_one(2, k), numth::Natural::pow_minus_one(3, k));
  numth::Natural c = res.g;
  for (u64 a : refine_bases)
    if (a != 2 && a != 3 && !c.is_one()) c = c.gcd_pow_minus_one(a, k);
  const u64 T = std::min(trial_bound, hi);
  for (std::uint32_t p32 : primes::small_primes()) {
    u64 p = p32;
    if (p > T || c.is_one()) break;
    if (c.remove_factor(p) > 0 && p > lo && p <= hi) res.primes.push_back(p);
  }
  if (c.is_one() || T >= hi) return res;
  // every prime factor of c exceeds T
  std::vector<numth::Natural> stack{c};
  while (!stack.empty()) {
    numth::Natural x = std::move(stack.back());
    stack.pop_back();
    if (x.is_one()) continue;
    if (x.fits_u64()) {
      auto f = primes::factorize(x.to_u64(), opts);
      for (const auto& [p, e] : f.factors)
        if (p > lo && p <= hi) res.primes.push_back(p);
      if (!f.complete()) res.complete = false;
    } else if (!x.probably_prime()) {
      auto f = x.find_factor(opts.rho_budget);
      if (!f) {
        res.complete = false;
        continue;
      }
      numth::Natural rest = x;
      rest.divide_exact(*f);
      stack.push_back(std::move(*f));
      stack.push_back(std::move(rest));
    }
  }
  std::sort(res.primes.begin(), res.primes.end());
  res.primes.erase(std::unique(res.primes.begin(), res.primes.end()), res.primes.end());
  return res;
}

// --- t >= 5 ---------------------------------------------------------------

std::vector<u64> s_p_prefix(u64 p, u64 Q, const BaseVector& v, EvenMuPool& pool) {
  if (p < 3 || (p & 1) == 0 || v.contains(p)) return {};
  Signature sig = signature(p, v);
  std::vector<u64> seq{p};
  auto lower_bound_of_five = [&](u64 next) {
    // smallest possible s_1..s_5 given what is known and s_{k+1} >= next
    u128 acc = product(seq);
    for (std::size_t i = seq.size(); i < 5 && acc <= Q; ++i) acc *= next;
    return acc;
  };
  u64 frontier = p;
  u64 window = 4096;
  while (true) {
    u64 next_hi = frontier > UINT64_MAX / 2 - window ? UINT64_MAX / 2 : frontier + window;
    pool.extend_to(next_hi);
    auto cands = signature_candidates(p, frontier, next_hi, v, &pool);
    for (u64 q : cands.primes) {
      if (seq.size() < 5) {
        if (lower_bound_of_five(q) > Q) return {};
        seq.push_back(q);
        if (seq.size() == 5 && product(seq) > Q) return {};
      } else {
        u128 prod4 = product(std::span<const u64>(seq).first(4));
        seq.push_back(q);
        if (prod4 * q > Q) return seq;
      }
    }
    frontier = next_hi;
    window = std::min<u64>(window * 2, u64{1} << 26);
    if (seq.size() < 5 && lower_bound_of_five(frontier + 1) > Q) return {};
  }
}

namespace {

void enumerate_subsets(const std::vector<u64>& seq, u64 Q, std::size_t idx, std::vector<u64>& chosen, u128 prod,
                       const std::function<void(const std::vector<u64>&, u64)>& visit) {
  if (chosen.size() >= 5) visit(chosen, static_cast<u64>(prod));
  for (std::size_t j = idx; j < seq.size(); ++j) {
    u128 next = prod * seq[j];
    if (next > Q) break;  // ascending
    chosen.push_back(seq[j]);
    enumerate_subsets(seq, Q, j + 1, chosen, next, visit);
    chosen.pop_back();
  }
}

}  // namespace

SequenceSearch search_t_ge5(const SearchConfig& cfg, const P1Observer& obs) {
  auto t0 = Clock::now();
  SequenceSearch out;
  out.report.label = Case::T5;
  const u64 Q = cfg.bound;
  EvenMuPool pool(cfg.bases);
  SearchConfig seq_cfg = cfg;
  seq_cfg.threads = 1;  // the pool grows lazily
  auto per_p1 = [&](u64 p, SearchReport& rep, P1Outcome& o) {
    auto prefix = s_p_prefix(p, Q, cfg.bases, pool);
    if (prefix.empty()) return;
    Sequence s;
    s.primes = prefix;
    s.sigma = signature(p, cfg.bases);
    std::vector<u64> chosen{p};
    enumerate_subsets(prefix, Q, 1, chosen, p, [&](const std::vector<u64>& sub, u64 n) {
      ++s.subsets_by_size[sub.size()];
      ++rep.candidates;
      bool by_sig = spsp_by_signature(sub, cfg.bases);
      bool direct = is_spsp_all(n, cfg.bases);
      if (by_sig != direct) throw std::logic_error("signature test and direct strong test disagree on " + std::to_string(n));
      if (direct) rep.hits.push_back(Hit{sub, n, Case::T5});
    });
    ++rep.feasible;
    o.sequences.push_back(s);
    out.sequences.push_back(std::move(s));
  };
  drive_p1(seq_cfg, numth::iroot(Q, 5), per_p1, obs, out.report);
  out.report.seconds = seconds_since(t0);
  return out;
}

// --- t = 4 ----------------------------------------------------------------

namespace {

struct T4Context {
  const SearchConfig& cfg;
  const EvenMuPool& pool;
  bool walk_p4;
};

void t4_for_p1(const T4Context& ctx, u64 p1, SearchReport& rep, P1Outcome& out) {
  const auto& cfg = ctx.cfg;
  const u64 Q = cfg.bound;
  const auto& v = cfg.bases;
  u64 H = numth::isqrt((Q - 1) / (static_cast<u128>(p1) * (p1 + 1) > Q ? Q : p1 * (p1 + 1)));
  auto cands = signature_candidates(p1, p1, H, v, &ctx.pool, cfg.class_bases);
  const auto& L = cands.primes;
  Signature sig = signature(p1, v);
  LambdaCache lambda(v, cfg.factor);
  u64 l1 = lambda(p1);
  auto left = leftover_class(p1, v);
  for (std::size_t i = 0; i < L.size(); ++i) {
    u64 p2 = L[i];
    if (static_cast<u128>(p1) * p2 * p2 * p2 >= Q) break;
    for (std::size_t j = i + 1; j < L.size(); ++j) {
      u64 p3 = L[j];
      if (static_cast<u128>(p1) * p2 * p3 * p3 >= Q) break;
      FeasibleTuple t;
      t.primes = {p1, p2, p3};
      t.b = p1 * p2 * p3;
      t.lambda = numth::lcm(numth::lcm(l1, lambda(p2)), lambda(p3));
      t.sigma = sig;
      ++rep.feasible;
      if (left && left->contains(p3)) ++rep.pool_tuples;
      if (ctx.walk_p4 && numth::gcd(t.b, t.lambda) == 1) {
        u64 hi4 = Q / t.b;
        const ResidueClass cls(t.lambda, *numth::mod_inverse(t.b % t.lambda, t.lambda));
        walk(cls, p3, hi4, [&](u64 c) { try_last(cfg, t.primes, t.b, cls, sig, c, Case::T4, rep); });
      }
      out.tuples.push_back(std::move(t));
    }
  }
}

u64 t4_pool_bound(const SearchConfig& cfg) {
  u64 p1 = first_p1(cfg);
  u128 d = static_cast<u128>(p1) * (p1 + 1);
  return d > cfg.bound ? 0 : numth::isqrt((cfg.bound - 1) / static_cast<u64>(d));
}

}  // namespace

std::vector<FeasibleTuple> feasible_3tuples(const SearchConfig& cfg) {
  EvenMuPool pool(cfg.bases);
  pool.extend_to(t4_pool_bound(cfg));
  T4Context ctx{cfg, pool, false};
  std::vector<FeasibleTuple> out;
  SearchReport rep;
  drive_p1(
      cfg, numth::iroot(cfg.bound, 4), [&](u64 p1, SearchReport& r, P1Outcome& o) { t4_for_p1(ctx, p1, r, o); },
      [&](const P1Outcome& o) { out.insert(out.end(), o.tuples.begin(), o.tuples.end()); }, rep);
  return out;
}

SearchReport search_t4(const SearchConfig& cfg, const P1Observer& obs) {
  auto t0 = Clock::now();
  SearchReport rep;
  rep.label = Case::T4;
  EvenMuPool pool(cfg.bases);
  pool.extend_to(t4_pool_bound(cfg));
  T4Context ctx{cfg, pool, true};
  drive_p1(
      cfg, numth::iroot(cfg.bound, 4), [&](u64 p1, SearchReport& r, P1Outcome& o) { t4_for_p1(ctx, p1, r, o); }, obs,
      rep);
  rep.seconds = seconds_since(t0);
  return rep;
}

// --- t = 3 ----------------------------------------------------------------

namespace {

struct T3Context {
  const SearchConfig& cfg;
  const EvenMuPool& pool;
  bool find_p3;
  std::optional<u64> product_limit;
};

void t3_for_p1(const T3Context& ctx, u64 p1, SearchReport& rep, P1Outcome& out) {
  const auto& cfg = ctx.cfg;
  const u64 Q = cfg.bound;
  const auto& v = cfg.bases;
  u64 hi2 = numth::isqrt((Q - 1) / p1);
  if (ctx.product_limit) hi2 = std::min(hi2, (*ctx.product_limit - 1) / p1);
  auto cands = signature_candidates(p1, p1, hi2, v, &ctx.pool, cfg.class_bases);
  Signature sig = signature(p1, v);
  LambdaCache lambda(v, cfg.factor);
  u64 l1 = lambda(p1);
  auto left = leftover_class(p1, v);
  const bool trick_ok = cfg.use_gcd_trick && gcd_trick_applicable(v);
  for (u64 p2 : cands.primes) {
    FeasibleTuple t;
    t.primes = {p1, p2};
    t.b = p1 * p2;
    t.lambda = numth::lcm(l1, lambda(p2));
    t.sigma = sig;
    ++rep.feasible;
    if (left && left->contains(p2)) ++rep.pool_tuples;
    if (ctx.find_p3 && numth::gcd(t.b, t.lambda) == 1) {
      u64 hi3 = Q / t.b;
      const ResidueClass cls(t.lambda, *numth::mod_inverse(t.b % t.lambda, t.lambda));
      if (hi3 > p2) {
        u64 walk_len = (hi3 - p2) / t.lambda;
        bool walked = false;
        if (trick_ok && t.b < cfg.small_product_threshold && walk_len >= cfg.gcd_trick_min_walk) {
          ++rep.gcd_trick_uses;
          auto res = gcd_trick_p3(t.b, p2, hi3, cfg.gcd_trial_bound, cfg.factor, v.bases());
          if (res.complete) {
            for (u64 c : res.primes) try_last(cfg, t.primes, t.b, cls, sig, c, Case::T3, rep);
            walked = true;
          } else {
            ++rep.gcd_trick_fallbacks;
          }
        }
        if (!walked) {
          walk(cls, p2, hi3, [&](u64 c) { try_last(cfg, t.primes, t.b, cls, sig, c, Case::T3, rep); });
        }
      }
    }
    out.tuples.push_back(std::move(t));
  }
}

u64 t3_pool_bound(const SearchConfig& cfg, std::optional<u64> product_limit) {
  u64 p1 = first_p1(cfg);
  u64 hi = numth::isqrt((cfg.bound - 1) / p1);
  if (product_limit) hi = std::min(hi, (*product_limit - 1) / p1);
  return hi;
}

}  // namespace

std::vector<FeasibleTuple> feasible_2tuples(const SearchConfig& cfg, std::optional<u64> product_limit) {
  EvenMuPool pool(cfg.bases);
  pool.extend_to(t3_pool_bound(cfg, product_limit));
  T3Context ctx{cfg, pool, false, product_limit};
  u64 upper = numth::iroot(cfg.bound, 3);
  if (product_limit) upper = std::min(upper, numth::isqrt(*product_limit));
  std::vector<FeasibleTuple> out;
  SearchReport rep;
  drive_p1(
      cfg, upper, [&](u64 p1, SearchReport& r, P1Outcome& o) { t3_for_p1(ctx, p1, r, o); },
      [&](const P1Outcome& o) { out.insert(out.end(), o.tuples.begin(), o.tuples.end()); }, rep);
  return out;
}

SearchReport search_t3(const SearchConfig& cfg, const P1Observer& obs) {
  auto t0 = Clock::now();
  SearchReport rep;
  rep.label = Case::T3;
  EvenMuPool pool(cfg.bases);
  pool.extend_to(t3_pool_bound(cfg, cfg.t3_product_limit));
  T3Context ctx{cfg, pool, true, cfg.t3_product_limit};
  u64 upper = numth::iroot(cfg.bound, 3);
  if (cfg.t3_product_limit) upper = std::min(upper, numth::isqrt(*cfg.t3_product_limit));
  drive_p1(
      cfg, upper, [&](u64 p1, SearchReport& r, P1Outcome& o) { t3_for_p1(ctx, p1, r, o); }, obs,
      rep);
  rep.seconds = seconds_since(t0);
  return rep;
}

// --- t = 2 ----------------------------------------------------------------

namespace {

void t2_for_p1(const SearchConfig& cfg, u64 p1, SearchReport& rep) {
  const u64 Q = cfg.bound;
  const auto& v = cfg.bases;
  u64 hi2 = Q / p1;
  if (hi2 <= p1) return;
  Signature sig = signature(p1, v);
  u64 l1 = prime_record(p1, v, cfg.factor).lambda;
  const u64 prefix[] = {p1};
  const ResidueClass one_mod_lambda(l1, 1);  // p1 == 1 (mod lambda_p1), so p1^-1 == 1
  auto test = [&](u64 c) { try_last(cfg, prefix, p1, one_mod_lambda, sig, c, Case::T2, rep); };

  if (p1 < cfg.t2_gcd_limit && cfg.use_gcd_trick && gcd_trick_applicable(v) &&
      (hi2 - p1) / l1 >= cfg.gcd_trick_min_walk) {
    ++rep.gcd_trick_uses;
    auto res = gcd_trick_p3(p1, p1, hi2, cfg.gcd_trial_bound, cfg.factor, v.bases());
    if (res.complete) {
      for (u64 c : res.primes) test(c);
      return;
    }
    ++rep.gcd_trick_fallbacks;
  }
  if (p1 < cfg.t2_crt_limit) {
    try {
      std::vector<ResidueClass> combined;
      for (const auto& br : complete_branches(p1, v, cfg.t2_class_bases))
        for (const auto& cls : br.classes)
          if (auto c = numth::crt_combine(cls, one_mod_lambda)) combined.push_back(*c);
      std::sort(combined.begin(), combined.end());
      for (const auto& c : combined) walk(c, p1, hi2, test);
      return;
    } catch (const std::range_error&) {
      // combined modulus beyond 2^63: the plain progression below is exact
    }
  }
  walk(one_mod_lambda, p1, hi2, test);
}

}  // namespace

SearchReport search_t2(const SearchConfig& cfg, const P1Observer& obs) {
  auto t0 = Clock::now();
  SearchReport rep;
  rep.label = Case::T2;
  drive_p1(
      cfg, numth::isqrt(cfg.bound), [&](u64 p1, SearchReport& r, P1Outcome&) { t2_for_p1(cfg, p1, r); }, obs, rep);
  rep.seconds = seconds_since(t0);
  return rep;
}

// --- non-squarefree -------------------------------------------------------

SearchReport search_square(const SearchConfig& cfg, const P1Observer& obs) {
  auto t0 = Clock::now();
  SearchReport rep;
  rep.label = Case::Square;
  if (!cfg.square_scan) return rep;
  const u64 Q = cfg.bound;
  auto per_p = [&](u64 p, SearchReport& r, P1Outcome&) {
    if (!wieferich_all(p, cfg.bases)) return;
    ++r.feasible;
    u64 sq = p * p;
    for (u64 n = sq; n <= Q; n += 2 * sq) {
      ++r.candidates;
      if (!is_spsp_all(n, cfg.bases)) continue;
      auto f = primes::factorize(n, cfg.factor);
      Hit h;
      h.n = n;
      h.found_by = Case::Square;
      for (const auto& [q, e] : f.factors)
        for (unsigned i = 0; i < e; ++i) h.primes.push_back(q);
      r.hits.push_back(std::move(h));
      if (n > Q - 2 * sq) break;
    }
  };
  drive_p1(cfg, numth::isqrt(Q), per_p, obs, rep);
  rep.seconds = seconds_since(t0);
  return rep;
}

SearchReport run_case(Case c, const SearchConfig& cfg, const P1Observer& obs) {
  switch (c) {
    case Case::Square: return search_square(cfg, obs);
    case Case::T2: return search_t2(cfg, obs);
    case Case::T3: return search_t3(cfg, obs);
    case Case::T4: return search_t4(cfg, obs);
    case Case::T5: return search_t_ge5(cfg, obs).report;
  }
  throw std::logic_error("unknown case");
}

u64 p1_upper(Case c, const SearchConfig& cfg) {
  switch (c) {
    case Case::Square:
    case Case::T2: return numth::isqrt(cfg.bound);
    case Case::T3: {
      u64 u = numth::iroot(cfg.bound, 3);
      return cfg.t3_product_limit ? std::min(u, numth::isqrt(*cfg.t3_product_limit)) : u;
    }
    case Case::T4: return numth::iroot(cfg.bound, 4);
    case Case::T5: return numth::iroot(cfg.bound, 5);
  }
  throw std::logic_error("unknown case");
}

// --- drivers ----------------------------------------------------------------

PsiResult find_psi(std::size_t m, u64 Q, SearchConfig cfg) {
  if (Q > (u64{1} << 63)) throw std::range_error("find_psi: bound exceeds 2^63");
  cfg.bases = BaseVector::first(m);
  cfg.bound = Q;
  PsiResult out;
  for (Case c : {Case::Square, Case::T2, Case::T3, Case::T4, Case::T5}) {
    auto rep = run_case(c, cfg);
    out.hits.insert(out.hits.end(), rep.hits.begin(), rep.hits.end());
    out.reports.push_back(std::move(rep));
  }
  std::sort(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) { return a.n < b.n; });
  out.hits.erase(std::unique(out.hits.begin(), out.hits.end(), [](const Hit& a, const Hit& b) { return a.n == b.n; }),
                 out.hits.end());
  if (!out.hits.empty()) out.psi = out.hits.front().n;
  return out;
}

std::vector<u64> naive_spsp_scan(std::size_t m, u64 bound, unsigned threads) {
  BaseVector v = BaseVector::first(m);
  threads = std::max(1u, threads);
  const u64 start = 9;
  if (bound <= start) return {};
  auto scan = [&](u64 lo, u64 hi, std::vector<u64>& out) {
    if ((lo & 1) == 0) ++lo;
    for (u64 n = lo; n < hi; n += 2)
      if (is_spsp_all(n, v)) out.push_back(n);
  };
  std::vector<std::vector<u64>> parts(threads);
  if (threads == 1) {
    scan(start, bound, parts[0]);
  } else {
    u64 span = (bound - start) / threads + 1;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      u64 lo = start + t * span;
      u64 hi = std::min(bound, lo + span);
      if (lo < hi) pool.emplace_back([&, lo, hi, t] { scan(lo, hi, parts[t]); });
    }
  }
  std::vector<u64> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spsp::search
