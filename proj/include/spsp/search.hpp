// Exhaustive search for strong pseudoprimes to a base vector below a bound.
//
// A squarefree spsp n = p_1 ... p_t (p_1 < ... < p_t) has all factor
// signatures equal and lambda_{p_i} | n - 1. The search is split by t:
//
//   t >= 5  sequences S_p of equal-signature primes, p <= Q^(1/5)
//   t = 4   feasible 3-tuples, p_4 walked over b^-1 (mod lambda)
//   t = 3   feasible 2-tuples, p_3 by progression walk or the gcd trick
//   t = 2   p_2 by gcd trick, CRT-filtered progression, or plain progression
//
// plus a direct scan for the non-squarefree case, which needs a prime p
// with a^(p-1) == 1 (mod p^2) for every base.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spsp/natural.hpp"
#include "spsp/numth.hpp"
#include "spsp/primes.hpp"
#include "spsp/pseudoprime.hpp"

namespace spsp::search {

using numth::ResidueClass;

// --- residue classes ----------------------------------------------------

struct SymbolRequirement {
  u64 base;
  int symbol;  // +1 or -1
};

/// Classes of q with q == two_residue (mod 2^two_exp), q odd, and
/// jacobi(base, q) == symbol for every requirement. The modulus is
/// 2^max(two_exp, 3) times the odd required bases (2^max(two_exp, 1) when
/// there are no requirements).
std::vector<ResidueClass> symbol_classes(unsigned two_exp, u64 two_residue, std::span<const SymbolRequirement> reqs);

struct ResidueBranch {
  std::string label;  // "match", "plus", "plus_all", "low2"
  std::vector<ResidueClass> classes;
};

/// Classes containing every prime q > p1 with signature(q) == signature(p1),
/// except those left to the even-mu pool (see leftover_class). Constraints
/// use the first num_bases bases of v.
///
///   p1 == 3 (mod 4):     q == 3 (mod 4), symbols equal to p1's
///   f == e >= 2:         q == 1 + 2^e (mod 2^(e+1)), symbols equal
///                        q == 1 + 2^(e+1) (mod 2^(e+2)), all symbols +1
///   f < e, e >= 2:       q == 1 (mod 2^f) only
///
/// with e = Val(p1 - 1), f = Val(lambda_p1) = max signature entry.
std::vector<ResidueBranch> residue_branches(u64 p1, const BaseVector& v, std::size_t num_bases);
std::vector<ResidueClass> residue_classes(u64 p1, const BaseVector& v, std::size_t num_bases);

/// 2-adic class of the signature matches residue_classes does not cover:
/// q == 1 (mod 4) when p1 == 3 (mod 4), q == 1 (mod 2^(e+2)) when f == e.
/// Every such match has Val(q - 1) > f, so mu_q is even.
std::optional<ResidueClass> leftover_class(u64 p1, const BaseVector& v);

/// Branches with the leftover folded in as "all symbols +1" classes; covers
/// every matching q without a pool.
std::vector<ResidueBranch> complete_branches(u64 p1, const BaseVector& v, std::size_t num_bases);

// --- even-mu pool -------------------------------------------------------

/// Primes q (not bases) at which every base is a quadratic residue, i.e.
/// Val(lambda_q) < Val(q - 1), i.e. mu_q even. Indexed by signature.
class EvenMuPool {
 public:
  explicit EvenMuPool(BaseVector v);

  /// Adds pool primes up to and including bound.
  void extend_to(u64 bound);
  u64 bound() const { return bound_; }
  std::size_t size() const { return count_; }

  /// All pool primes with this signature, ascending.
  const std::vector<u64>& with_signature(const Signature& sig) const;

 private:
  BaseVector v_;
  u64 bound_ = 0;
  std::size_t count_ = 0;
  std::map<Signature, std::vector<u64>> by_sig_;
};

struct CandidateSet {
  std::vector<u64> primes;  // ascending, deduplicated
  u64 walked = 0;           // class members examined
  u64 from_pool = 0;
};

/// Primes q in (lo, hi] with signature(q) == signature(p1): walks the
/// residue classes and draws the leftover from the pool. The pool must
/// cover hi when p1 has a leftover class.
CandidateSet signature_candidates(u64 p1, u64 lo, u64 hi, const BaseVector& v, const EvenMuPool* pool,
                                  std::size_t num_bases = 5);

// --- configuration and reports -----------------------------------------

enum class Case { Square, T2, T3, T4, T5 };
std::string case_name(Case c);  // "square", "t2", "t3", "t4", "t5"
std::optional<Case> parse_case(const std::string& s);

struct SearchConfig {
  u64 bound = kQ11;  // search n <= bound
  BaseVector bases = BaseVector::first(9);
  u64 p1_lo = 0;  // shard: smallest factor in [p1_lo, p1_hi]
  u64 p1_hi = UINT64_MAX;
  u64 small_product_threshold = 2'000'000;
  /// The gcd trick replaces a progression walk only when the walk would
  /// visit at least this many terms.
  u64 gcd_trick_min_walk = u64{1} << 20;
  bool use_gcd_trick = true;
  u64 t2_gcd_limit = 1'000'000;    // p1 below: gcd trick
  u64 t2_crt_limit = 100'000'000;  // p1 below: CRT-filtered walk; above: plain walk
  std::size_t class_bases = 5;
  std::size_t t2_class_bases = 6;
  u64 gcd_trial_bound = 100'000;
  primes::FactorOptions factor;
  unsigned threads = 1;
  bool square_scan = true;
  std::optional<u64> t3_product_limit;  // t = 3: only tuples with p1 p2 below this
  /// Called with (b, lambda, c) for every last-factor candidate c tested
  /// against the prefix product b. Must be thread-safe when threads > 1.
  std::function<void(u64, u64, u64)> on_candidate;
};

struct FeasibleTuple {
  std::vector<u64> primes;
  u64 b = 1;
  u64 lambda = 1;
  Signature sigma;
};

struct Hit {
  std::vector<u64> primes;  // prime factors with multiplicity, ascending
  u64 n = 0;
  Case found_by = Case::T2;
  friend bool operator==(const Hit& a, const Hit& b) { return a.n == b.n && a.primes == b.primes; }
};

struct SearchReport {
  Case label = Case::T2;
  u64 p1_examined = 0;
  u64 feasible = 0;    // feasible tuples (sequences for t >= 5)
  u64 candidates = 0;  // last-factor candidates tested
  u64 pool_tuples = 0; // feasible tuples whose last prime came from the pool
  u64 gcd_trick_uses = 0;
  u64 gcd_trick_fallbacks = 0;
  std::vector<Hit> hits;
  double seconds = 0;

  void absorb(const SearchReport& other);  // sums counts, appends hits
};

struct Sequence {
  std::vector<u64> primes;  // s_p,1 .. s_p,l
  Signature sigma;
  std::map<std::size_t, u64> subsets_by_size;  // subsets containing p with product <= bound
};

/// What one p1 produced; passed to the observer in ascending p1 order.
struct P1Outcome {
  u64 p1 = 0;
  std::vector<FeasibleTuple> tuples;
  std::vector<Sequence> sequences;
  std::vector<Hit> hits;
};
using P1Observer = std::function<void(const P1Outcome&)>;

// --- case searches ------------------------------------------------------

/// The emitted prefix of S_p = {q >= p prime : signature(q) == signature(p)}:
/// s_1..s_l with l > 5 the first index where s_1 s_2 s_3 s_4 s_l > Q, or empty
/// when s_1..s_5 already exceeds Q (or p is a base).
std::vector<u64> s_p_prefix(u64 p, u64 Q, const BaseVector& v, EvenMuPool& pool);

struct SequenceSearch {
  std::vector<Sequence> sequences;
  SearchReport report;
};
SequenceSearch search_t_ge5(const SearchConfig& cfg, const P1Observer& obs = {});

/// Feasible 3-tuples p1 < p2 < p3 with p1 p2 p3^2 < Q, in enumeration order.
std::vector<FeasibleTuple> feasible_3tuples(const SearchConfig& cfg);
SearchReport search_t4(const SearchConfig& cfg, const P1Observer& obs = {});

/// Feasible 2-tuples p1 < p2 with p1 p2^2 < Q; when product_limit is set,
/// only those with p1 p2 < product_limit.
std::vector<FeasibleTuple> feasible_2tuples(const SearchConfig& cfg, std::optional<u64> product_limit = {});
SearchReport search_t3(const SearchConfig& cfg, const P1Observer& obs = {});
SearchReport search_t2(const SearchConfig& cfg, const P1Observer& obs = {});
SearchReport search_square(const SearchConfig& cfg, const P1Observer& obs = {});

SearchReport run_case(Case c, const SearchConfig& cfg, const P1Observer& obs = {});

/// Largest smallest-prime a case can meet under cfg (ignoring p1_hi).
u64 p1_upper(Case c, const SearchConfig& cfg);

struct GcdTrickResult {
  numth::Natural g;          // gcd(2^(b-1) - 1, 3^(b-1) - 1)
  std::vector<u64> primes;   // prime divisors of g in (lo, hi], ascending
  bool complete = true;      // false: an unfactored part may hide a divisor <= hi
};

/// Prime divisors in (lo, hi] of gcd(2^(b-1) - 1, 3^(b-1) - 1). Any prime
/// p_t with b p_t a psp to bases 2 and 3 divides it. Each base a in
/// refine_bases further restricts to divisors of a^(b-1) - 1 (a prime p_t
/// of a psp to a satisfies a^(b-1) == 1 mod p_t). The cofactor left after
/// trial division is split by rho; parts above 2^64 that pass a BPSW test
/// are taken as prime.
GcdTrickResult gcd_trick_p3(u64 b, u64 lo, u64 hi, u64 trial_bound = 100'000,
                            const primes::FactorOptions& opts = {}, std::span<const u64> refine_bases = {});

// --- drivers ------------------------------------------------------------

struct PsiResult {
  std::optional<u64> psi;     // smallest spsp <= bound, if any
  std::vector<Hit> hits;      // every spsp <= bound, ascending by n
  std::vector<SearchReport> reports;
};

/// Runs every case for the first m prime bases and bound Q.
PsiResult find_psi(std::size_t m, u64 Q, SearchConfig cfg = {});

/// Odd composite n < bound passing the strong test to the first m primes,
/// by direct testing. Independent oracle for the structured search.
std::vector<u64> naive_spsp_scan(std::size_t m, u64 bound, unsigned threads = 1);

}  // namespace spsp::search
