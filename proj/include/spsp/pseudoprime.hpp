// Pseudoprime predicates, order signatures and the per-prime records
// (lambda_p, mu_p) that drive the search.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spsp/numth.hpp"
#include "spsp/primes.hpp"

namespace spsp {

using numth::u64;

/// The Q_11 bound: 149491 * 747451 * 34233211.
inline constexpr u64 kQ11 = 3825123056546413051ULL;

/// Ascending list of distinct prime bases.
class BaseVector {
 public:
  /// Validates: nonempty, strictly ascending, every entry prime.
  explicit BaseVector(std::vector<u64> bases);

  /// The first m primes (1 <= m <= 15).
  static BaseVector first(std::size_t m);

  std::span<const u64> bases() const { return bases_; }
  std::size_t size() const { return bases_.size(); }
  u64 operator[](std::size_t i) const { return bases_[i]; }
  /// True when p is one of the bases (equivalently, divides one).
  bool contains(u64 p) const;
  /// Leading k bases (k clamped to size()).
  BaseVector prefix(std::size_t k) const;

  friend bool operator==(const BaseVector&, const BaseVector&) = default;

 private:
  std::vector<u64> bases_;
};

/// Val(Ord_p(a)) for each base a, in base order.
struct Signature {
  std::vector<std::uint8_t> entries;

  std::size_t size() const { return entries.size(); }
  unsigned max_entry() const;
  std::string to_string() const;  // "(0,1,0)"

  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

struct PrimeRecord {
  u64 p = 0;
  unsigned e = 0;  // Val(p - 1)
  u64 lambda = 0;  // lcm of the base orders
  u64 mu = 0;      // (p - 1) / lambda
  Signature sigma;
};

// --- predicates ---------------------------------------------------------

/// a^(n-1) == 1 (mod n). True for primes too. n must be odd and > 2.
bool is_psp(u64 n, u64 a);

/// Strong test: with n - 1 = 2^s d, a^d == 1 or a^(2^k d) == -1 for some
/// 0 <= k < s. Returns false when gcd(a, n) != 1.
bool is_spsp(u64 n, u64 a);

/// is_spsp for every base, and n composite.
bool is_spsp_all(u64 n, const BaseVector& v);

/// Signature of an odd prime p not dividing any base. Computed from the
/// 2-part of each order: with p - 1 = 2^e d, Val(Ord_p(a)) is the number of
/// squarings that take a^d to 1. Throws std::domain_error when p divides a
/// base or the chain never reaches 1 (p composite).
Signature signature(u64 p, const BaseVector& v);

/// Same quantity through full orders (needs the factorization of p - 1).
Signature signature_from_factors(u64 p, const BaseVector& v, std::span<const numth::PrimePower> p_minus_1);

/// Early-exit comparison of q's signature against sig. Returns false for
/// composite q whose squaring chain breaks. q must be odd and > every base.
bool signature_matches(u64 q, const Signature& sig, const BaseVector& v);

/// Full record. Throws std::runtime_error if p - 1 cannot be factored.
PrimeRecord prime_record(u64 p, const BaseVector& v, const primes::FactorOptions& opts = {});

/// Signature test for squarefree n = product of the given primes:
/// n is psp to every base and all the factor signatures coincide.
/// Throws std::domain_error on repeated factors, std::range_error on
/// overflow of the product.
bool spsp_by_signature(std::span<const u64> factors, const BaseVector& v);

/// If Val(p-1) == Val(q-1) then the Jacobi symbols of every base agree.
bool symbols_compatible(u64 p, u64 q, const BaseVector& v);

/// 2^(p-1) == 1 and 3^(p-1) == 1 (mod p^2). Throws std::range_error when
/// p^2 >= 2^63.
bool wieferich_pair(u64 p);

/// a^(p-1) == 1 (mod p^2) for every base a. The condition a prime p must
/// meet for p^2 to divide a psp to all of v.
bool wieferich_all(u64 p, const BaseVector& v);

// --- survey -------------------------------------------------------------

/// Row label of a record: "mu2_3mod4", "mu2_1mod4", "mu3", ..., with
/// "+binary" appended for p == 1 mod 4 whose entries are all 0 or 1.
/// Records with mu == 1 that are not binary have label "mu1".
std::string survey_label(const PrimeRecord& r);
bool is_binary(const PrimeRecord& r);

struct SurveyOptions {
  unsigned threads = 1;
  std::size_t chunk = std::size_t{1} << 22;  // numbers per work unit
  primes::FactorOptions factor;
};

struct SurveyTotals {
  std::map<std::string, u64> by_class;  // "mu2_3mod4", ..., "binary"
  u64 primes_scanned = 0;
};

/// Every prime p <= bound (p not a base) with mu_p >= 2 or binary, in
/// ascending order, passed to sink. Returns the per-class totals.
SurveyTotals survey_mu(u64 bound, const BaseVector& v, const std::function<void(const PrimeRecord&)>& sink,
                       const SurveyOptions& opts = {});

}  // namespace spsp
