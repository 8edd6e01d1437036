// Word-size modular arithmetic kernel.
//
// Everything here operates on unsigned 64-bit values. Products go through
// unsigned __int128, so moduli up to 2^64 - 1 are exact; the search itself
// never exceeds 2^63.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace spsp::numth {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// A congruence class x = residue (mod modulus), 0 <= residue < modulus.
struct ResidueClass {
  u64 modulus = 1;
  u64 residue = 0;

  ResidueClass() = default;
  /// Reduces residue into range; throws std::domain_error for modulus 0.
  ResidueClass(u64 modulus, u64 residue);

  bool contains(u64 x) const { return x % modulus == residue; }
  /// Smallest member strictly greater than lo, or nullopt if that overflows.
  std::optional<u64> first_above(u64 lo) const;

  friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
  friend auto operator<=>(const ResidueClass&, const ResidueClass&) = default;
};

/// 2-adic valuation; throws std::domain_error for n == 0.
unsigned val2(u64 n);

/// Odd part d and exponent s with n = 2^s * d.
std::pair<u64, unsigned> split_two(u64 n);

u64 mod_mul(u64 a, u64 b, u64 m);
u64 mod_pow(u64 a, u64 e, u64 m);

/// Jacobi symbol (a/n) for odd n >= 1; throws std::domain_error otherwise.
int jacobi(std::int64_t a, u64 n);
int jacobi_u(u64 a, u64 n);

u64 gcd(u64 a, u64 b);
/// lcm with overflow check: values above 2^63 raise std::range_error.
u64 lcm(u64 a, u64 b);

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<u64> mod_inverse(u64 a, u64 m);

/// Combines congruences with arbitrary (not necessarily coprime) moduli.
/// nullopt when the system has no solution; std::range_error when the lcm
/// of the moduli exceeds 2^63.
std::optional<ResidueClass> crt_combine(const ResidueClass& x, const ResidueClass& y);
std::optional<ResidueClass> crt_combine(std::span<const ResidueClass> classes);

/// A prime factor with multiplicity.
struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Ord_p(a). p_minus_1 must be the complete factorization of p - 1.
u64 mult_order(u64 a, u64 p, std::span<const PrimePower> p_minus_1);

/// floor(n^(1/k)) for k >= 1.
u64 iroot(u64 n, unsigned k);
inline u64 isqrt(u64 n) { return iroot(n, 2); }

/// a * b saturated at UINT64_MAX.
inline u64 sat_mul(u64 a, u64 b) {
  u128 r = static_cast<u128>(a) * b;
  return r > UINT64_MAX ? UINT64_MAX : static_cast<u64>(r);
}

}  // namespace spsp::numth
