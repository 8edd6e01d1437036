// Unbounded naturals for the one place the search leaves 64 bits:
// gcd(a^k - 1, c^k - 1) for k up to a few million.
//
// Deliberately small surface. Backed by GMP.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace spsp::numth {

class Natural {
 public:
  Natural();
  explicit Natural(std::uint64_t v);
  Natural(const Natural& other);
  Natural(Natural&& other) noexcept;
  Natural& operator=(const Natural& other);
  Natural& operator=(Natural&& other) noexcept;
  ~Natural();

  /// base^k - 1 (base >= 2).
  static Natural pow_minus_one(std::uint64_t base, std::uint64_t k);

  bool is_zero() const;
  bool is_one() const;
  std::size_t bit_length() const;
  bool fits_u64() const;
  /// Throws std::range_error when the value does not fit.
  std::uint64_t to_u64() const;
  std::string to_string() const;

  bool divisible_by(std::uint64_t d) const;
  /// In-place exact division; d must divide *this.
  void divide_exact(std::uint64_t d);
  /// Divides out every factor d, returning the multiplicity removed.
  unsigned remove_factor(std::uint64_t d);
  std::uint64_t mod_u64(std::uint64_t d) const;
  /// In-place exact division by a divisor.
  void divide_exact(const Natural& d);

  /// gcd(*this, base^k - 1), by exponentiation modulo *this.
  Natural gcd_pow_minus_one(std::uint64_t base, std::uint64_t k) const;

  /// BPSW plus Miller-Rabin rounds (GMP); no known composite passes.
  bool probably_prime() const;

  /// Nontrivial factor by Brent's rho within budget iterations per
  /// polynomial (a few polynomials are tried), or nullopt.
  std::optional<Natural> find_factor(std::uint64_t budget) const;

  friend Natural big_gcd(const Natural& x, const Natural& y);
  friend bool operator==(const Natural& x, const Natural& y);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Natural big_gcd(const Natural& x, const Natural& y);

}  // namespace spsp::numth
