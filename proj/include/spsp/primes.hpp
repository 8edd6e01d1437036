// Prime generation, 64-bit primality and factorization.

#pragma once

#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <vector>

#include "spsp/numth.hpp"

namespace spsp::primes {

using numth::PrimePower;
using numth::u64;

/// All primes <= n, by a plain sieve. Intended for n up to a few 10^8.
std::vector<std::uint32_t> primes_up_to(std::uint32_t n);

/// Process-wide cache of the primes below 2^20.
std::span<const std::uint32_t> small_primes();

/// Streams the primes in [lo, hi) in ascending order with memory bounded
/// by the segment size. Segments hold odd numbers only.
class PrimeStream {
 public:
  static constexpr std::size_t kDefaultSegment = std::size_t{1} << 20;

  PrimeStream(u64 lo, u64 hi, std::size_t segment_odds = kDefaultSegment);

  std::optional<u64> next();

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = u64;
    using difference_type = std::ptrdiff_t;
    using pointer = const u64*;
    using reference = const u64&;

    iterator() = default;
    explicit iterator(PrimeStream* s) : stream_(s) { advance(); }
    const u64& operator*() const { return value_; }
    iterator& operator++() {
      advance();
      return *this;
    }
    void operator++(int) { advance(); }
    friend bool operator==(const iterator& a, const iterator& b) { return a.stream_ == b.stream_; }

   private:
    void advance() {
      auto v = stream_->next();
      if (v) value_ = *v;
      else stream_ = nullptr;
    }
    PrimeStream* stream_ = nullptr;
    u64 value_ = 0;
  };

  iterator begin() { return iterator(this); }
  iterator end() { return iterator(); }

 private:
  bool fill_segment();

  u64 lo_, hi_;
  std::size_t segment_odds_;
  bool emitted_two_ = false;
  u64 seg_start_ = 0;  // odd number represented by index 0
  std::vector<std::uint8_t> composite_;
  std::size_t pos_ = 0;
  std::vector<std::uint32_t> base_;
  bool done_ = false;
};

inline PrimeStream sieve_range(u64 lo, u64 hi,
                               std::size_t segment_odds = PrimeStream::kDefaultSegment) {
  return PrimeStream(lo, hi, segment_odds);
}

/// Exact for every 64-bit n: trial division by small primes, then a strong
/// test to the seven bases of Sinclair's deterministic set.
bool is_prime(u64 n);

struct FactorOptions {
  u64 trial_bound = 100000;
  /// Total Brent iterations allowed across all rho attempts.
  u64 rho_budget = u64{1} << 24;
};

struct Factorization {
  u64 original = 1;
  std::vector<PrimePower> factors;  // ascending
  u64 cofactor = 1;                 // unfactored part, 1 when complete

  bool complete() const { return cofactor == 1; }
  u64 recombine() const;
};

Factorization factorize(u64 n, const FactorOptions& opts = {});

/// Brent's variant of Pollard rho with polynomial x^2 + c. Returns a
/// nontrivial factor of the composite n, or nullopt when the iteration
/// budget runs out. budget is decremented by the iterations used.
std::optional<u64> pollard_brent(u64 n, u64 c, u64& budget);

}  // namespace spsp::primes
