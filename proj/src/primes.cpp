#include "spsp/primes.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace spsp::primes {

using numth::mod_mul;
using numth::mod_pow;
using numth::u128;

std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<std::uint8_t> composite(n / 2 + 1, 0);  // index i <-> 2i+1
  out.push_back(2);
  for (std::uint64_t i = 1; 2 * i + 1 <= n; ++i) {
    if (composite[i]) continue;
    std::uint64_t p = 2 * i + 1;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= n; m += 2 * p) composite[m / 2] = 1;
  }
  return out;
}

std::span<const std::uint32_t> small_primes() {
  static const std::vector<std::uint32_t> cache = primes_up_to(1u << 20);
  return cache;
}

PrimeStream::PrimeStream(u64 lo, u64 hi, std::size_t segment_odds)
    : lo_(lo), hi_(hi), segment_odds_(std::max<std::size_t>(segment_odds, 64)) {
  if (hi_ > (u64{1} << 63)) throw std::range_error("sieve_range: hi exceeds 2^63");
  if (lo_ >= hi_) {
    done_ = true;
    return;
  }
  emitted_two_ = !(lo_ <= 2 && 2 < hi_);
  u64 start = std::max<u64>(lo_, 3);
  if ((start & 1) == 0) ++start;
  seg_start_ = start;
  u64 root = numth::isqrt(hi_ - 1);
  auto all = primes_up_to(static_cast<std::uint32_t>(root));
  base_.assign(all.begin() + (all.empty() ? 0 : 1), all.end());  // odd only
  pos_ = 0;
  composite_.clear();
  if (seg_start_ >= hi_) {
    composite_.clear();
  } else {
    fill_segment();
  }
}

bool PrimeStream::fill_segment() {
  if (seg_start_ >= hi_) return false;
  std::size_t count = static_cast<std::size_t>(std::min<u64>(segment_odds_, (hi_ - seg_start_ + 1) / 2));
  composite_.assign(count, 0);
  u64 seg_last = seg_start_ + 2 * (count - 1);
  for (std::uint32_t p32 : base_) {
    u64 p = p32;
    u64 sq = p * p;
    if (sq > seg_last) break;
    u64 first = std::max(sq, (seg_start_ + p - 1) / p * p);
    if ((first & 1) == 0) first += p;
    for (u64 m = first; m <= seg_last; m += 2 * p) composite_[(m - seg_start_) / 2] = 1;
  }
  if (seg_start_ == 1) composite_[0] = 1;  // 1 is not prime
  pos_ = 0;
  return true;
}

std::optional<u64> PrimeStream::next() {
  if (done_) return std::nullopt;
  if (!emitted_two_) {
    emitted_two_ = true;
    return 2;
  }
  while (true) {
    while (pos_ < composite_.size()) {
      std::size_t i = pos_++;
      if (!composite_[i]) {
        u64 v = seg_start_ + 2 * i;
        if (v >= hi_) break;
        return v;
      }
    }
    u64 next_start = seg_start_ + 2 * composite_.size();
    if (composite_.empty() || next_start >= hi_ || next_start < seg_start_) {
      done_ = true;
      return std::nullopt;
    }
    seg_start_ = next_start;
    fill_segment();
  }
}

namespace {

bool strong_probable_prime(u64 n, u64 a, u64 d, unsigned s) {
  a %= n;
  if (a == 0) return true;
  u64 x = mod_pow(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mod_mul(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint32_t, 15> kSmall = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  for (auto p : kSmall) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 53 * 53) return true;
  auto [d, s] = numth::split_two(n - 1);
  if (n < (u64{1} << 32)) {
    for (u64 a : {2u, 7u, 61u})
      if (!strong_probable_prime(n, a, d, s)) return false;
    return true;
  }
  for (u64 a : {u64{2}, u64{325}, u64{9375}, u64{28178}, u64{450775}, u64{9780504}, u64{1795265022}})
    if (!strong_probable_prime(n, a, d, s)) return false;
  return true;
}

u64 Factorization::recombine() const {
  u128 acc = cofactor;
  for (const auto& [p, k] : factors)
    for (unsigned i = 0; i < k; ++i) acc *= p;
  return static_cast<u64>(acc);
}

std::optional<u64> pollard_brent(u64 n, u64 c, u64& budget) {
  if (n % 2 == 0) return 2;
  auto f = [&](u64 x) { return static_cast<u64>((static_cast<u128>(x) * x + c) % n); };
  constexpr u64 kBatch = 128;
  u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    for (u64 k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      u64 lim = std::min(kBatch, r - k);
      if (budget < lim) return std::nullopt;
      budget -= lim;
      for (u64 i = 0; i < lim; ++i) {
        y = f(y);
        q = mod_mul(q, x > y ? x - y : y - x, n);
      }
      g = numth::gcd(q, n);
    }
  }
  if (g == n) {
    // batch overshot; step back one at a time
    do {
      if (budget == 0) return std::nullopt;
      --budget;
      ys = f(ys);
      g = numth::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  if (g == n) return std::nullopt;
  return g;
}

namespace {

void split_into(u64 n, u64& budget, std::vector<u64>& primes_out, std::vector<u64>& stuck) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes_out.push_back(n);
    return;
  }
  u64 r = numth::isqrt(n);
  if (r * r == n) {
    split_into(r, budget, primes_out, stuck);
    split_into(r, budget, primes_out, stuck);
    return;
  }
  for (u64 c = 1; budget > 0; ++c) {
    auto d = pollard_brent(n, c, budget);
    if (d) {
      split_into(*d, budget, primes_out, stuck);
      split_into(n / *d, budget, primes_out, stuck);
      return;
    }
  }
  stuck.push_back(n);
}

}  // namespace

Factorization factorize(u64 n, const FactorOptions& opts) {
  if (n == 0) throw std::domain_error("factorize: n must be positive");
  Factorization out;
  out.original = n;
  std::vector<u64> found;
  u64 rest = n;
  auto table = small_primes();
  for (std::uint32_t p32 : table) {
    u64 p = p32;
    if (p > opts.trial_bound || p * p > rest) break;
    while (rest % p == 0) {
      rest /= p;
      found.push_back(p);
    }
  }
  if (rest > 1) {
    u64 last_trial = std::min<u64>(opts.trial_bound, table.back());
    if (rest < (last_trial + 1) * (last_trial + 1) || is_prime(rest)) {
      found.push_back(rest);
      rest = 1;
    }
  }
  u64 cofactor = 1;
  if (rest > 1) {
    u64 budget = opts.rho_budget;
    std::vector<u64> stuck;
    split_into(rest, budget, found, stuck);
    for (u64 s : stuck) cofactor *= s;
  }
  std::sort(found.begin(), found.end());
  for (u64 p : found) {
    if (!out.factors.empty() && out.factors.back().prime == p) ++out.factors.back().exponent;
    else out.factors.push_back({p, 1});
  }
  out.cofactor = cofactor;
  return out;
}

}  // namespace spsp::primes
