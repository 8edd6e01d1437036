#include "spsp/numth.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

namespace spsp::numth {

namespace {
constexpr u64 kRangeLimit = u64{1} << 63;
}

ResidueClass::ResidueClass(u64 m, u64 r) : modulus(m), residue(0) {
  if (m == 0) throw std::domain_error("residue class modulus must be positive");
  residue = r % m;
}

std::optional<u64> ResidueClass::first_above(u64 lo) const {
  // smallest x > lo with x == residue (mod modulus)
  if (lo == UINT64_MAX) return std::nullopt;
  u64 start = lo + 1;
  u64 r = start % modulus;
  u64 delta = (residue + modulus - r) % modulus;
  if (start > UINT64_MAX - delta) return std::nullopt;
  return start + delta;
}

unsigned val2(u64 n) {
  if (n == 0) throw std::domain_error("val2(0) is undefined");
  return static_cast<unsigned>(std::countr_zero(n));
}

std::pair<u64, unsigned> split_two(u64 n) {
  unsigned s = val2(n);
  return {n >> s, s};
}

u64 mod_mul(u64 a, u64 b, u64 m) {
  if (m == 0) throw std::domain_error("mod_mul: zero modulus");
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 mod_pow(u64 a, u64 e, u64 m) {
  if (m == 0) throw std::domain_error("mod_pow: zero modulus");
  if (m == 1) return 0;
  u64 result = 1;
  a %= m;
  while (e != 0) {
    if (e & 1) result = static_cast<u64>(static_cast<u128>(result) * a % m);
    e >>= 1;
    if (e != 0) a = static_cast<u64>(static_cast<u128>(a) * a % m);
  }
  return result;
}

int jacobi_u(u64 a, u64 n) {
  if (n == 0 || (n & 1) == 0) throw std::domain_error("jacobi: modulus must be odd and positive");
  a %= n;
  int t = 1;
  while (a != 0) {
    unsigned z = static_cast<unsigned>(std::countr_zero(a));
    a >>= z;
    u64 r = n & 7;
    if ((z & 1) && (r == 3 || r == 5)) t = -t;
    // reciprocity
    if ((a & 3) == 3 && (n & 3) == 3) t = -t;
    u64 tmp = a;
    a = n % a;
    n = tmp;
  }
  return n == 1 ? t : 0;
}

int jacobi(std::int64_t a, u64 n) {
  if (n == 0 || (n & 1) == 0) throw std::domain_error("jacobi: modulus must be odd and positive");
  if (a >= 0) return jacobi_u(static_cast<u64>(a), n);
  // a negative: reduce |a| and use a representative in [0, n)
  u64 mag = static_cast<u64>(-(a + 1)) + 1;
  u64 r = mag % n;
  return jacobi_u(r == 0 ? 0 : n - r, n);
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  u128 l = static_cast<u128>(a / std::gcd(a, b)) * b;
  if (l > kRangeLimit) throw std::range_error("lcm exceeds 2^63");
  return static_cast<u64>(l);
}

std::optional<u64> mod_inverse(u64 a, u64 m) {
  if (m == 0) throw std::domain_error("mod_inverse: zero modulus");
  if (m == 1) return 0;
  // extended Euclid on signed 128-bit to keep the coefficients exact
  __int128 old_r = static_cast<__int128>(a % m), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  __int128 x = old_s % static_cast<__int128>(m);
  if (x < 0) x += m;
  return static_cast<u64>(x);
}

std::optional<ResidueClass> crt_combine(const ResidueClass& x, const ResidueClass& y) {
  u64 g = std::gcd(x.modulus, y.modulus);
  u64 diff = y.residue >= x.residue ? y.residue - x.residue : x.residue - y.residue;
  if (diff % g != 0) return std::nullopt;
  u64 m1 = x.modulus / g, m2 = y.modulus / g;
  u128 l = static_cast<u128>(x.modulus) * m2;
  if (l > kRangeLimit) throw std::range_error("crt_combine: combined modulus exceeds 2^63");
  if (m2 == 1) return ResidueClass(static_cast<u64>(l), x.residue);
  // x.residue + x.modulus * k == y.residue (mod y.modulus)
  //   =>  m1 * k == (y.residue - x.residue) / g (mod m2)
  u64 inv = *mod_inverse(m1 % m2, m2);
  u64 d = (diff / g) % m2;
  if (y.residue < x.residue) d = (m2 - d) % m2;
  u64 k = mod_mul(d, inv, m2);
  u128 res = static_cast<u128>(x.residue) + static_cast<u128>(x.modulus) * k;
  return ResidueClass(static_cast<u64>(l), static_cast<u64>(res % l));
}

std::optional<ResidueClass> crt_combine(std::span<const ResidueClass> classes) {
  if (classes.empty()) throw std::domain_error("crt_combine: empty class list");
  ResidueClass acc = classes.front();
  for (const auto& c : classes.subspan(1)) {
    auto next = crt_combine(acc, c);
    if (!next) return std::nullopt;
    acc = *next;
  }
  return acc;
}

u64 mult_order(u64 a, u64 p, std::span<const PrimePower> p_minus_1) {
  if (p < 2) throw std::domain_error("mult_order: modulus must be prime");
  if (a % p == 0) throw std::domain_error("mult_order: base shares a factor with the modulus");
  u64 order = p - 1;
  for (const auto& [q, k] : p_minus_1) {
    for (unsigned i = 0; i < k; ++i) {
      if (mod_pow(a, order / q, p) != 1) break;
      order /= q;
    }
  }
  return order;
}

u64 iroot(u64 n, unsigned k) {
  if (k == 0) throw std::domain_error("iroot: k must be positive");
  if (k == 1 || n < 2) return n;
  auto pow_le = [&](u64 x) {  // x^k <= n without overflow
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      acc *= x;
      if (acc > n) return false;
    }
    return true;
  };
  u64 lo = 1, hi = u64{1} << (64 / k + 1);
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    if (pow_le(mid)) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

}  // namespace spsp::numth
