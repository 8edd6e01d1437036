#include "spsp/natural.hpp"

#include <gmp.h>

#include <stdexcept>

namespace spsp::numth {

struct Natural::Impl {
  mpz_t v;
  Impl() { mpz_init(v); }
  ~Impl() { mpz_clear(v); }
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;
};

namespace {
// mpz_*_ui take unsigned long; this build assumes LP64.
static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
}  // namespace

Natural::Natural() : impl_(std::make_unique<Impl>()) {}

Natural::Natural(std::uint64_t v) : Natural() { mpz_set_ui(impl_->v, v); }

Natural::Natural(const Natural& other) : Natural() { mpz_set(impl_->v, other.impl_->v); }

Natural::Natural(Natural&& other) noexcept : impl_(std::move(other.impl_)) {}

Natural& Natural::operator=(const Natural& other) {
  if (this != &other) {
    if (!impl_) impl_ = std::make_unique<Impl>();
    mpz_set(impl_->v, other.impl_->v);
  }
  return *this;
}

Natural& Natural::operator=(Natural&& other) noexcept {
  impl_ = std::move(other.impl_);
  return *this;
}

Natural::~Natural() = default;

Natural Natural::pow_minus_one(std::uint64_t base, std::uint64_t k) {
  if (base < 2) throw std::domain_error("pow_minus_one: base must be at least 2");
  Natural r;
  mpz_ui_pow_ui(r.impl_->v, base, k);
  mpz_sub_ui(r.impl_->v, r.impl_->v, 1);
  return r;
}

bool Natural::is_zero() const { return mpz_sgn(impl_->v) == 0; }
bool Natural::is_one() const { return mpz_cmp_ui(impl_->v, 1) == 0; }

std::size_t Natural::bit_length() const {
  return is_zero() ? 0 : mpz_sizeinbase(impl_->v, 2);
}

bool Natural::fits_u64() const { return bit_length() <= 64; }

std::uint64_t Natural::to_u64() const {
  if (!fits_u64()) throw std::range_error("Natural does not fit in 64 bits");
  return mpz_get_ui(impl_->v);
}

std::string Natural::to_string() const {
  std::string s(mpz_sizeinbase(impl_->v, 10) + 1, '\0');
  mpz_get_str(s.data(), 10, impl_->v);
  s.resize(std::char_traits<char>::length(s.c_str()));
  return s;
}

bool Natural::divisible_by(std::uint64_t d) const {
  if (d == 0) throw std::domain_error("divisible_by: zero divisor");
  return mpz_divisible_ui_p(impl_->v, d) != 0;
}

void Natural::divide_exact(std::uint64_t d) {
  if (d == 0) throw std::domain_error("divide_exact: zero divisor");
  mpz_divexact_ui(impl_->v, impl_->v, d);
}

unsigned Natural::remove_factor(std::uint64_t d) {
  if (d < 2) throw std::domain_error("remove_factor: divisor must be at least 2");
  unsigned k = 0;
  while (!is_zero() && divisible_by(d)) {
    divide_exact(d);
    ++k;
  }
  return k;
}

std::uint64_t Natural::mod_u64(std::uint64_t d) const {
  if (d == 0) throw std::domain_error("mod_u64: zero divisor");
  return mpz_fdiv_ui(impl_->v, d);
}

void Natural::divide_exact(const Natural& d) {
  if (d.is_zero()) throw std::domain_error("divide_exact: zero divisor");
  mpz_divexact(impl_->v, impl_->v, d.impl_->v);
}

Natural Natural::gcd_pow_minus_one(std::uint64_t base, std::uint64_t k) const {
  Natural r;
  if (is_zero()) {
    r = pow_minus_one(base, k);
    return r;
  }
  mpz_t b, e;
  mpz_init_set_ui(b, base);
  mpz_init_set_ui(e, k);
  mpz_powm(r.impl_->v, b, e, impl_->v);
  mpz_clear(b);
  mpz_clear(e);
  // (base^k mod x) - 1, taken mod x so that x | base^k - 1 gives gcd x
  if (mpz_sgn(r.impl_->v) == 0) mpz_set(r.impl_->v, impl_->v);
  mpz_sub_ui(r.impl_->v, r.impl_->v, 1);
  mpz_gcd(r.impl_->v, r.impl_->v, impl_->v);
  return r;
}

bool Natural::probably_prime() const { return mpz_probab_prime_p(impl_->v, 30) > 0; }

std::optional<Natural> Natural::find_factor(std::uint64_t budget) const {
  const mpz_srcptr n = impl_->v;
  if (mpz_cmp_ui(n, 4) < 0) return std::nullopt;
  if (mpz_even_p(n)) return Natural(2);
  mpz_t x, y, ys, q, g, t;
  mpz_inits(x, y, ys, q, g, t, nullptr);
  std::optional<Natural> found;
  auto step = [&](mpz_t v, unsigned long c) {
    mpz_mul(v, v, v);
    mpz_add_ui(v, v, c);
    mpz_mod(v, v, n);
  };
  for (unsigned long c = 1; c <= 8 && !found; ++c) {
    mpz_set_ui(y, 2);
    mpz_set_ui(q, 1);
    mpz_set_ui(g, 1);
    std::uint64_t r = 1, spent = 0;
    const std::uint64_t m = 128;
    while (mpz_cmp_ui(g, 1) == 0 && spent < budget) {
      mpz_set(x, y);
      for (std::uint64_t i = 0; i < r; ++i) step(y, c);
      for (std::uint64_t k = 0; k < r && mpz_cmp_ui(g, 1) == 0; k += m) {
        mpz_set(ys, y);
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          step(y, c);
          mpz_sub(t, x, y);
          mpz_abs(t, t);
          mpz_mul(q, q, t);
          mpz_mod(q, q, n);
        }
        mpz_gcd(g, q, n);
        spent += std::min(m, r - k);
      }
      r *= 2;
    }
    if (mpz_cmp(g, n) == 0) {
      // batch overshot; retrace one step at a time
      do {
        step(ys, c);
        mpz_sub(t, x, ys);
        mpz_abs(t, t);
        mpz_gcd(g, t, n);
      } while (mpz_cmp_ui(g, 1) == 0);
    }
    if (mpz_cmp_ui(g, 1) != 0 && mpz_cmp(g, n) != 0) {
      Natural f;
      mpz_set(f.impl_->v, g);
      found = std::move(f);
    }
  }
  mpz_clears(x, y, ys, q, g, t, nullptr);
  return found;
}

Natural big_gcd(const Natural& x, const Natural& y) {
  Natural r;
  mpz_gcd(r.impl_->v, x.impl_->v, y.impl_->v);
  return r;
}

bool operator==(const Natural& x, const Natural& y) {
  return mpz_cmp(x.impl_->v, y.impl_->v) == 0;
}

}  // namespace spsp::numth
