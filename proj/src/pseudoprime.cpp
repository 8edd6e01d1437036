#include "spsp/pseudoprime.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace spsp {

using numth::mod_mul;
using numth::mod_pow;
using numth::u128;

BaseVector::BaseVector(std::vector<u64> bases) : bases_(std::move(bases)) {
  if (bases_.empty()) throw std::domain_error("base vector must be nonempty");
  for (std::size_t i = 0; i < bases_.size(); ++i) {
    if (!primes::is_prime(bases_[i])) throw std::domain_error("base " + std::to_string(bases_[i]) + " is not prime");
    if (i > 0 && bases_[i] <= bases_[i - 1]) throw std::domain_error("bases must be strictly ascending");
  }
}

BaseVector BaseVector::first(std::size_t m) {
  static constexpr u64 kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  if (m < 1 || m > std::size(kPrimes)) throw std::domain_error("base count must be in [1, 15]");
  return BaseVector(std::vector<u64>(kPrimes, kPrimes + m));
}

bool BaseVector::contains(u64 p) const { return std::binary_search(bases_.begin(), bases_.end(), p); }

BaseVector BaseVector::prefix(std::size_t k) const {
  k = std::clamp<std::size_t>(k, 1, bases_.size());
  return BaseVector(std::vector<u64>(bases_.begin(), bases_.begin() + static_cast<std::ptrdiff_t>(k)));
}

unsigned Signature::max_entry() const {
  unsigned m = 0;
  for (auto x : entries) m = std::max<unsigned>(m, x);
  return m;
}

std::string Signature::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(entries[i]);
  }
  return s + ")";
}

bool is_psp(u64 n, u64 a) {
  if (n < 3 || (n & 1) == 0) throw std::domain_error("is_psp: n must be odd and greater than 2");
  if (numth::gcd(a % n, n) != 1) return false;
  return mod_pow(a, n - 1, n) == 1;
}

bool is_spsp(u64 n, u64 a) {
  if (n < 3 || (n & 1) == 0) throw std::domain_error("is_spsp: n must be odd and greater than 2");
  if (numth::gcd(a % n, n) != 1) return false;
  auto [d, s] = numth::split_two(n - 1);
  u64 x = mod_pow(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned k = 1; k < s; ++k) {
    x = mod_mul(x, x, n);
    if (x == n - 1) return true;
    if (x == 1) return false;
  }
  return false;
}

bool is_spsp_all(u64 n, const BaseVector& v) {
  if (n < 3 || (n & 1) == 0) return false;
  for (u64 a : v.bases())
    if (!is_spsp(n, a)) return false;
  return !primes::is_prime(n);
}

namespace {

// Val(Ord_q(a)) from x = a^d mod q, or -1 when the chain does not reach 1
// within e squarings.
int chain_length(u64 x, u64 q, unsigned e) {
  int j = 0;
  while (x != 1) {
    if (static_cast<unsigned>(j) >= e) return -1;
    x = mod_mul(x, x, q);
    ++j;
  }
  return j;
}

}  // namespace

Signature signature(u64 p, const BaseVector& v) {
  if (p < 3 || (p & 1) == 0) throw std::domain_error("signature: p must be an odd prime");
  Signature s;
  s.entries.reserve(v.size());
  auto [d, e] = numth::split_two(p - 1);
  for (u64 a : v.bases()) {
    if (a % p == 0) throw std::domain_error("signature: p divides base " + std::to_string(a));
    int j = chain_length(mod_pow(a, d, p), p, e);
    if (j < 0) throw std::domain_error("signature: " + std::to_string(p) + " is not prime");
    s.entries.push_back(static_cast<std::uint8_t>(j));
  }
  return s;
}

Signature signature_from_factors(u64 p, const BaseVector& v, std::span<const numth::PrimePower> p_minus_1) {
  Signature s;
  for (u64 a : v.bases()) s.entries.push_back(static_cast<std::uint8_t>(numth::val2(numth::mult_order(a, p, p_minus_1))));
  return s;
}

bool signature_matches(u64 q, const Signature& sig, const BaseVector& v) {
  auto [d, e] = numth::split_two(q - 1);
  if (sig.max_entry() > e) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    u64 x = mod_pow(v[i], d, q);
    unsigned want = sig.entries[i];
    // for prime q: x^(2^(want-1)) == -1, or x == 1 when want == 0
    for (unsigned k = 0; k + 1 < want; ++k) x = mod_mul(x, x, q);
    if (x != (want == 0 ? 1 : q - 1)) return false;
  }
  return true;
}

PrimeRecord prime_record(u64 p, const BaseVector& v, const primes::FactorOptions& opts) {
  if (p < 3 || (p & 1) == 0) throw std::domain_error("prime_record: p must be an odd prime");
  auto f = primes::factorize(p - 1, opts);
  if (!f.complete())
    throw std::runtime_error("prime_record: could not factor p - 1 for p = " + std::to_string(p));
  PrimeRecord r;
  r.p = p;
  r.e = numth::val2(p - 1);
  r.lambda = 1;
  for (u64 a : v.bases()) {
    u64 ord = numth::mult_order(a, p, f.factors);
    r.lambda = numth::lcm(r.lambda, ord);
    r.sigma.entries.push_back(static_cast<std::uint8_t>(numth::val2(ord)));
  }
  r.mu = (p - 1) / r.lambda;
  return r;
}

bool spsp_by_signature(std::span<const u64> factors, const BaseVector& v) {
  if (factors.empty()) throw std::domain_error("spsp_by_signature: no factors");
  std::vector<u64> sorted(factors.begin(), factors.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::domain_error("spsp_by_signature: repeated factor (n must be squarefree)");
  u128 n = 1;
  for (u64 p : sorted) {
    n *= p;
    if (n > (u128{1} << 63)) throw std::range_error("spsp_by_signature: product exceeds 2^63");
  }
  for (u64 p : sorted)
    if (p == 2 || v.contains(p)) return false;
  u64 nn = static_cast<u64>(n);
  for (u64 a : v.bases())
    if (!is_psp(nn, a)) return false;
  Signature first = signature(sorted.front(), v);
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!signature_matches(sorted[i], first, v)) return false;
  return true;
}

bool symbols_compatible(u64 p, u64 q, const BaseVector& v) {
  if (numth::val2(p - 1) != numth::val2(q - 1)) return true;
  for (u64 a : v.bases())
    if (numth::jacobi_u(a, p) != numth::jacobi_u(a, q)) return false;
  return true;
}

bool wieferich_pair(u64 p) {
  if (p < 3 || (p & 1) == 0) throw std::domain_error("wieferich_pair: p must be an odd prime");
  u128 sq = static_cast<u128>(p) * p;
  if (sq >= (u128{1} << 63)) throw std::range_error("wieferich_pair: p^2 exceeds 2^63");
  u64 m = static_cast<u64>(sq);
  return mod_pow(2, p - 1, m) == 1 && mod_pow(3, p - 1, m) == 1;
}

bool wieferich_all(u64 p, const BaseVector& v) {
  u128 sq = static_cast<u128>(p) * p;
  if (sq >= (u128{1} << 63)) throw std::range_error("wieferich_all: p^2 exceeds 2^63");
  u64 m = static_cast<u64>(sq);
  for (u64 a : v.bases())
    if (a % p == 0 || mod_pow(a, p - 1, m) != 1) return false;
  return true;
}

bool is_binary(const PrimeRecord& r) { return r.p % 4 == 1 && r.sigma.max_entry() <= 1; }

std::string survey_label(const PrimeRecord& r) {
  std::string label;
  if (r.mu == 2) label = r.p % 4 == 3 ? "mu2_3mod4" : "mu2_1mod4";
  else label = "mu" + std::to_string(r.mu);
  if (is_binary(r)) label += "+binary";
  return label;
}

namespace {

// Survey of one chunk [lo, hi): prime flags from a segmented sieve, then a
// sieve over p - 1 that tests, for every prime r | p - 1, whether all bases
// are r-th power residues (the condition for r | mu_p).
std::vector<PrimeRecord> survey_chunk(u64 lo, u64 hi, const BaseVector& v, const primes::FactorOptions& fopts,
                                      u64& scanned) {
  std::vector<PrimeRecord> out;
  if (lo >= hi) return out;
  const std::size_t len = static_cast<std::size_t>(hi - lo);
  std::vector<u64> rem(len, 0);  // cofactor of p - 1 for prime p = lo + i; 0 when p not prime
  std::vector<std::uint8_t> mu_gt1(len, 0);
  u64 max_base = v.bases().back();
  for (u64 p : primes::sieve_range(lo, hi)) {
    if (p <= max_base && v.contains(p)) continue;
    if (p == 2) continue;
    ++scanned;
    // r = 2 separately: every base a quadratic residue.
    bool all_qr = true;
    for (u64 a : v.bases())
      if (numth::jacobi_u(a, p) != 1) {
        all_qr = false;
        break;
      }
    if (all_qr) mu_gt1[p - lo] = 1;
    rem[p - lo] = (p - 1) >> numth::val2(p - 1);
  }
  auto test_r = [&](std::size_t i, u64 r) {
    u64 p = lo + i;
    u64 exp = (p - 1) / r;
    for (u64 a : v.bases())
      if (mod_pow(a, exp, p) != 1) return;
    mu_gt1[i] = 1;
  };
  u64 root = numth::isqrt(hi);
  auto table = primes::small_primes();
  if (root > table.back()) throw std::range_error("survey_mu: bound beyond the small-prime table");
  for (std::size_t t = 1; t < table.size() && table[t] <= root; ++t) {
    u64 r = table[t];
    // indices i with lo + i - 1 == 0 mod r
    u64 first = (lo + r - 2) / r * r + 1;  // smallest p >= lo with p == 1 (mod r)
    if (first < lo) first += r;
    for (u64 p = first; p < hi; p += r) {
      std::size_t i = static_cast<std::size_t>(p - lo);
      if (rem[i] == 0) continue;
      do rem[i] /= r;
      while (rem[i] % r == 0);
      if (!mu_gt1[i]) test_r(i, r);
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (rem[i] > 1 && !mu_gt1[i]) test_r(i, rem[i]);
    if (!mu_gt1[i]) continue;
    PrimeRecord rec = prime_record(lo + i, v, fopts);
    if (rec.mu >= 2 || is_binary(rec)) out.push_back(std::move(rec));
  }
  return out;
}

void tally(SurveyTotals& totals, const PrimeRecord& r) {
  if (r.mu >= 2) {
    std::string key = r.mu == 2 ? (r.p % 4 == 3 ? "mu2_3mod4" : "mu2_1mod4") : "mu" + std::to_string(r.mu);
    ++totals.by_class[key];
  }
  if (is_binary(r)) ++totals.by_class["binary"];
}

}  // namespace

SurveyTotals survey_mu(u64 bound, const BaseVector& v, const std::function<void(const PrimeRecord&)>& sink,
                       const SurveyOptions& opts) {
  SurveyTotals totals;
  if (bound >= (u64{1} << 63)) throw std::range_error("survey_mu: bound exceeds 2^63");
  if (numth::isqrt(bound) > primes::small_primes().back())
    throw std::range_error("survey_mu: bound beyond the small-prime table");
  const u64 end = bound + 1;
  const u64 chunk = std::max<u64>(opts.chunk, 1024);
  const u64 nchunks = (end + chunk - 1) / chunk;
  const unsigned threads = std::max(1u, opts.threads);

  // Chunks are processed in waves of `threads`; results are emitted in order.
  for (u64 wave = 0; wave < nchunks; wave += threads) {
    u64 count = std::min<u64>(threads, nchunks - wave);
    std::vector<std::vector<PrimeRecord>> results(count);
    std::vector<u64> scanned(count, 0);
    std::vector<std::exception_ptr> errors(count);
    auto work = [&](u64 k) {
      try {
        u64 lo = (wave + k) * chunk;
        u64 hi = std::min(end, lo + chunk);
        results[k] = survey_chunk(lo, hi, v, opts.factor, scanned[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    if (count == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (u64 k = 0; k < count; ++k) pool.emplace_back(work, k);
    }
    for (u64 k = 0; k < count; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      totals.primes_scanned += scanned[k];
      for (const auto& r : results[k]) {
        tally(totals, r);
        if (sink) sink(r);
      }
    }
  }
  return totals;
}

}  // namespace spsp
