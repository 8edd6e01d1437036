#include <algorithm>
#include <stdexcept>

#include "spsp/search.hpp"

namespace spsp::search {

std::vector<ResidueClass> symbol_classes(unsigned two_exp, u64 two_residue, std::span<const SymbolRequirement> reqs) {
  unsigned K = std::max(two_exp, 1u);
  if (!reqs.empty()) K = std::max(K, 3u);
  if (K > 62) throw std::range_error("symbol_classes: 2-adic modulus too large");
  const u64 two_mod = u64{1} << K;
  const u64 low_mod = u64{1} << two_exp;

  std::vector<ResidueClass> out;
  for (u64 r2 = two_residue % low_mod; r2 < two_mod; r2 += low_mod) {
    if ((r2 & 1) == 0) continue;
    std::vector<ResidueClass> partial{ResidueClass(two_mod, r2)};
    bool ok = true;
    for (const auto& req : reqs) {
      if (req.base == 2) {
        if (numth::jacobi_u(2, r2) != req.symbol) ok = false;
        continue;
      }
      // (a/q) = (q/a) * (-1)^((a-1)/2 * (q-1)/2)
      int sign = (req.base % 4 == 3 && r2 % 4 == 3) ? -1 : 1;
      int want = req.symbol * sign;
      std::vector<ResidueClass> next;
      for (u64 x = 1; x < req.base; ++x) {
        if (numth::jacobi_u(x, req.base) != want) continue;
        for (const auto& c : partial)
          if (auto m = numth::crt_combine(c, ResidueClass(req.base, x))) next.push_back(*m);
      }
      partial = std::move(next);
    }
    if (ok) out.insert(out.end(), partial.begin(), partial.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct Profile {
  unsigned e;  // Val(p1 - 1)
  unsigned f;  // Val(lambda_p1)
  std::vector<SymbolRequirement> match;
  std::vector<SymbolRequirement> plus;
};

Profile profile(u64 p1, const BaseVector& v, std::size_t num_bases) {
  if (p1 < 3 || (p1 & 1) == 0 || v.contains(p1)) throw std::domain_error("residue classes need an odd prime p1 not in the base vector");
  Profile pr;
  pr.e = numth::val2(p1 - 1);
  pr.f = signature(p1, v).max_entry();
  std::size_t k = std::min(num_bases, v.size());
  for (std::size_t i = 0; i < k; ++i) {
    pr.match.push_back({v[i], numth::jacobi_u(v[i], p1)});
    pr.plus.push_back({v[i], 1});
  }
  return pr;
}

}  // namespace

std::vector<ResidueBranch> residue_branches(u64 p1, const BaseVector& v, std::size_t num_bases) {
  Profile pr = profile(p1, v, num_bases);
  std::vector<ResidueBranch> out;
  if (pr.e == 1) {
    out.push_back({"match", symbol_classes(2, 3, pr.match)});
  } else if (pr.f == pr.e) {
    out.push_back({"match", symbol_classes(pr.e + 1, 1 + (u64{1} << pr.e), pr.match)});
    out.push_back({"plus", symbol_classes(pr.e + 2, 1 + (u64{1} << (pr.e + 1)), pr.plus)});
  } else {
    out.push_back({"low2", symbol_classes(pr.f, 1, {})});
  }
  return out;
}

std::vector<ResidueClass> residue_classes(u64 p1, const BaseVector& v, std::size_t num_bases) {
  std::vector<ResidueClass> out;
  for (auto& br : residue_branches(p1, v, num_bases)) out.insert(out.end(), br.classes.begin(), br.classes.end());
  return out;
}

std::optional<ResidueClass> leftover_class(u64 p1, const BaseVector& v) {
  Profile pr = profile(p1, v, 0);
  if (pr.e == 1) return ResidueClass(4, 1);
  if (pr.f == pr.e) return ResidueClass(u64{1} << (pr.e + 2), 1);
  return std::nullopt;
}

std::vector<ResidueBranch> complete_branches(u64 p1, const BaseVector& v, std::size_t num_bases) {
  Profile pr = profile(p1, v, num_bases);
  std::vector<ResidueBranch> out;
  if (pr.e == 1) {
    out.push_back({"match", symbol_classes(2, 3, pr.match)});
    out.push_back({"plus_all", symbol_classes(2, 1, pr.plus)});
  } else if (pr.f == pr.e) {
    out.push_back({"match", symbol_classes(pr.e + 1, 1 + (u64{1} << pr.e), pr.match)});
    out.push_back({"plus_all", symbol_classes(pr.e + 1, 1, pr.plus)});
  } else {
    out.push_back({"low2", symbol_classes(pr.f, 1, {})});
  }
  return out;
}

EvenMuPool::EvenMuPool(BaseVector v) : v_(std::move(v)) {}

void EvenMuPool::extend_to(u64 bound) {
  if (bound <= bound_) return;
  for (u64 q : primes::sieve_range(bound_ + 1, bound + 1)) {
    if (q == 2 || v_.contains(q)) continue;
    bool all_qr = true;
    for (u64 a : v_.bases())
      if (numth::jacobi_u(a, q) != 1) {
        all_qr = false;
        break;
      }
    if (!all_qr) continue;
    by_sig_[signature(q, v_)].push_back(q);
    ++count_;
  }
  bound_ = bound;
}

const std::vector<u64>& EvenMuPool::with_signature(const Signature& sig) const {
  static const std::vector<u64> kEmpty;
  auto it = by_sig_.find(sig);
  return it == by_sig_.end() ? kEmpty : it->second;
}

CandidateSet signature_candidates(u64 p1, u64 lo, u64 hi, const BaseVector& v, const EvenMuPool* pool,
                                  std::size_t num_bases) {
  CandidateSet out;
  if (hi <= lo) return out;
  Signature sig = signature(p1, v);
  for (const auto& c : residue_classes(p1, v, num_bases)) {
    auto first = c.first_above(lo);
    if (!first) continue;
    for (u64 q = *first; q <= hi; q += c.modulus) {
      ++out.walked;
      if (q > 2 && !v.contains(q) && signature_matches(q, sig, v) && primes::is_prime(q)) out.primes.push_back(q);
      if (q > UINT64_MAX - c.modulus) break;
    }
  }
  if (auto left = leftover_class(p1, v)) {
    if (!pool || pool->bound() < hi)
      throw std::logic_error("signature_candidates: even-mu pool does not cover " + std::to_string(hi));
    const auto& list = pool->with_signature(sig);
    for (auto it = std::upper_bound(list.begin(), list.end(), lo); it != list.end() && *it <= hi; ++it) {
      if (left->contains(*it)) {
        out.primes.push_back(*it);
        ++out.from_pool;
      }
    }
  }
  std::sort(out.primes.begin(), out.primes.end());
  out.primes.erase(std::unique(out.primes.begin(), out.primes.end()), out.primes.end());
  return out;
}

}  // namespace spsp::search
