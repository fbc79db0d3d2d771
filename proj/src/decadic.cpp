#include "tcs/decadic.hpp"

#include <memory>
#include <mutex>
#include <stdexcept>

namespace tcs {

namespace {

// base^(x^n) mod m for x^n >= m.max_exponent(), reducing x^n mod lambda(m).
BigInt pow_tower2(unsigned base, unsigned x, unsigned n, const Modulus& m) {
  if (m.is_one()) return 0;
  const Modulus lam = carmichael(m);
  BigInt e = pow_mod(x, n, lam);
  return pow_mod_lifted(base, e, m);
}

BigInt reduce(const BigInt& x, const BigInt& m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

const IdempotentPair& idempotents(unsigned n) {
  if (n < 1) throw std::invalid_argument("idempotents need n >= 1");
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<const IdempotentPair>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return *it->second;
  }
  const Modulus m = Modulus::pow10(n);
  auto pair = std::make_unique<const IdempotentPair>(
      IdempotentPair{n, pow_tower2(5, 2, n, m), pow_tower2(2, 5, n, m)});
  std::lock_guard lock(mu);
  return *cache.try_emplace(n, std::move(pair)).first->second;
}

unsigned root_last_digit(int root_index) {
  static constexpr unsigned kLast[kRootCount] = {1, 2, 3, 3, 4, 5, 5, 6, 7, 7, 8, 9, 9};
  if (root_index < 1 || root_index > kRootCount)
    throw std::out_of_range("root index must be in 1..13");
  return kLast[root_index - 1];
}

std::vector<int> roots_ending_in(unsigned s1) {
  std::vector<int> out;
  for (int i = 1; i <= kRootCount; ++i)
    if (root_last_digit(i) == s1) out.push_back(i);
  return out;
}

DecadicResidue root_residue(int root_index, unsigned n) {
  root_last_digit(root_index);  // range check
  const auto& [_, h, r] = idempotents(n);
  const Modulus mod = Modulus::pow10(n);
  const BigInt& m = mod.value();
  BigInt v;
  switch (root_index) {
    case 1: v = 1 - 2 * h; break;
    case 2: v = r; break;
    case 3: v = h - r; break;
    case 4: v = -h - r; break;
    case 5: v = h - 1; break;
    case 6: v = h; break;
    case 7: v = -h; break;
    case 8: v = 1 - h; break;
    case 9: v = r - h; break;
    case 10: v = h + r; break;
    case 11: v = -r; break;
    case 12: v = 2 * h - 1; break;
    default: v = -1; break;
  }
  return {root_index, n, reduce(v, m)};
}

std::vector<unsigned> DecadicResidue::digits() const {
  std::vector<unsigned> out;
  out.reserve(n);
  BigInt v = value;
  for (unsigned i = 0; i < n; ++i) {
    out.push_back(static_cast<unsigned>(mpz_fdiv_ui(v.get_mpz_t(), 10)));
    v /= 10;
  }
  return out;
}

std::string DecadicResidue::to_string() const {
  std::string s = value.get_str();
  if (s.size() < n) s.insert(0, n - s.size(), '0');
  return s;
}

unsigned root_digit(int root_index, unsigned position) {
  if (position < 1) throw std::invalid_argument("digit positions start at 1");
  return root_residue(root_index, position).digits().back();
}

std::pair<BigInt, BigInt> sqrt_minus_one_mod5(unsigned n) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  const Modulus m5 = Modulus::of(0, n);
  BigInt x = idempotents(n).r % m5.value();
  BigInt y = m5.value() - x;
  if (y < x) std::swap(x, y);
  return {x, y};
}

BigInt alpha1_power_form(unsigned n) {
  const Modulus m = Modulus::pow10(n);
  // exponent 4*5^n + 1 reduced mod lambda(10^n); it always exceeds n
  const Modulus lam = carmichael(m);
  BigInt e = (4 * pow_mod(5, n, lam) + 1) % lam.value();
  return reduce(pow_mod_lifted(2, e, m) - 1, m.value());
}

std::map<unsigned, BigInt> min_coprime_candidates(unsigned n) {
  if (n < 2) throw std::invalid_argument("candidates need n >= 2");
  auto v = [n](int i) { return root_residue(i, n).value; };
  return {
      {1, v(1)},
      {3, std::min(v(3), v(4))},
      {7, std::min(v(10), v(9))},
      {9, v(12)},
  };
}

}  // namespace tcs
