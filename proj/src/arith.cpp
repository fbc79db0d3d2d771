#include "tcs/arith.hpp"

#include <algorithm>

namespace tcs {

Modulus Modulus::of(unsigned twos, unsigned fives) {
  BigInt v2, v5;
  mpz_ui_pow_ui(v2.get_mpz_t(), 2, twos);
  mpz_ui_pow_ui(v5.get_mpz_t(), 5, fives);
  return Modulus(twos, fives, v2 * v5);
}

unsigned nu(unsigned p, const BigInt& x) {
  if (p != 2 && p != 5) throw std::invalid_argument("valuation base must be 2 or 5");
  if (x == 0) throw std::domain_error("valuation undefined for zero");
  if (p == 2) return static_cast<unsigned>(mpz_scan1(x.get_mpz_t(), 0));
  BigInt rest;
  mp_bitcnt_t e = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), BigInt(5).get_mpz_t());
  return static_cast<unsigned>(e);
}

unsigned decimal_valuation(const BigInt& x) {
  return std::min(nu(2, x), nu(5, x));
}

Modulus carmichael(const Modulus& m) {
  // lambda(2^i) = 1, 1, 2, 2^(i-2); lambda(5^j) = 4 * 5^(j-1)
  unsigned t = m.twos() <= 1 ? 0 : (m.twos() == 2 ? 1 : m.twos() - 2);
  unsigned f = 0;
  if (m.fives() >= 1) {
    t = std::max(t, 2u);
    f = m.fives() - 1;
  }
  return Modulus::of(t, f);
}

BigInt pow_mod(const BigInt& base, const BigInt& exp, const Modulus& m) {
  if (exp < 0) throw std::invalid_argument("negative exponent");
  BigInt out;
  BigInt b = base % m.value();
  if (b < 0) b += m.value();
  mpz_powm(out.get_mpz_t(), b.get_mpz_t(), exp.get_mpz_t(), m.value().get_mpz_t());
  return out;
}

BigInt pow_mod_lifted(const BigInt& base, const BigInt& exp_mod_lambda,
                      const Modulus& m) {
  if (m.is_one()) return 0;
  const Modulus lam = carmichael(m);
  BigInt e = exp_mod_lambda;
  // Any e' = E (mod lambda) with e' >= max prime exponent of m gives the same
  // power, coprime to m or not.
  if (e < m.max_exponent()) {
    BigInt gap = BigInt(m.max_exponent()) - e;
    BigInt steps = (gap + lam.value() - 1) / lam.value();
    e += steps * lam.value();
  }
  return pow_mod(base, e, m);
}

std::optional<BigInt> small_tower(const BigInt& a, unsigned height,
                                  const BigInt& cap) {
  if (a < 1) throw std::invalid_argument("tower base must be >= 1");
  BigInt v = 1;
  if (v > cap) return std::nullopt;
  if (a == 1) return v;
  const std::size_t cap_bits = mpz_sizeinbase(cap.get_mpz_t(), 2);
  for (unsigned h = 1; h <= height; ++h) {
    // a >= 2 so a^v >= 2^v; bail out before materialising huge powers
    if (v > cap_bits) return std::nullopt;
    BigInt next;
    mpz_pow_ui(next.get_mpz_t(), a.get_mpz_t(), v.get_ui());
    if (next > cap) return std::nullopt;
    v = std::move(next);
  }
  return v;
}

BigInt exact_tetration(const BigInt& a, unsigned height, unsigned cap_digits) {
  BigInt cap;
  mpz_ui_pow_ui(cap.get_mpz_t(), 10, cap_digits);
  auto v = small_tower(a, height, cap - 1);
  if (!v) throw std::overflow_error("exact tower too large");
  return *v;
}

unsigned digit_length(const BigInt& a) {
  if (a < 1) throw std::domain_error("digit length needs a positive integer");
  // mpz_sizeinbase may overshoot by one
  std::size_t len = mpz_sizeinbase(a.get_mpz_t(), 10);
  BigInt lo;
  mpz_ui_pow_ui(lo.get_mpz_t(), 10, len - 1);
  if (a < lo) --len;
  return static_cast<unsigned>(len);
}

std::vector<Modulus> lambda_chain(unsigned digits) {
  std::vector<Modulus> chain{Modulus::pow10(digits)};
  while (!chain.back().is_one()) chain.push_back(carmichael(chain.back()));
  return chain;
}

TowerLadder::TowerLadder(BigInt a, unsigned digits)
    : a_(std::move(a)), digits_(digits), chain_(lambda_chain(digits)) {
  if (a_ < 1) throw std::invalid_argument("tower base must be >= 1");
  if (digits_ < 1) throw std::invalid_argument("need at least one digit");
}

ClampedExponent TowerLadder::exponent(unsigned height, std::size_t level) {
  const Modulus& m = chain_.at(level);
  const BigInt cap = std::max(kClampThreshold, m.max_exponent());
  if (height == 0) throw std::invalid_argument("height 0 has no exponent");
  if (auto exact = small_tower(a_, height - 1, cap)) return {*exact, false};
  if (m.is_one()) return {0, true};
  return {at(height - 1, level + 1), true};
}

const BigInt& TowerLadder::at(unsigned height, std::size_t level) {
  const auto key = std::make_pair(height, level);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const Modulus& m = chain_.at(level);
  BigInt value;
  if (m.is_one()) {
    value = 0;
  } else if (height == 0) {
    value = 1;
  } else if (height == 1) {
    value = a_ % m.value();
  } else {
    ClampedExponent e = exponent(height, level);
    value = e.is_large ? pow_mod_lifted(a_, e.residue, m) : pow_mod(a_, e.residue, m);
  }
  return memo_.emplace(key, std::move(value)).first->second;
}

BigInt tower_residue(const BigInt& a, unsigned height, unsigned digits) {
  if (height < 1) throw std::invalid_argument("height must be >= 1");
  TowerLadder ladder(a, digits);
  return ladder.residue(height);
}

}  // namespace tcs
