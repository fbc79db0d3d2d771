#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tcs {

using BigInt = mpz_class;

/// Raised when a residue computation runs out of working digits.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A modulus of the form 2^twos * 5^fives (10^n, 2*5^n, 10*2^n, ...).
class Modulus {
 public:
  static Modulus of(unsigned twos, unsigned fives);
  static Modulus pow10(unsigned n) { return of(n, n); }

  unsigned twos() const { return twos_; }
  unsigned fives() const { return fives_; }
  const BigInt& value() const { return value_; }

  /// Largest prime exponent; a^E mod m is periodic in E from here on.
  unsigned max_exponent() const { return twos_ > fives_ ? twos_ : fives_; }
  bool is_one() const { return twos_ == 0 && fives_ == 0; }

  friend bool operator==(const Modulus& x, const Modulus& y) {
    return x.twos_ == y.twos_ && x.fives_ == y.fives_;
  }

 private:
  Modulus(unsigned twos, unsigned fives, BigInt value)
      : twos_(twos), fives_(fives), value_(std::move(value)) {}

  unsigned twos_;
  unsigned fives_;
  BigInt value_;
};

/// Tower exponent reduced modulo lambda(m), with a flag recording whether the
/// true exponent reached the clamp threshold.
struct ClampedExponent {
  BigInt residue;
  bool is_large = false;
};

/// Exponents at or below this are always handled exactly.
inline constexpr unsigned kClampThreshold = 64;

/// p-adic valuation for p in {2, 5}. Throws std::domain_error for x = 0.
unsigned nu(unsigned p, const BigInt& x);

/// Carmichael's lambda of 2^i * 5^j, which is again of that form.
Modulus carmichael(const Modulus& m);

/// base^exp mod m; exp = 0 gives 1 mod m.
BigInt pow_mod(const BigInt& base, const BigInt& exp, const Modulus& m);

/// base^E mod m where only E mod lambda(m) is known and the true E is at least
/// m.max_exponent(). The residue is lifted into the periodic range first.
BigInt pow_mod_lifted(const BigInt& base, const BigInt& exp_mod_lambda,
                      const Modulus& m);

/// The last `digits` decimal digits of the tower a^a^...^a of the given height.
BigInt tower_residue(const BigInt& a, unsigned height, unsigned digits);

/// Exact ^height a. Throws std::overflow_error("exact tower too large") when
/// the value would exceed cap_digits decimal digits.
BigInt exact_tetration(const BigInt& a, unsigned height, unsigned cap_digits);

/// Exact ^height a when it does not exceed cap, nullopt otherwise.
/// height 0 is the empty tower, 1.
std::optional<BigInt> small_tower(const BigInt& a, unsigned height,
                                  const BigInt& cap);

/// Number of decimal digits of a >= 1.
unsigned digit_length(const BigInt& a);

/// Number of trailing decimal zeros of x != 0.
unsigned decimal_valuation(const BigInt& x);

/// The lambda chain 10^n, lambda(10^n), ..., 1.
std::vector<Modulus> lambda_chain(unsigned digits);

/// Evaluates ^h a modulo every entry of the lambda chain of 10^digits,
/// memoizing each (height, level) pair. A profile over heights 1..B costs
/// about B^2/2 modular powers since level k is only needed up to height B-k.
class TowerLadder {
 public:
  TowerLadder(BigInt a, unsigned digits);

  /// ^height a mod 10^digits.
  const BigInt& residue(unsigned height) { return at(height, 0); }

  /// ^height a mod chain[level].
  const BigInt& at(unsigned height, std::size_t level);

  /// The exponent of ^height a, i.e. ^(height-1) a, clamped for chain[level].
  ClampedExponent exponent(unsigned height, std::size_t level);

  unsigned digits() const { return digits_; }
  const BigInt& base() const { return a_; }

 private:
  BigInt a_;
  unsigned digits_;
  std::vector<Modulus> chain_;
  std::map<std::pair<unsigned, std::size_t>, BigInt> memo_;
};

}  // namespace tcs
