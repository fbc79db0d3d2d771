#include "tcs/speed.hpp"

#include <algorithm>
#include <string>

namespace tcs {

TetrationBase::TetrationBase(BigInt a) : a_(std::move(a)) {
  if (a_ < 1) throw std::invalid_argument("tetration base must be >= 1");
  BigInt r = a_ % 10;
  if (r == 0) throw std::domain_error("undefined congruence speed");
  s1_ = static_cast<unsigned>(r.get_ui());
  length_ = digit_length(a_);
}

std::vector<int> SpeedProfile::speeds() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.speed);
  return out;
}

unsigned initial_precision(const TetrationBase& a) {
  return std::max(64u, 8 * (a.length() + 8));
}

namespace {

// Frozen-digit counts from one ladder; nu(b) compares heights b and b+1.
class FrozenCounter {
 public:
  FrozenCounter(const TetrationBase& a, unsigned digits)
      : ladder_(a.value(), digits), modulus_(Modulus::pow10(digits)) {}

  FrozenDigits operator()(unsigned height) {
    BigInt diff = ladder_.residue(height + 1) - ladder_.residue(height);
    diff %= modulus_.value();
    if (diff == 0) return {ladder_.digits(), true};
    return {decimal_valuation(diff), false};
  }

  unsigned digits() const { return ladder_.digits(); }

  bool exhausted(const FrozenDigits& f) const {
    return f.saturated || f.count + kPrecisionMargin >= ladder_.digits();
  }

 private:
  TowerLadder ladder_;
  Modulus modulus_;
};

[[noreturn]] void throw_precision(unsigned digits) {
  throw PrecisionError("increase N: " + std::to_string(digits) +
                       " working digits are not enough");
}

}  // namespace

FrozenDigits frozen_digits(const TetrationBase& a, unsigned height, unsigned digits) {
  if (digits < 1) throw std::invalid_argument("need at least one digit");
  FrozenCounter nu(a, digits);
  return nu(height);
}

int speed_at_height(const TetrationBase& a, unsigned height, unsigned digits) {
  if (height < 1) throw std::invalid_argument("height must be >= 1");
  if (a.is_one()) return 0;
  FrozenCounter nu(a, digits);
  FrozenDigits cur = nu(height);
  FrozenDigits prev = nu(height - 1);
  if (nu.exhausted(cur) || nu.exhausted(prev)) throw_precision(digits);
  return static_cast<int>(cur.count) - static_cast<int>(prev.count);
}

SpeedProfile speed_profile(const TetrationBase& a, unsigned max_height, unsigned digits) {
  if (max_height < 1) throw std::invalid_argument("max height must be >= 1");
  SpeedProfile p{a, digits, {}, std::nullopt, a.is_one()};
  if (a.is_one()) {
    for (unsigned b = 1; b <= max_height; ++b) p.entries.push_back({b, {digits, true}, 0});
    p.constant_speed = 0;
    return p;
  }
  FrozenCounter nu(a, digits);
  FrozenDigits prev = nu(0);
  if (nu.exhausted(prev)) throw_precision(digits);
  for (unsigned b = 1; b <= max_height; ++b) {
    FrozenDigits cur = nu(b);
    if (nu.exhausted(cur)) throw_precision(digits);
    p.entries.push_back({b, cur, static_cast<int>(cur.count) - static_cast<int>(prev.count)});
    prev = cur;
  }
  const unsigned need = a.length() + 3;
  const auto& e = p.entries;
  if (max_height >= need && max_height >= 4) {
    const int v = e[max_height - 1].speed;
    if (e[max_height - 2].speed == v && e[max_height - 3].speed == v)
      p.constant_speed = static_cast<unsigned>(v);
  }
  return p;
}

StabilizedSpeed stabilized_speed(const TetrationBase& a, unsigned initial_digits,
                                 bool fixed_precision) {
  if (a.is_one()) return {0, 1, initial_digits, {}};
  unsigned digits = initial_digits ? initial_digits : initial_precision(a);
  const unsigned need = std::max(4u, a.length() + 3);
  // The rule is a heuristic; past this many heights something is off.
  const unsigned give_up = need + 64;

  for (;;) {
    FrozenCounter nu(a, digits);
    StabilizedSpeed out{0, 0, digits, {}};
    bool restart = false;
    FrozenDigits prev = nu(0);
    if (nu.exhausted(prev)) restart = true;
    for (unsigned b = 1; !restart && b <= give_up; ++b) {
      FrozenDigits cur = nu(b);
      if (nu.exhausted(cur)) {
        restart = true;
        break;
      }
      out.entries.push_back({b, cur, static_cast<int>(cur.count) - static_cast<int>(prev.count)});
      prev = cur;
      if (b >= need) {
        const int v = out.entries[b - 1].speed;
        if (out.entries[b - 2].speed == v && out.entries[b - 3].speed == v) {
          out.value = static_cast<unsigned>(v);
          out.stable_from = b;
          return out;
        }
      }
    }
    if (!restart) throw std::runtime_error("congruence speed did not stabilize");
    if (fixed_precision) throw_precision(digits);
    digits *= 2;
  }
}

SpeedProfile speed_profile_adaptive(const TetrationBase& a, unsigned max_height,
                                    unsigned initial_digits) {
  unsigned digits = initial_digits ? initial_digits : initial_precision(a);
  for (;;) {
    try {
      return speed_profile(a, max_height, digits);
    } catch (const PrecisionError&) {
      digits *= 2;
    }
  }
}

unsigned constant_speed(const TetrationBase& a) { return stabilized_speed(a).value; }

}  // namespace tcs
