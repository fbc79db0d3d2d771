#pragma once

#include "tcs/arith.hpp"

#include <optional>
#include <vector>

namespace tcs {

/// A tetration base a >= 1 that is not a multiple of 10.
class TetrationBase {
 public:
  /// Throws std::domain_error("undefined congruence speed") for multiples of
  /// 10 and std::invalid_argument for a < 1.
  explicit TetrationBase(BigInt a);

  const BigInt& value() const { return a_; }
  unsigned last_digit() const { return s1_; }
  unsigned length() const { return length_; }
  bool is_one() const { return a_ == 1; }

 private:
  BigInt a_;
  unsigned s1_;
  unsigned length_;
};

/// nu(b): how many trailing digits ^b a and ^(b+1) a share. When `saturated`
/// is set the two residues agree on all `count` working digits, i.e. the
/// true value is at least `count`.
struct FrozenDigits {
  unsigned count = 0;
  bool saturated = false;
};

struct HeightEntry {
  unsigned height = 0;
  FrozenDigits frozen;
  int speed = 0;  // V(a, height) = nu(height) - nu(height - 1)
};

struct SpeedProfile {
  TetrationBase base;
  unsigned precision_digits = 0;
  std::vector<HeightEntry> entries;  // heights 1..b_max
  /// Set when the recorded heights reach the stabilization rule; always 0 for
  /// a = 1.
  std::optional<unsigned> constant_speed;
  /// a = 1: every modulus freezes, nu is unbounded at every height.
  bool unbounded = false;

  std::vector<int> speeds() const;
};

/// Safety margin: nu within this many digits of N counts as exhausted.
inline constexpr unsigned kPrecisionMargin = 8;

/// Starting precision used by constant_speed.
unsigned initial_precision(const TetrationBase& a);

/// nu(b) at working precision N. The empty tower ^0 a is 1, so nu(0) counts
/// the digits a shares with 1.
FrozenDigits frozen_digits(const TetrationBase& a, unsigned height, unsigned digits);

/// V(a, b) for b >= 1 at fixed precision. Throws PrecisionError("increase N")
/// if nu(b) comes within kPrecisionMargin of N.
int speed_at_height(const TetrationBase& a, unsigned height, unsigned digits);

/// Heights 1..b_max at fixed precision. Same precision contract as
/// speed_at_height, except that a = 1 yields an all-saturated profile.
SpeedProfile speed_profile(const TetrationBase& a, unsigned max_height, unsigned digits);

/// speed_profile, doubling the precision (from `initial_digits`, 0 selects
/// initial_precision) until it suffices.
SpeedProfile speed_profile_adaptive(const TetrationBase& a, unsigned max_height,
                                    unsigned initial_digits = 0);

/// Everything constant_speed looked at: the heights it walked, the precision
/// it settled on, and the speed it settled on.
struct StabilizedSpeed {
  unsigned value = 0;
  unsigned stable_from = 0;  // the height at which the rule was satisfied
  unsigned precision_digits = 0;
  std::vector<HeightEntry> entries;
};

/// V(a) by definition. Heights are walked from 2 upward until three
/// consecutive speeds agree at a height b >= len(a) + 3; precision starts at
/// `initial_digits` (0 selects initial_precision) and doubles whenever nu gets
/// within the margin, unless `fixed_precision` is set, in which case running
/// out throws PrecisionError.
StabilizedSpeed stabilized_speed(const TetrationBase& a, unsigned initial_digits = 0,
                                 bool fixed_precision = false);

/// V(a), with V(1) = 0.
unsigned constant_speed(const TetrationBase& a);

}  // namespace tcs
