#pragma once

#include "tcs/arith.hpp"
#include "tcs/speed.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tcs {

struct SpeedMismatch {
  BigInt a;
  unsigned oracle = 0;
  unsigned formula = 0;
  unsigned membership = 0;
};

struct UnitSpeedMismatch {
  BigInt a;
  unsigned oracle = 0;
  bool in_residue_set = false;
};

/// V(a, b) differing from V(a) at a height where it was expected to agree.
struct HeightViolation {
  BigInt a;
  unsigned b = 0;
  int observed = 0;
  unsigned expected = 0;
};

struct SweepReport {
  BigInt a_min;
  BigInt a_max;
  unsigned precision = 0;  // starting precision; the oracle doubles it as needed
  std::uint64_t checked = 0;
  std::vector<SpeedMismatch> mismatches;
  std::vector<UnitSpeedMismatch> unit_speed_mismatches;  // a <= 2500 only
  std::vector<HeightViolation> conjecture_violations;

  bool passed() const { return mismatches.empty() && unit_speed_mismatches.empty(); }
};

inline constexpr unsigned kUnitSpeedCheckLimit = 2500;
inline constexpr unsigned kMinSweepDigits = 40;

/// Compares the oracle, the formula and class membership for every a in
/// [a_min, a_max] not divisible by 10. Bases outside the {0, 3, 7} classes
/// also have V(a, b) checked against V(a) for len(a) + 2 <= b up to the
/// height where the oracle settled. `threads` = 0 picks the hardware count.
/// Reports are identical for any thread count.
SweepReport sweep(std::uint64_t a_min, std::uint64_t a_max, unsigned digits,
                  unsigned threads = 0);

/// Bases a not congruent to 0, 3, 7 mod 10 with some V(a, b) != V(a) for
/// b >= len(a) + 2, checked up to three heights past stabilization.
std::vector<HeightViolation> probe_conjecture1(std::uint64_t a_min, std::uint64_t a_max);

/// Primes (k+1)*10^n - 1, 1 <= n <= n_max, 0 <= k <= k_max, with some
/// V(p, b) != V(p) for b >= 2, checked up to len(p) + 5.
std::vector<HeightViolation> probe_conjecture2(unsigned n_max, std::uint64_t k_max);

/// Thrown when a built-in fixture does not reproduce.
class FixtureMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// speed_profile(143^625, 6, 80); throws FixtureMismatch unless the speeds
/// are 0, 6, 6, 5, 4, 4.
SpeedProfile fixture_phase_shift();

struct FixtureResult {
  std::string name;
  std::string expected;
  std::string actual;
  bool passed = false;
};

struct Fixture {
  std::string name;
  std::function<FixtureResult()> run;
};

/// The worked examples: minimal class bases, specific speeds, and the
/// anomalous height profiles of 807, 499, 29509900499 and 143^625.
const std::vector<Fixture>& fixtures();

using Json = nlohmann::ordered_json;

/// Decimal string for every big value; key order is fixed.
Json to_json(const SweepReport& r);
Json to_json(const HeightViolation& v);
Json to_json(const FixtureResult& f);

}  // namespace tcs
