#pragma once

#include "tcs/arith.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tcs {

enum class PrimalityMethod {
  DeterministicSmall,  // Miller-Rabin with a fixed witness set, x < 2^64
  Probabilistic,       // Baillie-PSW plus random-base Miller-Rabin
};

std::string to_string(PrimalityMethod m);
PrimalityMethod parse_primality_method(const std::string& s);

struct PrimalityResult {
  bool prime = false;
  PrimalityMethod method = PrimalityMethod::DeterministicSmall;
};

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t x);

PrimalityResult primality(const BigInt& x);
inline bool is_prime(const BigInt& x) { return primality(x).prime; }

/// (k+1) * 10^n - 1: at least n trailing nines.
struct RepnineForm {
  BigInt k;
  unsigned n = 0;
  BigInt value;

  static RepnineForm make(const BigInt& k, unsigned n);
  /// (2m+1) * 10^n - 1.
  static RepnineForm odd_multiplier(const BigInt& m, unsigned n);
};

/// Result of the repnine speed rule: either exactly `n`, or strictly more.
struct RepnineSpeed {
  unsigned n = 0;
  bool exceeds = false;  // true means "> n"

  friend bool operator==(const RepnineSpeed&, const RepnineSpeed&) = default;
};

/// Speed of (k+1)*10^n - 1 from k alone: n iff k != 9 (mod 10) for n >= 2,
/// 1 iff k != 4 (mod 5) for n = 1.
RepnineSpeed lemma1_speed(const BigInt& k, unsigned n);

struct PrimeSpeedRecord {
  unsigned n = 0;
  BigInt q;
  PrimalityMethod method = PrimalityMethod::DeterministicSmall;
  bool oracle_checked = false;
};

/// Thrown when the candidate budget runs out. `resume_after` is the last
/// candidate examined; passing it back continues the search.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(unsigned n, BigInt resume_after, std::uint64_t examined);
  unsigned n;
  BigInt resume_after;
  std::uint64_t examined;
};

struct PrimeSearchOptions {
  std::uint64_t budget = 10'000'000;
  std::optional<BigInt> resume_after;
  /// Confirm V(q) = n with the definitional oracle when q has at most this
  /// many digits (0 disables the oracle check).
  unsigned oracle_digit_limit = 24;
};

/// q_n: the smallest prime with constant speed n. Walks A_1(n)..A_9(n) in
/// ascending merged order; streams whose members are all even or all
/// multiples of 5 only ever offer 2 or 5.
PrimeSpeedRecord smallest_prime_with_speed(unsigned n, const PrimeSearchOptions& opts = {});

/// Checks a record without searching: primality, formula speed, and the
/// oracle speed when within `oracle_digit_limit`.
bool verify_record(const PrimeSpeedRecord& r, unsigned oracle_digit_limit = 24);

struct QTableRow {
  PrimeSpeedRecord record;
  bool below_previous = false;  // q_n < q_(n-1)
};

/// Rows for 1..n_max plus `extra`, ascending by n. Flags need q_(n-1); it is
/// computed on the side when not itself requested.
std::vector<QTableRow> q_table(unsigned n_max, const std::vector<unsigned>& extra = {},
                               const PrimeSearchOptions& opts = {});

/// (isqrt(5^n - 1) + 1, 9*10^n - 1), optionally tightened by a known prime of
/// speed n.
std::pair<BigInt, BigInt> q_bounds(unsigned n, const std::optional<BigInt>& witness = std::nullopt);

/// First `count` primes (k+1)*10^n - 1 of speed exactly n by the repnine
/// rule, k ascending.
std::vector<BigInt> repnine_primes(unsigned n, std::size_t count);
/// First `count` primes (2m+1)*10^n - 1, m ascending.
std::vector<BigInt> odd_repnine_primes(unsigned n, std::size_t count);
/// First `count` primes congruent to 29 mod 100.
std::vector<BigInt> primes_29_mod_100(std::size_t count);

}  // namespace tcs
