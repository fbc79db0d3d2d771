#pragma once

#include "tcs/arith.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tcs {

/// h = 5^(2^n) and r = 2^(5^n), both mod 10^n.
///
/// h is the 10-adic idempotent that is 1 in Z_2 and 0 in Z_5. r is 0 in Z_2
/// and a primitive fourth root of unity in Z_5, so r^2 + 1 = h and r^5 = r,
/// but r itself is not idempotent.
struct IdempotentPair {
  unsigned n = 0;
  BigInt h;
  BigInt r;
};

/// Memoized; safe to call from several threads.
const IdempotentPair& idempotents(unsigned n);

/// Root numbering 1..13 for the nontrivial solutions of y^5 = y in Z_10:
///
///   1: 1-2h   2: r     3: h-r   4: -h-r   5: h-1   6: h    7: -h
///   8: 1-h    9: r-h  10: h+r  11: -r    12: 2h-1 13: -1
inline constexpr int kRootCount = 13;

/// Last digit of root i.
unsigned root_last_digit(int root_index);

/// Root indices ending in s1, primed root first.
std::vector<int> roots_ending_in(unsigned s1);

struct DecadicResidue {
  int root_index = 0;
  unsigned n = 0;
  BigInt value;  // < 10^n

  /// s_1..s_n, least significant first.
  std::vector<unsigned> digits() const;
  /// Zero-padded n-digit decimal string.
  std::string to_string() const;
};

DecadicResidue root_residue(int root_index, unsigned n);

/// Digit s_position (1-based, least significant first) of root i.
unsigned root_digit(int root_index, unsigned position);

/// The two square roots of -1 modulo 5^n, ascending.
std::pair<BigInt, BigInt> sqrt_minus_one_mod5(unsigned n);

/// (2^(4*5^n+1) - 1) mod 10^n, the power form of root 1.
BigInt alpha1_power_form(unsigned n);

/// Smallest residues below 10^n, per coprime last digit, whose constant
/// speed is at least n.
std::map<unsigned, BigInt> min_coprime_candidates(unsigned n);

}  // namespace tcs
