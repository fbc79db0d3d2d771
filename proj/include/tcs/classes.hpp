#pragma once

#include "tcs/arith.hpp"
#include "tcs/speed.hpp"

#include <array>
#include <cstddef>
#include <queue>
#include <vector>

namespace tcs {

/// { base + k * step : k >= 0, k mod multiplier_modulus not in excluded }.
struct ProgressionFamily {
  BigInt base;
  BigInt step;
  unsigned multiplier_modulus = 1;
  std::vector<unsigned> excluded;

  bool allows(const BigInt& k) const;
  BigInt element(const BigInt& k) const { return base + k * step; }
  bool contains(const BigInt& a) const;
  /// Smallest allowed k >= k0.
  BigInt next_allowed(BigInt k0) const;
  /// Smallest allowed k whose element is >= lower.
  BigInt first_index_at_least(const BigInt& lower) const;
  BigInt min() const { return element(next_allowed(0)); }
  /// True if p divides every element.
  bool all_divisible_by(unsigned p) const;
};

/// A_s1(n): bases ending in s1 whose constant speed is exactly n.
struct ClassSpec {
  unsigned s1 = 0;
  unsigned n = 0;
  std::vector<ProgressionFamily> families;

  bool contains(const BigInt& a) const;
  BigInt min() const;
  /// The `count` smallest members, ascending.
  std::vector<BigInt> first(std::size_t count) const;
};

/// Ascending merge of several progression families. Families are assumed
/// disjoint.
class FamilyMerger {
 public:
  explicit FamilyMerger(std::vector<ProgressionFamily> families, const BigInt& lower = 0);

  bool empty() const { return heap_.empty(); }
  const BigInt& peek() const { return heap_.top().value; }
  /// Pops the smallest remaining element.
  BigInt next();

 private:
  struct Cursor {
    BigInt value;
    BigInt k;
    std::size_t family;
  };
  struct Greater {
    bool operator()(const Cursor& x, const Cursor& y) const { return x.value > y.value; }
  };

  std::vector<ProgressionFamily> families_;
  std::priority_queue<Cursor, std::vector<Cursor>, Greater> heap_;
};

/// Exact family description of A_s1(n) for n >= 2. Throws
/// std::invalid_argument("use v1_residues for n = 1") for n < 2. Memoized.
const ClassSpec& class_spec(unsigned s1, unsigned n);

/// Residues mod 25 of the bases with constant speed 1.
const std::array<unsigned, 16>& v1_residues();
bool has_unit_speed(const BigInt& a);

/// A_s1(n) for any n >= 1; n = 1 is expressed as step-50 families built from
/// v1_residues.
ClassSpec speed_class(unsigned s1, unsigned n);

struct LambdaFlag {
  unsigned s1 = 0;
  unsigned n = 0;
  unsigned value = 0;
};

/// The 0/1 correction that turns root 2 (s1 = 2) or root 11 (s1 = 8) reduced
/// mod 2*5^n into the smallest base of exact speed n.
LambdaFlag lambda_flag(unsigned s1, unsigned n);

/// Smallest base ending in s1 with constant speed n (n >= 1).
BigInt min_base_class(unsigned s1, unsigned n);

/// The smallest base of constant speed n for every n >= 0.
BigInt min_base(unsigned n);

/// Independent closed forms of min_base for n >= 2.
BigInt min_base_pair_min(unsigned n);   // min of the two shifted-angle bases
BigInt min_base_piecewise(unsigned n);  // sin/cos piecewise form
BigInt min_base_closed(unsigned n);     // 2^n((-1)^(n-1)+2) - i^(n(n-1))

/// The two bases of A_5(n) from the sin/cos form and from the closed form.
std::array<BigInt, 2> a5_bases_trig(unsigned n);
std::array<BigInt, 2> a5_bases_closed(unsigned n);

/// First `count` elements of A_5(n), from the closed-form bases.
std::vector<BigInt> a5_set(unsigned n, std::size_t count);

/// Upper bound on V(a) from 2- and 5-adic valuations of a^2 - 1 / a^2 + 1.
unsigned valuation_bound(const TetrationBase& a);

/// V(a) from a^4 - 1 and a^2 - 1 valuations alone.
unsigned speed_closed_form(const TetrationBase& a);

/// V(a) as the unique n with a in A_s1(n).
unsigned speed_by_membership(const TetrationBase& a);

struct FormulaDiscrepancy {
  BigInt a;
  unsigned closed_form = 0;
  unsigned membership = 0;
};

/// V(a) by formula. The closed form is cross-checked against class
/// membership; on disagreement the membership value wins and the pair is
/// appended to `discrepancies` when given.
unsigned speed_by_formula(const TetrationBase& a,
                          std::vector<FormulaDiscrepancy>* discrepancies = nullptr);

}  // namespace tcs
