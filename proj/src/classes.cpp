#include "tcs/classes.hpp"

#include "tcs/decadic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace tcs {

namespace {

BigInt pow_ui(unsigned base, unsigned e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

unsigned mod_ui(const BigInt& x, unsigned m) {
  return static_cast<unsigned>(mpz_fdiv_ui(x.get_mpz_t(), m));
}

// sin and cos of quarter * pi/2, exactly.
struct QuarterTurn {
  int sin;
  int cos;
};

QuarterTurn quarter_turn(unsigned quarter) {
  static constexpr QuarterTurn kTable[4] = {{0, 1}, {1, 0}, {0, -1}, {-1, 0}};
  return kTable[quarter % 4];
}

// (-1)^(n(n-1)/2), which is i^(n(n-1)).
int i_power_sign(unsigned n) {
  const unsigned long long half = static_cast<unsigned long long>(n) * (n - 1) / 2;
  return half % 2 == 0 ? 1 : -1;
}

int minus_one_pow(unsigned e) { return e % 2 == 0 ? 1 : -1; }

void check_digit(unsigned s1) {
  if (s1 < 1 || s1 > 9) throw std::invalid_argument("last digit must be in 1..9");
}

// Smallest base ending in 2 or 8 with constant speed >= n: the root reduced
// mod 2*5^n.
BigInt even_root_residue(unsigned s1, unsigned n) {
  const int root = s1 == 2 ? 2 : 11;
  return root_residue(root, n).value % Modulus::of(1, n).value();
}

BigInt even_min_base(unsigned s1, unsigned n) {
  return even_root_residue(s1, n) + lambda_flag(s1, n).value * Modulus::of(1, n).value();
}

// Family around a coprime root: root mod 10^n plus j * 10^n, where j must not
// repeat the root's next digit.
ProgressionFamily root_family(int root, unsigned n) {
  return {root_residue(root, n).value, Modulus::pow10(n).value(), 10,
          {root_digit(root, n + 1)}};
}

ClassSpec build_class_spec(unsigned s1, unsigned n) {
  const BigInt ten_n = Modulus::pow10(n).value();
  const BigInt five_n = pow_ui(5, n);
  ClassSpec spec{s1, n, {}};
  auto& f = spec.families;
  switch (s1) {
    case 1:
      f.push_back({alpha1_power_form(n), ten_n, 10, {root_digit(1, n + 1)}});
      f.push_back({ten_n + 1, ten_n, 10, {9}});
      break;
    case 9:
      f.push_back(root_family(12, n));
      f.push_back({ten_n - 1, ten_n, 10, {9}});
      break;
    case 3:
      f.push_back(root_family(3, n));
      f.push_back(root_family(4, n));
      break;
    case 7:
      f.push_back(root_family(9, n));
      f.push_back(root_family(10, n));
      break;
    case 5: {
      const auto bases = a5_bases_trig(n);
      const BigInt step = 10 * pow_ui(2, n);
      f.push_back({bases[0], step, 1, {}});
      f.push_back({bases[1], step, 1, {}});
      std::sort(f.begin(), f.end(),
                [](const auto& x, const auto& y) { return x.base < y.base; });
      break;
    }
    case 4:
      f.push_back({five_n - 1, 2 * five_n, 5, {2}});
      break;
    case 6:
      f.push_back({five_n + 1, 2 * five_n, 5, {2}});
      break;
    case 2:
    case 8: {
      const BigInt step = 2 * five_n;
      const BigInt base = even_min_base(s1, n);
      BigInt diff = even_min_base(s1, n + 1) - base;
      // both are the same residue mod 2*5^n, so the division is exact
      const BigInt k = diff / step;
      f.push_back({base, step, 5, {mod_ui(k, 5)}});
      break;
    }
  }
  return spec;
}

}  // namespace

// ---- ProgressionFamily ------------------------------------------------------

bool ProgressionFamily::allows(const BigInt& k) const {
  if (multiplier_modulus <= 1) return true;
  const unsigned r = mod_ui(k, multiplier_modulus);
  return std::find(excluded.begin(), excluded.end(), r) == excluded.end();
}

bool ProgressionFamily::contains(const BigInt& a) const {
  if (a < base) return false;
  BigInt q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), BigInt(a - base).get_mpz_t(), step.get_mpz_t());
  return r == 0 && allows(q);
}

BigInt ProgressionFamily::next_allowed(BigInt k0) const {
  for (unsigned i = 0; i <= multiplier_modulus; ++i, ++k0)
    if (allows(k0)) return k0;
  throw std::logic_error("progression family excludes every multiplier");
}

BigInt ProgressionFamily::first_index_at_least(const BigInt& lower) const {
  if (lower <= base) return next_allowed(0);
  BigInt k;
  mpz_cdiv_q(k.get_mpz_t(), BigInt(lower - base).get_mpz_t(), step.get_mpz_t());
  return next_allowed(k);
}

bool ProgressionFamily::all_divisible_by(unsigned p) const {
  return mod_ui(base, p) == 0 && mod_ui(step, p) == 0;
}

// ---- ClassSpec --------------------------------------------------------------

bool ClassSpec::contains(const BigInt& a) const {
  return std::any_of(families.begin(), families.end(),
                     [&](const auto& f) { return f.contains(a); });
}

BigInt ClassSpec::min() const {
  if (families.empty()) throw std::domain_error("empty speed class");
  BigInt best = families.front().min();
  for (const auto& f : families) best = std::min(best, f.min());
  return best;
}

std::vector<BigInt> ClassSpec::first(std::size_t count) const {
  std::vector<BigInt> out;
  FamilyMerger merger(families);
  while (out.size() < count && !merger.empty()) out.push_back(merger.next());
  return out;
}

FamilyMerger::FamilyMerger(std::vector<ProgressionFamily> families, const BigInt& lower)
    : families_(std::move(families)) {
  for (std::size_t i = 0; i < families_.size(); ++i) {
    BigInt k = families_[i].first_index_at_least(lower);
    heap_.push({families_[i].element(k), k, i});
  }
}

BigInt FamilyMerger::next() {
  Cursor top = heap_.top();
  heap_.pop();
  const auto& f = families_[top.family];
  BigInt k = f.next_allowed(top.k + 1);
  heap_.push({f.element(k), k, top.family});
  return top.value;
}

// ---- classes ----------------------------------------------------------------

const std::array<unsigned, 16>& v1_residues() {
  static constexpr std::array<unsigned, 16> kSet = {2,  3,  4,  6,  8,  9,  11, 12,
                                                    13, 14, 16, 17, 19, 21, 22, 23};
  return kSet;
}

bool has_unit_speed(const BigInt& a) {
  if (mod_ui(a, 10) == 0) return false;
  const unsigned r = mod_ui(a, 25);
  const auto& set = v1_residues();
  return std::find(set.begin(), set.end(), r) != set.end();
}

const ClassSpec& class_spec(unsigned s1, unsigned n) {
  check_digit(s1);
  if (n < 2) throw std::invalid_argument("use v1_residues for n = 1");
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::unique_ptr<const ClassSpec>> cache;
  const auto key = std::make_pair(s1, n);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto spec = std::make_unique<const ClassSpec>(build_class_spec(s1, n));
  std::lock_guard lock(mu);
  return *cache.try_emplace(key, std::move(spec)).first->second;
}

ClassSpec speed_class(unsigned s1, unsigned n) {
  check_digit(s1);
  if (n >= 2) return class_spec(s1, n);
  if (n == 0) throw std::invalid_argument("speed 0 belongs to a = 1 only");
  ClassSpec spec{s1, 1, {}};
  for (unsigned r = s1; r < 50; r += 10)
    if (has_unit_speed(r)) spec.families.push_back({r, 50, 1, {}});
  return spec;
}

LambdaFlag lambda_flag(unsigned s1, unsigned n) {
  if (s1 != 2 && s1 != 8) throw std::invalid_argument("lambda correction is for s1 in {2, 8}");
  if (n < 1) throw std::invalid_argument("need n >= 1");
  const bool same = even_root_residue(s1, n) == even_root_residue(s1, n + 1);
  return {s1, n, same ? 1u : 0u};
}

BigInt min_base_class(unsigned s1, unsigned n) {
  if (n == 0) throw std::invalid_argument("speed 0 belongs to a = 1 only");
  return speed_class(s1, n).min();
}

BigInt min_base_closed(unsigned n) {
  return pow_ui(2, n) * (minus_one_pow(n - 1) + 2) - i_power_sign(n);
}

BigInt min_base_piecewise(unsigned n) {
  const QuarterTurn t = quarter_turn(n);
  const BigInt p = pow_ui(2, n);
  if (n % 4 == 2 || n % 4 == 3) return p * (5 + 2 * t.sin + 4 * t.cos) + 1;
  return p * (5 - 2 * t.sin - 4 * t.cos) - 1;
}

BigInt min_base_pair_min(unsigned n) {
  const QuarterTurn t = quarter_turn(n - 1);
  const BigInt p = pow_ui(2, n);
  BigInt first = p * (2 * t.cos - 4 * t.sin + 5) + 1;
  BigInt second = p * (4 * t.sin - 2 * t.cos + 5) - 1;
  return std::min(first, second);
}

BigInt min_base(unsigned n) {
  if (n == 0) return 1;
  if (n == 1) return 2;
  BigInt closed = min_base_closed(n);
  if (closed != min_base_piecewise(n))
    throw std::logic_error("closed and piecewise minimal-base forms disagree at n = " +
                           std::to_string(n));
  return closed;
}

std::array<BigInt, 2> a5_bases_trig(unsigned n) {
  if (n < 2) throw std::invalid_argument("A_5(n) needs n >= 2");
  const QuarterTurn t = quarter_turn(n);
  const BigInt p = pow_ui(2, n);
  return {p * (5 + 2 * t.sin + 4 * t.cos) + 1, p * (5 - 2 * t.sin - 4 * t.cos) - 1};
}

std::array<BigInt, 2> a5_bases_closed(unsigned n) {
  if (n < 2) throw std::invalid_argument("A_5(n) needs n >= 2");
  const BigInt p = pow_ui(2, n);
  const int s = i_power_sign(n);
  return {p * (minus_one_pow(n - 1) + 2) - s, p * (minus_one_pow(n) + 8) + s};
}

std::vector<BigInt> a5_set(unsigned n, std::size_t count) {
  const auto bases = a5_bases_closed(n);
  const BigInt step = 10 * pow_ui(2, n);
  ClassSpec spec{5, n, {{bases[0], step, 1, {}}, {bases[1], step, 1, {}}}};
  return spec.first(count);
}

unsigned valuation_bound(const TetrationBase& a) {
  const BigInt& x = a.value();
  if (x < 2) throw std::invalid_argument("valuation bound needs a >= 2");
  const BigInt sq = x * x;
  switch (a.last_digit()) {
    case 1:
    case 9:
      return std::min(nu(5, sq - 1), nu(2, sq - 1));
    case 3:
    case 7:
      return std::min(nu(5, sq + 1), nu(2, sq - 1));
    case 2:
    case 8:
      return nu(5, sq + 1);
    case 4:
    case 6:
      return nu(5, sq - 1);
    default:
      return nu(2, sq - 1);
  }
}

unsigned speed_closed_form(const TetrationBase& a) {
  if (a.is_one()) return 0;
  const BigInt& x = a.value();
  const BigInt sq = x * x;
  const unsigned s1 = a.last_digit();
  if (s1 == 5) return nu(2, sq - 1) - 1;
  if (s1 % 2 == 0) return nu(5, sq * sq - 1);
  return std::min(nu(5, sq * sq - 1), nu(2, sq - 1) - 1);
}

unsigned speed_by_membership(const TetrationBase& a) {
  if (a.is_one()) return 0;
  if (has_unit_speed(a.value())) return 1;
  const unsigned bound = valuation_bound(a);
  for (unsigned n = 2; n <= bound; ++n)
    if (class_spec(a.last_digit(), n).contains(a.value())) return n;
  throw std::logic_error("base " + a.value().get_str() + " lies in no speed class");
}

unsigned speed_by_formula(const TetrationBase& a, std::vector<FormulaDiscrepancy>* discrepancies) {
  const unsigned closed = speed_closed_form(a);
  const unsigned member = speed_by_membership(a);
  if (closed != member && discrepancies) discrepancies->push_back({a.value(), closed, member});
  return member;
}

}  // namespace tcs
