#include "tcs/verify.hpp"

#include "tcs/classes.hpp"
#include "tcs/primes.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace tcs {

namespace {

bool skips_conjecture1(const BigInt& a) {
  const unsigned long s1 = mpz_fdiv_ui(a.get_mpz_t(), 10);
  return s1 == 0 || s1 == 3 || s1 == 7 || a == 1;
}

void check_heights(const BigInt& a, const std::vector<HeightEntry>& entries, unsigned from,
                   unsigned expected, std::vector<HeightViolation>& out) {
  for (const auto& e : entries)
    if (e.height >= from && e.speed != static_cast<int>(expected))
      out.push_back({a, e.height, e.speed, expected});
}

bool by_base_then_height(const HeightViolation& x, const HeightViolation& y) {
  return x.a != y.a ? x.a < y.a : x.b < y.b;
}

struct ShardResult {
  std::uint64_t checked = 0;
  std::vector<SpeedMismatch> mismatches;
  std::vector<UnitSpeedMismatch> unit;
  std::vector<HeightViolation> violations;
};

void sweep_block(std::uint64_t lo, std::uint64_t hi, unsigned digits, ShardResult& out) {
  for (std::uint64_t v = lo; v <= hi; ++v) {
    if (v % 10 == 0) continue;
    const BigInt a(static_cast<unsigned long>(v));
    const TetrationBase base(a);
    const StabilizedSpeed s = stabilized_speed(base, digits);
    const unsigned formula = speed_by_formula(base);
    const unsigned member = speed_by_membership(base);
    ++out.checked;
    if (s.value != formula || formula != member)
      out.mismatches.push_back({a, s.value, formula, member});
    if (v <= kUnitSpeedCheckLimit) {
      const bool in_set = has_unit_speed(a);
      if ((s.value == 1) != in_set) out.unit.push_back({a, s.value, in_set});
    }
    if (!skips_conjecture1(a))
      check_heights(a, s.entries, base.length() + 2, s.value, out.violations);
  }
}

}  // namespace

SweepReport sweep(std::uint64_t a_min, std::uint64_t a_max, unsigned digits, unsigned threads) {
  if (digits < kMinSweepDigits)
    throw std::invalid_argument("sweep precision must be at least " +
                                std::to_string(kMinSweepDigits) + " digits");
  if (a_min < 1) a_min = 1;
  SweepReport report;
  report.a_min = static_cast<unsigned long>(a_min);
  report.a_max = static_cast<unsigned long>(a_max);
  report.precision = digits;
  if (a_max < a_min) return report;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  constexpr std::uint64_t kBlock = 500;
  const std::uint64_t blocks = (a_max - a_min) / kBlock + 1;
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));

  std::atomic<std::uint64_t> next{0};
  std::vector<ShardResult> shards(threads);
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&](unsigned t) {
    try {
      for (std::uint64_t i; (i = next++) < blocks;) {
        const std::uint64_t lo = a_min + i * kBlock;
        sweep_block(lo, std::min(a_max, lo + kBlock - 1), digits, shards[t]);
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& s : shards) {
    report.checked += s.checked;
    std::move(s.mismatches.begin(), s.mismatches.end(), std::back_inserter(report.mismatches));
    std::move(s.unit.begin(), s.unit.end(), std::back_inserter(report.unit_speed_mismatches));
    std::move(s.violations.begin(), s.violations.end(),
              std::back_inserter(report.conjecture_violations));
  }
  std::sort(report.mismatches.begin(), report.mismatches.end(),
            [](const auto& x, const auto& y) { return x.a < y.a; });
  std::sort(report.unit_speed_mismatches.begin(), report.unit_speed_mismatches.end(),
            [](const auto& x, const auto& y) { return x.a < y.a; });
  std::sort(report.conjecture_violations.begin(), report.conjecture_violations.end(),
            by_base_then_height);
  return report;
}

std::vector<HeightViolation> probe_conjecture1(std::uint64_t a_min, std::uint64_t a_max) {
  std::vector<HeightViolation> out;
  for (std::uint64_t v = std::max<std::uint64_t>(a_min, 2); v <= a_max; ++v) {
    const BigInt a(static_cast<unsigned long>(v));
    if (skips_conjecture1(a)) continue;
    const TetrationBase base(a);
    const StabilizedSpeed s = stabilized_speed(base);
    const SpeedProfile p = speed_profile_adaptive(base, s.stable_from + 3, s.precision_digits);
    check_heights(a, p.entries, base.length() + 2, s.value, out);
  }
  return out;
}

std::vector<HeightViolation> probe_conjecture2(unsigned n_max, std::uint64_t k_max) {
  std::vector<HeightViolation> out;
  for (unsigned n = 1; n <= n_max; ++n) {
    for (std::uint64_t k = 0; k <= k_max; ++k) {
      const RepnineForm f = RepnineForm::make(BigInt(static_cast<unsigned long>(k)), n);
      if (!is_prime(f.value)) continue;
      const TetrationBase base(f.value);
      const StabilizedSpeed s = stabilized_speed(base);
      const unsigned top = std::max(base.length() + 5, s.stable_from + 2);
      const SpeedProfile p = speed_profile_adaptive(base, top, s.precision_digits);
      check_heights(f.value, p.entries, 2, s.value, out);
    }
  }
  std::sort(out.begin(), out.end(), by_base_then_height);
  return out;
}

namespace {

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

BigInt pow_ui(unsigned long base, unsigned long e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

FixtureResult expect(std::string name, const std::string& expected, const std::string& actual) {
  return {std::move(name), expected, actual, expected == actual};
}

Fixture min_class_fixture(unsigned s1, unsigned n, const char* expected) {
  std::string name = "smallest base ending in " + std::to_string(s1) + " with speed " +
                     std::to_string(n);
  return {name, [=] { return expect(name, expected, min_base_class(s1, n).get_str()); }};
}

Fixture speed_fixture(const char* a, unsigned expected) {
  std::string name = std::string("V(") + a + ")";
  return {name, [=] {
            return expect(name, std::to_string(expected),
                          std::to_string(constant_speed(TetrationBase(BigInt(a)))));
          }};
}

// V(a, lo..hi) as a list, followed by V(a).
Fixture profile_fixture(const char* a, unsigned lo, unsigned hi, std::vector<int> speeds,
                        unsigned limit) {
  std::string name = std::string("V(") + a + ", " + std::to_string(lo) + ".." +
                     std::to_string(hi) + ") then V(" + a + ")";
  return {name, [=] {
            const TetrationBase base{BigInt(a)};
            const SpeedProfile p = speed_profile_adaptive(base, hi);
            std::vector<int> got;
            for (const auto& e : p.entries)
              if (e.height >= lo) got.push_back(e.speed);
            return expect(name, join(speeds) + "; " + std::to_string(limit),
                          join(got) + "; " + std::to_string(constant_speed(base)));
          }};
}

}  // namespace

SpeedProfile fixture_phase_shift() {
  const TetrationBase base(pow_ui(143, 625));
  SpeedProfile p = speed_profile(base, 6, 80);
  const std::vector<int> expected{0, 6, 6, 5, 4, 4};
  if (p.speeds() != expected)
    throw FixtureMismatch("phase shift of 143^625: expected speeds " + join(expected) +
                          ", got " + join(p.speeds()));
  return p;
}

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> kAll = [] {
    std::vector<Fixture> f{
        min_class_fixture(2, 4, "182"),
        min_class_fixture(8, 9, "7532318"),
        min_class_fixture(2, 14, "23316686432"),
        min_class_fixture(2, 20, "175120972936432"),
        min_class_fixture(8, 20, "15613890344818"),
        min_class_fixture(2, 21, "365855836217682"),
        speed_fixture("9437185", 20),
        speed_fixture("6291455", 21),
        speed_fixture("163574218751", 13),
        speed_fixture("2077057", 7),
        speed_fixture("6295807", 7),
        profile_fixture("807", 2, 5, {4, 4, 4, 4}, 3),
        profile_fixture("499", 1, 8, {3, 2, 2, 2, 2, 2, 2, 2}, 2),
        profile_fixture("29509900499", 1, 16, {3, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2},
                        2),
        profile_fixture("2", 3, 8, {1, 1, 1, 1, 1, 1}, 1),
    };
    const std::string phase = "V(143^625, 1..6)";
    f.push_back({phase, [phase] {
                   const TetrationBase base(pow_ui(143, 625));
                   return expect(phase, "0,6,6,5,4,4", join(speed_profile(base, 6, 80).speeds()));
                 }});
    return f;
  }();
  return kAll;
}

Json to_json(const HeightViolation& v) {
  Json j;
  j["a"] = v.a.get_str();
  j["b"] = v.b;
  j["observed"] = v.observed;
  j["expected"] = v.expected;
  return j;
}

Json to_json(const SweepReport& r) {
  Json j;
  j["range"] = Json::array({r.a_min.get_str(), r.a_max.get_str()});
  j["precision"] = r.precision;
  j["checked"] = r.checked;
  Json mm = Json::array();
  for (const auto& m : r.mismatches) {
    Json e;
    e["a"] = m.a.get_str();
    e["oracle"] = m.oracle;
    e["formula"] = m.formula;
    e["membership"] = m.membership;
    mm.push_back(std::move(e));
  }
  j["mismatches"] = std::move(mm);
  Json unit = Json::array();
  for (const auto& u : r.unit_speed_mismatches) {
    Json e;
    e["a"] = u.a.get_str();
    e["oracle"] = u.oracle;
    e["in_residue_set"] = u.in_residue_set;
    unit.push_back(std::move(e));
  }
  j["unit_speed_mismatches"] = std::move(unit);
  Json cv = Json::array();
  for (const auto& v : r.conjecture_violations) cv.push_back(to_json(v));
  j["conjecture_violations"] = std::move(cv);
  j["passed"] = r.passed();
  return j;
}

Json to_json(const FixtureResult& f) {
  Json j;
  j["name"] = f.name;
  j["expected"] = f.expected;
  j["actual"] = f.actual;
  j["passed"] = f.passed;
  return j;
}

}  // namespace tcs
