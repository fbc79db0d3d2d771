#include "tcs/primes.hpp"

#include "tcs/classes.hpp"
#include "tcs/speed.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tcs {

std::string to_string(PrimalityMethod m) {
  return m == PrimalityMethod::DeterministicSmall ? "deterministic-small" : "probabilistic";
}

PrimalityMethod parse_primality_method(const std::string& s) {
  if (s == "deterministic-small") return PrimalityMethod::DeterministicSmall;
  if (s == "probabilistic") return PrimalityMethod::Probabilistic;
  throw std::invalid_argument("unknown primality method '" + s + "'");
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod_u64(u64 b, u64 e, u64 m) {
  u64 r = 1;
  b %= m;
  for (; e; e >>= 1) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
  }
  return r;
}

}  // namespace

bool is_prime_u64(u64 x) {
  if (x < 2) return false;
  // the first twelve primes are a complete witness set below 3.3e24
  static constexpr u64 kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kWitnesses) {
    if (x == p) return true;
    if (x % p == 0) return false;
  }
  u64 d = x - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kWitnesses) {
    u64 y = pow_mod_u64(a, d, x);
    if (y == 1 || y == x - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      y = mul_mod(y, y, x);
      if (y == x - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimalityResult primality(const BigInt& x) {
  if (x < 2) return {false, PrimalityMethod::DeterministicSmall};
  if (mpz_sizeinbase(x.get_mpz_t(), 2) <= 64) {
    u64 v = 0;
    mpz_export(&v, nullptr, -1, sizeof v, 0, 0, x.get_mpz_t());
    return {is_prime_u64(v), PrimalityMethod::DeterministicSmall};
  }
  // GMP runs Baillie-PSW first, then reps - 24 extra Miller-Rabin rounds
  return {mpz_probab_prime_p(x.get_mpz_t(), 30) > 0, PrimalityMethod::Probabilistic};
}

RepnineForm RepnineForm::make(const BigInt& k, unsigned n) {
  if (k < 0) throw std::invalid_argument("multiplier must be >= 0");
  if (n < 1) throw std::invalid_argument("need at least one trailing nine");
  return {k, n, (k + 1) * Modulus::pow10(n).value() - 1};
}

RepnineForm RepnineForm::odd_multiplier(const BigInt& m, unsigned n) {
  return make(2 * m, n);
}

RepnineSpeed lemma1_speed(const BigInt& k, unsigned n) {
  if (n < 1) throw std::invalid_argument("need n >= 1");
  if (k < 0) throw std::invalid_argument("multiplier must be >= 0");
  if (n == 1) return {1, mpz_fdiv_ui(k.get_mpz_t(), 5) == 4};
  return {n, mpz_fdiv_ui(k.get_mpz_t(), 10) == 9};
}

BudgetExhausted::BudgetExhausted(unsigned n_, BigInt resume, std::uint64_t count)
    : std::runtime_error("candidate budget exhausted while searching q_" + std::to_string(n_) +
                         " after " + resume.get_str()),
      n(n_),
      resume_after(std::move(resume)),
      examined(count) {}

namespace {

void confirm_speed(const BigInt& q, unsigned n, bool oracle, const char* what) {
  TetrationBase base(q);
  if (speed_by_formula(base) != n || (oracle && constant_speed(base) != n))
    throw std::logic_error(std::string(what) + ": " + q.get_str() +
                           " does not have speed " + std::to_string(n));
}

}  // namespace

PrimeSpeedRecord smallest_prime_with_speed(unsigned n, const PrimeSearchOptions& opts) {
  if (n < 1) throw std::invalid_argument("q_n needs n >= 1");
  const BigInt lower = opts.resume_after ? *opts.resume_after + 1 : BigInt(0);

  std::vector<ProgressionFamily> open;
  std::vector<BigInt> tiny;  // 2 and 5 from streams that offer nothing else
  for (unsigned s1 = 1; s1 <= 9; ++s1) {
    for (auto& f : speed_class(s1, n).families) {
      if (f.all_divisible_by(2) || f.all_divisible_by(5)) {
        for (unsigned p : {2u, 5u})
          if (f.contains(p) && p >= lower) tiny.emplace_back(p);
      } else {
        open.push_back(std::move(f));
      }
    }
  }
  std::sort(tiny.begin(), tiny.end());

  FamilyMerger merged(std::move(open), lower);
  std::size_t ti = 0;
  std::uint64_t examined = 0;
  BigInt last = lower - 1;
  for (;;) {
    if (examined >= opts.budget) throw BudgetExhausted(n, last, examined);
    BigInt candidate;
    if (ti < tiny.size() && (merged.empty() || tiny[ti] < merged.peek())) {
      candidate = tiny[ti++];
    } else {
      candidate = merged.next();
    }
    ++examined;
    last = candidate;
    const PrimalityResult pr = primality(candidate);
    if (!pr.prime) continue;
    const bool oracle =
        opts.oracle_digit_limit > 0 && digit_length(candidate) <= opts.oracle_digit_limit;
    confirm_speed(candidate, n, oracle, "search produced a prime of the wrong speed");
    return {n, candidate, pr.method, oracle};
  }
}

bool verify_record(const PrimeSpeedRecord& r, unsigned oracle_digit_limit) {
  const PrimalityResult pr = primality(r.q);
  if (!pr.prime) return false;
  TetrationBase base(r.q);
  if (speed_by_formula(base) != r.n) return false;
  if (oracle_digit_limit > 0 && digit_length(r.q) <= oracle_digit_limit &&
      constant_speed(base) != r.n)
    return false;
  return true;
}

std::vector<QTableRow> q_table(unsigned n_max, const std::vector<unsigned>& extra,
                               const PrimeSearchOptions& opts) {
  std::set<unsigned> wanted;
  for (unsigned n = 1; n <= n_max; ++n) wanted.insert(n);
  for (unsigned n : extra)
    if (n >= 1) wanted.insert(n);
  std::set<unsigned> needed = wanted;
  for (unsigned n : wanted)
    if (n >= 2) needed.insert(n - 1);

  std::map<unsigned, PrimeSpeedRecord> found;
  for (unsigned n : needed) found.emplace(n, smallest_prime_with_speed(n, opts));

  std::vector<QTableRow> rows;
  for (unsigned n : wanted) {
    QTableRow row{found.at(n), false};
    if (n >= 2) row.below_previous = found.at(n).q < found.at(n - 1).q;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::pair<BigInt, BigInt> q_bounds(unsigned n, const std::optional<BigInt>& witness) {
  if (n < 2) throw std::invalid_argument("q bounds need n >= 2");
  BigInt five_n;
  mpz_ui_pow_ui(five_n.get_mpz_t(), 5, n);
  BigInt lower;
  mpz_sqrt(lower.get_mpz_t(), BigInt(five_n - 1).get_mpz_t());
  lower += 1;
  BigInt upper = 9 * Modulus::pow10(n).value() - 1;
  if (witness && *witness < upper) upper = *witness;
  return {lower, upper};
}

std::vector<BigInt> repnine_primes(unsigned n, std::size_t count) {
  std::vector<BigInt> out;
  for (BigInt k = 0; out.size() < count; ++k) {
    if (lemma1_speed(k, n).exceeds) continue;
    RepnineForm f = RepnineForm::make(k, n);
    if (is_prime(f.value)) out.push_back(f.value);
  }
  return out;
}

std::vector<BigInt> odd_repnine_primes(unsigned n, std::size_t count) {
  std::vector<BigInt> out;
  for (BigInt m = 0; out.size() < count; ++m) {
    RepnineForm f = RepnineForm::odd_multiplier(m, n);
    if (is_prime(f.value)) out.push_back(f.value);
  }
  return out;
}

std::vector<BigInt> primes_29_mod_100(std::size_t count) {
  std::vector<BigInt> out;
  for (BigInt x = 29; out.size() < count; x += 100)
    if (is_prime(x)) out.push_back(x);
  return out;
}

}  // namespace tcs
