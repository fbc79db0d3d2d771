#pragma once

// Reference implementations used only by the tests. They deliberately avoid
// the library: towers are reduced with Euler's totient (found by trial
// division) instead of the Carmichael chain, primality is trial division and
// valuations are plain repeated division.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Int = mpz_class;

inline Int totient(Int m) {
  Int phi = m;
  for (Int p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    phi -= phi / p;
  }
  if (m > 1) phi -= phi / m;
  return phi;
}

// ^h a exactly, or nullopt once it has more than `max_bits` bits.
inline std::optional<Int> exact_tower(const Int& a, unsigned h, std::size_t max_bits) {
  if (h == 0) return Int(1);
  if (a == 1) return Int(1);
  Int value = a;
  for (unsigned i = 1; i < h; ++i) {
    if (!value.fits_ulong_p()) return std::nullopt;
    const double bits = static_cast<double>(value.get_ui()) * mpz_sizeinbase(a.get_mpz_t(), 2);
    if (bits > static_cast<double>(max_bits)) return std::nullopt;
    Int next;
    mpz_pow_ui(next.get_mpz_t(), a.get_mpz_t(), value.get_ui());
    value = next;
  }
  if (mpz_sizeinbase(value.get_mpz_t(), 2) > max_bits) return std::nullopt;
  return value;
}

// ^h a mod m. Uses a^e = a^(e mod phi(m) + phi(m)) (mod m), valid once
// e >= log2(m).
inline Int tower_mod(const Int& a, unsigned h, const Int& m) {
  if (m == 1) return 0;
  if (h == 0) return Int(1) % m;
  const std::size_t log2m = mpz_sizeinbase(m.get_mpz_t(), 2);
  Int e;
  if (auto exact = exact_tower(a, h - 1, 4 * log2m + 64)) {
    e = *exact;
  } else {
    const Int phi = totient(m);
    e = tower_mod(a, h - 1, phi) + phi;
  }
  Int out;
  mpz_powm(out.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return out;
}

inline Int pow10(unsigned n) {
  Int out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, n);
  return out;
}

inline unsigned shared_trailing_digits(Int x, Int y, unsigned limit) {
  unsigned k = 0;
  while (k < limit && x % 10 == y % 10) {
    x /= 10;
    y /= 10;
    ++k;
  }
  return k;
}

// nu(b) with `digits` of working precision.
inline unsigned frozen(const Int& a, unsigned b, unsigned digits) {
  const Int m = pow10(digits);
  return shared_trailing_digits(tower_mod(a, b, m), tower_mod(a, b + 1, m), digits);
}

inline int speed(const Int& a, unsigned b, unsigned digits) {
  return static_cast<int>(frozen(a, b, digits)) - static_cast<int>(frozen(a, b - 1, digits));
}

inline unsigned length(const Int& a) { return static_cast<unsigned>(a.get_str().size()); }

// V(a) read off far past the point where it is known to be constant. Throws
// if the precision was not enough to see it.
inline unsigned constant_speed(const Int& a, unsigned digits = 120) {
  if (a == 1) return 0;
  const unsigned b = length(a) + 6;
  if (frozen(a, b, digits) >= digits - 4)
    throw std::runtime_error("oracle precision too small");
  return static_cast<unsigned>(speed(a, b, digits));
}

inline bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  for (std::uint64_t d = 2; d * d <= x; ++d)
    if (x % d == 0) return false;
  return true;
}

inline std::vector<bool> sieve(std::size_t limit) {
  std::vector<bool> p(limit + 1, true);
  p[0] = false;
  if (limit >= 1) p[1] = false;
  for (std::size_t i = 2; i * i <= limit; ++i)
    if (p[i])
      for (std::size_t j = i * i; j <= limit; j += i) p[j] = false;
  return p;
}

inline unsigned valuation(unsigned p, Int x) {
  unsigned k = 0;
  while (x % p == 0) {
    x /= p;
    ++k;
  }
  return k;
}

}  // namespace oracle
