#include "oracle.hpp"
#include "tcs/arith.hpp"

#include <doctest.h>

#include <numeric>

using tcs::BigInt;
using tcs::Modulus;

TEST_SUITE("arith") {

TEST_CASE("last digits of small towers") {
  CHECK(tcs::tower_residue(2, 5, 8) == 19156736);
  CHECK(tcs::tower_residue(3, 3, 13) == BigInt("7625597484987"));
  CHECK_THROWS_AS(tcs::tower_residue(7, 0, 5), std::invalid_argument);
  CHECK(tcs::tower_residue(7, 1, 5) == 7);
  // the exponent 256 is far below the modulus exponent
  CHECK(tcs::tower_residue(4, 2, 1000) == 256);
  CHECK(tcs::tower_residue(2, 4, 400) == 65536);
}

TEST_CASE("tower residues agree with the totient oracle") {
  for (unsigned a = 2; a <= 40; ++a)
    for (unsigned h = 1; h <= 5; ++h)
      for (unsigned digits : {1u, 3u, 12u, 45u, 90u}) {
        CAPTURE(a);
        CAPTURE(h);
        CAPTURE(digits);
        CHECK(tcs::tower_residue(a, h, digits) == oracle::tower_mod(a, h, oracle::pow10(digits)));
      }
}

TEST_CASE("a base of more than a thousand digits") {
  BigInt a;
  mpz_ui_pow_ui(a.get_mpz_t(), 143, 625);
  for (unsigned h = 1; h <= 4; ++h)
    CHECK(tcs::tower_residue(a, h, 60) == oracle::tower_mod(a, h, oracle::pow10(60)));
}

TEST_CASE("ladder matches one-shot residues") {
  tcs::TowerLadder ladder(BigInt(807), 50);
  for (unsigned h = 1; h <= 9; ++h) CHECK(ladder.residue(h) == tcs::tower_residue(807, h, 50));
}

TEST_CASE("valuations") {
  CHECK(tcs::nu(2, 48) == 4);
  CHECK(tcs::nu(5, 48) == 0);
  CHECK(tcs::nu(5, BigInt(-625)) == 4);
  CHECK_THROWS_AS(tcs::nu(2, 0), std::domain_error);
  CHECK(tcs::decimal_valuation(BigInt(1200)) == 2);
  CHECK(tcs::digit_length(BigInt(1)) == 1);
  CHECK(tcs::digit_length(BigInt(100)) == 3);
}

TEST_CASE("carmichael lambda against brute force orders") {
  auto brute = [](unsigned long m) {
    unsigned long l = 1;
    for (unsigned long x = 1; x < m; ++x) {
      if (std::gcd(x, m) != 1) continue;
      unsigned long k = 1, y = x % m;
      while (y != 1 % m) {
        y = y * x % m;
        ++k;
      }
      l = std::lcm(l, k);
    }
    return l;
  };
  for (unsigned i = 0; i <= 7; ++i)
    for (unsigned j = 0; j <= 4; ++j) {
      const Modulus m = Modulus::of(i, j);
      if (m.value() > 20000) continue;
      CAPTURE(m.value());
      CHECK(tcs::carmichael(m).value() == brute(m.value().get_ui()));
    }
}

TEST_CASE("lambda chain ends at one") {
  const auto chain = tcs::lambda_chain(20);
  REQUIRE(!chain.empty());
  CHECK(chain.front() == Modulus::pow10(20));
  CHECK(chain.back().is_one());
  for (std::size_t i = 1; i < chain.size(); ++i) CHECK(chain[i] == tcs::carmichael(chain[i - 1]));
}

TEST_CASE("modular powers") {
  const Modulus m = Modulus::pow10(30);
  BigInt want;
  mpz_powm(want.get_mpz_t(), BigInt(12345).get_mpz_t(), BigInt(987654321).get_mpz_t(),
           m.value().get_mpz_t());
  CHECK(tcs::pow_mod(12345, 987654321, m) == want);
  CHECK(tcs::pow_mod(12345, 0, m) == 1);
  // 2^E mod 10^30 for E = 1000, known only mod lambda
  const BigInt lam = tcs::carmichael(m).value();
  BigInt exact;
  mpz_powm_ui(exact.get_mpz_t(), BigInt(2).get_mpz_t(), 1000, m.value().get_mpz_t());
  CHECK(tcs::pow_mod_lifted(2, BigInt(1000) % lam, m) == exact);
}

TEST_CASE("exact towers") {
  CHECK(tcs::exact_tetration(3, 3, 100) == BigInt("7625597484987"));
  CHECK(tcs::exact_tetration(2, 0, 10) == 1);
  CHECK_THROWS_AS(tcs::exact_tetration(9, 3, 1000), std::overflow_error);
  CHECK(tcs::small_tower(2, 4, 70000) == BigInt(65536));
  CHECK_FALSE(tcs::small_tower(2, 5, BigInt(1) << 20).has_value());
}

}  // TEST_SUITE
