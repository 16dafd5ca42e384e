#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "mhs/errors.hpp"

namespace mhs {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(u64 n);

// All primes <= limit, ascending.
std::vector<u64> primes_up_to(u64 limit);

// (a * b) mod m without overflow; m may be any nonzero 64-bit value.
u64 mulmod(u64 a, u64 b, u64 m);

// (a ^ e) mod m by binary exponentiation.
u64 powmod(u64 a, u64 e, u64 m);

// Multiplicative inverse of a mod m; throws NotInvertible if gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);

// p^k with overflow detection; returns false on 64-bit overflow.
bool checked_pow(u64 p, unsigned k, u64& out);

// A modulus p^k that is guaranteed to fit in 64 bits.
struct PrimePowerModulus {
  u64 p = 0;
  unsigned k = 0;
  u64 value = 0;

  // Throws ModulusTooLarge if p^k overflows 64 bits.
  static PrimePowerModulus make(u64 p, unsigned k);
};

// n = p^v * unit with p not dividing unit; throws ZeroInput for n == 0.
struct SplitValuation {
  unsigned v = 0;
  u64 unit = 0;
};
SplitValuation padic_val(u64 n, u64 p);
std::pair<unsigned long, mpz_class> padic_val(const mpz_class& n, u64 p);

// p-adic valuation of a rational, with +infinity represented by finite == false.
struct Valuation {
  bool finite = true;
  long long v = 0;

  static Valuation infinite() { return Valuation{false, 0}; }
  static Valuation of(long long value) { return Valuation{true, value}; }

  bool operator==(const Valuation&) const = default;
  // v >= bound, treating infinity as larger than every bound.
  bool at_least(long long bound) const { return !finite || v >= bound; }
};

Valuation rational_val(const mpz_class& num, const mpz_class& den, u64 p);
Valuation rational_val(const mpq_class& q, u64 p);

}  // namespace mhs
