#include "mhs/arith.hpp"

#include <array>

namespace mhs {

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  a %= m;
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return result;
}

u64 invmod(u64 a, u64 m) {
  // Extended Euclid on (a mod m, m); coefficients tracked in signed 128 bits.
  a %= m;
  if (a == 0) throw NotInvertible("invmod: argument divisible by modulus");
  u64 r0 = m, r1 = a;
  __int128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    u64 q = r0 / r1;
    u64 r2 = r0 - q * r1;
    __int128 s2 = s0 - static_cast<__int128>(q) * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw NotInvertible("invmod: gcd(" + std::to_string(a) + ", " + std::to_string(m) + ") != 1");
  __int128 s = s0 % static_cast<__int128>(m);
  if (s < 0) s += m;
  return static_cast<u64>(s);
}

namespace {

bool miller_rabin_round(u64 n, u64 a, u64 d, unsigned r) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This base set decides primality for every 64-bit integer.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!miller_rabin_round(n, a, d, r)) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

bool checked_pow(u64 p, unsigned k, u64& out) {
  u128 acc = 1;
  for (unsigned i = 0; i < k; ++i) {
    acc *= p;
    if (acc > UINT64_MAX) return false;
  }
  out = static_cast<u64>(acc);
  return true;
}

PrimePowerModulus PrimePowerModulus::make(u64 p, unsigned k) {
  PrimePowerModulus m;
  m.p = p;
  m.k = k;
  if (!checked_pow(p, k, m.value)) {
    throw ModulusTooLarge("prime power " + std::to_string(p) + "^" + std::to_string(k) +
                          " exceeds 64 bits");
  }
  return m;
}

SplitValuation padic_val(u64 n, u64 p) {
  if (n == 0) throw ZeroInput("padic_val: zero has no finite valuation");
  SplitValuation sv;
  sv.unit = n;
  while (sv.unit % p == 0) {
    sv.unit /= p;
    ++sv.v;
  }
  return sv;
}

std::pair<unsigned long, mpz_class> padic_val(const mpz_class& n, u64 p) {
  if (n == 0) throw ZeroInput("padic_val: zero has no finite valuation");
  mpz_class unit;
  mpz_class pz = mpz_class(static_cast<unsigned long>(p));
  unsigned long v = mpz_remove(unit.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
  return {v, unit};
}

Valuation rational_val(const mpz_class& num, const mpz_class& den, u64 p) {
  if (den == 0) throw ZeroInput("rational_val: zero denominator");
  if (num == 0) return Valuation::infinite();
  auto [vn, un] = padic_val(num, p);
  auto [vd, ud] = padic_val(den, p);
  return Valuation::of(static_cast<long long>(vn) - static_cast<long long>(vd));
}

Valuation rational_val(const mpq_class& q, u64 p) {
  return rational_val(q.get_num(), q.get_den(), p);
}

}  // namespace mhs
