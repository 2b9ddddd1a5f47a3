#pragma once

// Independent test oracles: deliberately naive implementations that share no
// code with the library paths they check.

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline bool is_prime_u64(unsigned long long n) {
  if (n < 2) return false;
  for (unsigned long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Chebyshev theta by trial division
inline double theta(unsigned long long X) {
  double s = 0;
  for (unsigned long long p = 2; p < X; ++p)
    if (is_prime_u64(p)) s += std::log(double(p));
  return s;
}

inline double theta_progression(unsigned long long X, long long q, long long a) {
  double s = 0;
  for (unsigned long long p = 2; p < X; ++p)
    if (is_prime_u64(p) && (long long)(p % (unsigned long long)q) == ((a % q) + q) % q)
      s += std::log(double(p));
  return s;
}

// Gaussian-integer prime elements in the closed disk of radius r: a + bi is a
// prime element iff a^2+b^2 is a rational prime, or a^2+b^2 = p^2 for an
// inert rational prime p = 3 mod 4 (i.e. the element is a unit multiple of p).
inline std::set<std::pair<long long, long long>> gaussian_primes_in_disk(double r) {
  std::set<std::pair<long long, long long>> out;
  long long R = (long long)std::floor(r);
  for (long long a = -R; a <= R; ++a)
    for (long long b = -R; b <= R; ++b) {
      double rr = std::sqrt(double(a * a + b * b));
      if (!(rr < r) || std::abs(rr - r) < 1e-9) continue;
      unsigned long long n = (unsigned long long)(a * a + b * b);
      if (is_prime_u64(n)) {
        out.insert({a, b});
        continue;
      }
      unsigned long long p = (unsigned long long)std::llround(std::sqrt(double(n)));
      if (p * p == n && is_prime_u64(p) && p % 4 == 3 &&
          ((a == 0 && (b == (long long)p || b == -(long long)p)) ||
           (b == 0 && (a == (long long)p || a == -(long long)p))))
        out.insert({a, b});
    }
  return out;
}

// squarefree-poly factorization type of x^2 - d mod p (split/inert/ramified)
inline int legendre_slow(long long a, long long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  for (long long x = 1; x < p; ++x)
    if ((x * x) % p == a) return 1;
  return -1;
}

}  // namespace oracle
