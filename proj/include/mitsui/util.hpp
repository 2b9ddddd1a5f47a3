#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mitsui {

using i64 = long long;
using u64 = unsigned long long;
using u32 = unsigned int;
using i128 = __int128_t;

struct overflow_error : std::runtime_error {
  explicit overflow_error(const std::string& what) : std::runtime_error(what) {}
};
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Checked 64-bit arithmetic. Overflow is an error, never silent wraparound.
inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("integer add overflow");
  return r;
}
inline i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("integer sub overflow");
  return r;
}
inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("integer mul overflow");
  return r;
}
inline i64 narrow_i128(i128 v) {
  if (v > i128(std::numeric_limits<i64>::max()) || v < i128(std::numeric_limits<i64>::min()))
    throw overflow_error("value exceeds 64 bits");
  return static_cast<i64>(v);
}

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline i64 mod_floor(i64 a, i64 b) { return a - floor_div(a, b) * b; }

inline i64 gcd_ll(i64 a, i64 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) { i64 t = a % b; a = b; b = t; }
  return a;
}

// Neumaier-compensated accumulator for long deterministic sums.
struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) c += (sum - t) + x;
    else c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

// Fixed-point accumulator (2^-48 ulp). Integer addition is associative, so
// partition identities (sum of class totals == grand total) hold bit-exactly
// no matter how terms are grouped.
struct FixedAcc {
  i128 acc = 0;
  static constexpr double kScale = 281474976710656.0;  // 2^48
  void add(double x) { acc += static_cast<i128>(std::llround(x * kScale)); }
  void merge(const FixedAcc& o) { acc += o.acc; }
  double value() const { return static_cast<double>(acc) / kScale; }
  bool operator==(const FixedAcc& o) const { return acc == o.acc; }
  bool operator<=(const FixedAcc& o) const { return acc <= o.acc; }
};

// Count of membership decisions that fell inside the 1e-9 tie band and were
// resolved by the half-open rule.
inline std::atomic<u64>& near_boundary_events() {
  static std::atomic<u64> counter{0};
  return counter;
}

constexpr double kTieTolerance = 1e-9;

// Half-open comparison lo <= v < hi: the lower face belongs to the set, the
// upper face does not, and decisions within the tie band are forced to that
// rule (not left to floating-point noise).
inline bool in_half_open(double v, double lo, double hi) {
  if (std::abs(v - lo) < kTieTolerance) {
    near_boundary_events().fetch_add(1, std::memory_order_relaxed);
    return true;
  }
  if (std::abs(v - hi) < kTieTolerance) {
    near_boundary_events().fetch_add(1, std::memory_order_relaxed);
    return false;
  }
  return v > lo && v < hi;
}

}  // namespace mitsui
