#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>

#include "trajlab/error.hpp"

namespace trajlab {

using i64 = std::int64_t;
using i128 = __int128;

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceError("coefficient overflow");
  return r;
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("coefficient overflow");
  return r;
}

inline i64 checked_sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw ResourceError("coefficient overflow");
  return r;
}

inline i64 narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ResourceError("coefficient overflow");
  return static_cast<i64>(v);
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

inline i64 lcm64(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b < 0 ? -b : b);
}

/// Mathematical modulus in [0, m).
inline i64 mod_floor(i128 a, i64 m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<i64>(r);
}

inline i64 floor_div(i128 a, i64 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return narrow(q);
}

inline i64 ceil_div(i128 a, i64 b) { return narrow(-static_cast<i128>(floor_div(-a, b))); }

inline int sign(i128 v) { return (v > 0) - (v < 0); }

/// Letter counts: x for s, y for t.
struct Vec2 {
  i64 x = 0;
  i64 y = 0;

  Vec2 operator+(Vec2 o) const { return {checked_add(x, o.x), checked_add(y, o.y)}; }
  Vec2 operator-(Vec2 o) const { return {checked_sub(x, o.x), checked_sub(y, o.y)}; }
  Vec2 operator*(i64 k) const { return {checked_mul(x, k), checked_mul(y, k)}; }
  bool nonneg() const { return x >= 0 && y >= 0; }
  bool zero() const { return x == 0 && y == 0; }
  bool leq(Vec2 o) const { return x <= o.x && y <= o.y; }

  friend bool operator==(Vec2, Vec2) = default;
  friend auto operator<=>(Vec2, Vec2) = default;
};

inline std::string to_string(Vec2 v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

inline i64 det(Vec2 a, Vec2 b) {
  return narrow(static_cast<i128>(a.x) * b.y - static_cast<i128>(a.y) * b.x);
}

}  // namespace trajlab
