#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trajlab/arith.hpp"
#include "trajlab/error.hpp"
#include "trajlab/formula.hpp"

namespace trajlab {

/// (i + pN) x (j + qN).
struct Grid {
  i64 i = 0, p = 1, j = 0, q = 1;

  void validate() const {
    if (i < 0 || j < 0) throw InputError("grid offsets must be nonnegative");
    if (p < 1 || q < 1) throw InputError("grid periods must be positive");
  }
  Vec2 point(i64 m, i64 n) const {
    return {checked_add(i, checked_mul(p, m)), checked_add(j, checked_mul(q, n))};
  }
  friend bool operator==(const Grid&, const Grid&) = default;
};

inline std::string to_string(const Grid& g) {
  return "(" + std::to_string(g.i) + "," + std::to_string(g.p) + "," + std::to_string(g.j) + "," +
         std::to_string(g.q) + ")";
}

/// Normalized line c*x + d*y + e = 0: gcd 1, first nonzero coefficient positive.
struct Line {
  i64 c = 0, d = 0, e = 0;

  static Line of(i64 c, i64 d, i64 e) {
    if (c == 0 && d == 0) throw InputError("degenerate line");
    i64 g = gcd64(gcd64(c, d), e);
    Line l{c / g, d / g, e / g};
    if (l.c < 0 || (l.c == 0 && l.d < 0)) l = {-l.c, -l.d, -l.e};
    return l;
  }
  friend auto operator<=>(const Line&, const Line&) = default;
};

/// Family of parallel lines with positive slope and primitive normal (c0,d0),
/// c0 > 0 > d0. Integer values v = c0*x + d0*y outside [lo, hi] lie strictly
/// on one side of every line of the family.
struct Band {
  i64 c0 = 0, d0 = 0;
  i64 lo = 0, hi = 0;
  Vec2 direction() const { return {-d0, c0}; }
};

/// Far-field angular sector between consecutive band slopes (or the axes).
struct Cone {
  Vec2 direction;                 // strictly inside the sector
  std::vector<Vec2> core;         // residues mod the common modulus
};

struct FarField {
  i64 modulus = 1;
  i64 n0 = 0;  // in [n0, inf)^2 only band lines change atom truth
  std::vector<Band> bands;
  std::vector<Cone> cones;
};

namespace detail {

struct HalfAtom {
  i64 c, d, e;
  friend auto operator<=>(const HalfAtom&, const HalfAtom&) = default;
};

inline std::vector<HalfAtom> half_atoms(const Formula& f) {
  std::set<HalfAtom> out;
  for_each_atom(f, [&](const Formula& a) {
    if (a.kind == Formula::Kind::HalfPlane) out.insert({a.c, a.d, a.e});
  });
  return {out.begin(), out.end()};
}

inline bool positive_slope(const HalfAtom& a) { return (a.c > 0 && a.d < 0) || (a.c < 0 && a.d > 0); }

// Truth of f at points deep along `dir` with residues (a,b).
inline bool eval_far(const Formula& f, Vec2 dir, i64 a, i64 b) {
  switch (f.kind) {
    case Formula::Kind::Const:
      return f.value;
    case Formula::Kind::HalfPlane: {
      i128 s = static_cast<i128>(f.c) * dir.x + static_cast<i128>(f.d) * dir.y;
      return s != 0 ? s > 0 : f.e > 0;
    }
    case Formula::Kind::Congruence:
      return atom_value(f, a, b) % f.p == 0;
    case Formula::Kind::And:
      for (const auto& g : f.args)
        if (!eval_far(g, dir, a, b)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& g : f.args)
        if (eval_far(g, dir, a, b)) return true;
      return false;
    case Formula::Kind::Not:
      return !eval_far(f.args.front(), dir, a, b);
  }
  return false;
}

// Returns (x, y) with a*x + b*y = gcd(a, b) for a, b > 0 or mixed signs.
inline std::pair<i64, i64> ext_gcd(i64 a, i64 b) {
  i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i128 qt = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - qt * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - qt * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - qt * t);
  }
  if (old_r < 0) old_s = -old_s, old_t = -old_t;
  return {narrow(old_s), narrow(old_t)};
}

class Budget {
 public:
  explicit Budget(i128 limit) : left_(limit) {}
  void spend(i128 n) {
    left_ -= n;
    if (left_ < 0) throw ResourceError("grid search budget exhausted");
  }

 private:
  i128 left_;
};

}  // namespace detail

/// Bands, cones and cores of a formula, with the far-field threshold n0.
inline FarField far_field(const Formula& f) {
  FarField ff;
  ff.modulus = modulus_lcm(f);
  auto atoms = detail::half_atoms(f);
  std::map<std::pair<i64, i64>, std::pair<i64, i64>> ranges;
  i64 n0 = 0;
  std::vector<detail::HalfAtom> sloped;
  for (const auto& a : atoms) {
    if (a.c == 0 && a.d == 0) continue;
    if (detail::positive_slope(a)) {
      i64 g = gcd64(a.c, a.d);
      i64 s = a.c > 0 ? 1 : -1;
      std::pair<i64, i64> key{a.c / g * s, a.d / g * s};
      // c*x + d*y + e = s*g*v + e changes sign at v = -s*e/g.
      i64 lo = floor_div(-static_cast<i128>(s) * a.e, g), hi = ceil_div(-static_cast<i128>(s) * a.e, g);
      auto it = ranges.find(key);
      if (it == ranges.end())
        ranges[key] = {lo, hi};
      else
        it->second = {std::min(it->second.first, lo), std::max(it->second.second, hi)};
      sloped.push_back(a);
    } else {
      // Axis-parallel or negative slope: constant sign on [n0, inf)^2.
      i64 w = (a.c < 0 ? -a.c : a.c) + (a.d < 0 ? -a.d : a.d);
      if (a.c == 0 || a.d == 0) w = a.c == 0 ? (a.d < 0 ? -a.d : a.d) : (a.c < 0 ? -a.c : a.c);
      n0 = std::max(n0, checked_add(floor_div(a.e < 0 ? -static_cast<i128>(a.e) : a.e, w), 1));
    }
  }
  for (std::size_t x = 0; x < sloped.size(); ++x)
    for (std::size_t y = x + 1; y < sloped.size(); ++y) {
      const auto &a = sloped[x], &b = sloped[y];
      i128 D = static_cast<i128>(a.c) * b.d - static_cast<i128>(a.d) * b.c;
      if (D == 0) continue;
      // Intersection: x* = (d_a e_b - d_b e_a)/D, y* = (c_b e_a - c_a e_b)/D.
      i128 nx = static_cast<i128>(a.d) * b.e - static_cast<i128>(b.d) * a.e;
      i128 ny = static_cast<i128>(b.c) * a.e - static_cast<i128>(a.c) * b.e;
      if (D < 0) D = -D, nx = -nx, ny = -ny;
      if (nx < 0 || ny < 0) continue;
      i128 m = std::min(nx, ny) / D;
      n0 = std::max(n0, checked_add(narrow(m), 1));
    }
  ff.n0 = n0;
  for (const auto& [key, r] : ranges) ff.bands.push_back({key.first, key.second, r.first, r.second});
  // Order by angle from the x-axis.
  std::sort(ff.bands.begin(), ff.bands.end(),
            [](const Band& u, const Band& v) { return det(u.direction(), v.direction()) > 0; });
  std::vector<Vec2> rays{{1, 0}};
  for (const auto& b : ff.bands) rays.push_back(b.direction());
  rays.push_back({0, 1});
  i64 P = ff.modulus;
  for (std::size_t k = 0; k + 1 < rays.size(); ++k) {
    Cone cone{rays[k] + rays[k + 1], {}};
    for (i64 a = 0; a < P; ++a)
      for (i64 b = 0; b < P; ++b)
        if (detail::eval_far(f, cone.direction, a, b)) cone.core.push_back({a, b});
    ff.cones.push_back(std::move(cone));
  }
  if (ff.cones.empty()) throw InternalError("no cone in region decomposition");
  return ff;
}

inline constexpr i64 kGridSearchBudget = 200'000'000;

/// A point of N^2 satisfying f, or nullopt if f is unsatisfiable on N^2.
/// Exact: slices near the axes, deep cone points, and band lines are each
/// checked up to their sign-stabilization threshold plus one period.
inline std::optional<Vec2> find_point(const Formula& f, const FarField& ff) {
  detail::Budget budget(kGridSearchBudget);
  auto atoms = detail::half_atoms(f);
  i64 P = ff.modulus;
  auto holds = [&](i128 x, i128 y) { return eval_formula(f, x, y); };

  // Slices x = x0 < n0 and y = y0 < n0.
  for (int axis = 0; axis < 2; ++axis) {
    for (i64 fixed = 0; fixed < ff.n0; ++fixed) {
      i128 top = 0;
      for (const auto& a : atoms) {
        i64 slope = axis == 0 ? a.d : a.c;
        i128 off = static_cast<i128>(axis == 0 ? a.c : a.d) * fixed + a.e;
        if (slope != 0) top = std::max<i128>(top, (off < 0 ? -off : off) / (slope < 0 ? -slope : slope) + 1);
      }
      budget.spend(top + P + 1);
      for (i128 t = 0; t <= top + P; ++t) {
        if (axis == 0 ? holds(fixed, t) : holds(t, fixed))
          return axis == 0 ? Vec2{fixed, narrow(t)} : Vec2{narrow(t), fixed};
      }
    }
  }

  // Cone interiors.
  for (const auto& cone : ff.cones) {
    if (cone.core.empty()) continue;
    Vec2 r = cone.core.front();
    for (i64 t = std::max<i64>(ff.n0, 1); t < (i64{1} << 40); t *= 2) {
      i128 x = static_cast<i128>(t) * cone.direction.x, y = static_cast<i128>(t) * cone.direction.y;
      x += mod_floor(r.x - x, P);
      y += mod_floor(r.y - y, P);
      budget.spend(1);
      if (holds(x, y)) return Vec2{narrow(x), narrow(y)};
    }
    throw InternalError("cone core residue has no witness");
  }

  // Integer lines of each band.
  for (const auto& band : ff.bands) {
    auto [sx, sy] = detail::ext_gcd(band.c0, band.d0);
    for (i64 v = band.lo; v <= band.hi; ++v) {
      i128 xv = static_cast<i128>(sx) * v, yv = static_cast<i128>(sy) * v;
      i64 dx = -band.d0, dy = band.c0;  // x = xv + dx*t, y = yv + dy*t
      i128 lo = std::max<i128>(ceil_div(-xv, dx), ceil_div(-yv, dy));
      i128 top = lo;
      for (const auto& a : atoms) {
        i128 rate = static_cast<i128>(a.c) * dx + static_cast<i128>(a.d) * dy;
        if (rate == 0) continue;
        i128 val = a.c * xv + a.d * yv + a.e;
        top = std::max<i128>(top, ceil_div(-val, narrow(rate)) + 1);
        top = std::max<i128>(top, floor_div(-val, narrow(rate)) + 1);
      }
      budget.spend(top - lo + P + 1);
      for (i128 t = lo; t <= top + P; ++t)
        if (holds(xv + dx * t, yv + dy * t)) return Vec2{narrow(xv + dx * t), narrow(yv + dy * t)};
    }
  }
  return std::nullopt;
}

inline std::optional<Vec2> find_point(const Formula& f) { return find_point(f, far_field(f)); }

/// A grid point (as (m,n) indices) violating f, if any.
inline std::optional<Vec2> grid_violation(const Formula& f, const Grid& g) {
  g.validate();
  return find_point(complement(substitute(f, g.i, g.p, g.j, g.q)));
}

/// True iff every point of g satisfies f.
inline bool verify_grid(const Formula& f, const Grid& g) { return !grid_violation(f, g).has_value(); }

struct GridDecision {
  std::optional<Grid> grid;
  FarField field;
  std::vector<Vec2> common_core;
  int refinements = 0;
};

/// Decides whether the set defined by f contains a grid, with a verified
/// witness when it does.
inline GridDecision decide_grid_report(const Formula& f) {
  GridDecision out;
  out.field = far_field(f);
  const FarField& ff = out.field;
  std::set<Vec2> common(ff.cones.front().core.begin(), ff.cones.front().core.end());
  for (const auto& cone : ff.cones) {
    std::set<Vec2> next;
    for (Vec2 r : cone.core)
      if (common.contains(r)) next.insert(r);
    common = std::move(next);
  }
  out.common_core.assign(common.begin(), common.end());
  if (common.empty()) return out;

  i64 P = ff.modulus;
  Vec2 r = *common.begin();
  i64 shift = checked_mul(P, ceil_div(ff.n0, P));
  Grid g{checked_add(r.x, shift), P, checked_add(r.y, shift), P};
  i128 limit = 2;
  for (const auto& b : ff.bands) limit += static_cast<i128>(b.hi) - b.lo + 1;
  for (;;) {
    auto bad = grid_violation(f, g);
    if (!bad) break;
    if (out.refinements >= limit) throw InternalError("grid refinement did not converge");
    Vec2 z = g.point(bad->x, bad->y);
    const Band* hit = nullptr;
    for (const auto& b : ff.bands) {
      i128 v = static_cast<i128>(b.c0) * z.x + static_cast<i128>(b.d0) * z.y;
      if (v >= b.lo && v <= b.hi) hit = &b;
    }
    if (!hit) throw InternalError("grid violation outside every band");
    // Consecutive grid points on the line through z differ by (k*p, l*q).
    i64 a = checked_mul(hit->c0, g.p), b = checked_mul(-hit->d0, g.q);
    i64 gg = gcd64(a, b);
    i64 k = b / gg, l = a / gg;
    i64 kp = checked_mul(k, g.p), lq = checked_mul(l, g.q);
    g = Grid{checked_add(z.x, kp), checked_mul(2, kp), z.y, checked_mul(2, lq)};
    ++out.refinements;
  }
  out.grid = g;
  return out;
}

inline std::optional<Grid> decide_grid(const Formula& f) { return decide_grid_report(f).grid; }

inline std::optional<Grid> decide_antigrid(const Formula& f) { return decide_grid(complement(f)); }

}  // namespace trajlab
