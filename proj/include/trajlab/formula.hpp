#pragma once

#include <set>
#include <string>
#include <vector>

#include "trajlab/arith.hpp"
#include "trajlab/error.hpp"

namespace trajlab {

/// Boolean tree over half-plane atoms c*x+d*y+e > 0 and congruence atoms
/// c*x+d*y+e = 0 (mod p).
struct Formula {
  enum class Kind { Const, HalfPlane, Congruence, And, Or, Not };
  Kind kind = Kind::Const;
  bool value = true;
  i64 c = 0, d = 0, e = 0, p = 1;
  std::vector<Formula> args;

  static Formula constant(bool v) { return {Kind::Const, v, 0, 0, 0, 1, {}}; }
  static Formula half_plane(i64 c, i64 d, i64 e) { return {Kind::HalfPlane, true, c, d, e, 1, {}}; }
  static Formula congruence(i64 c, i64 d, i64 e, i64 p) {
    if (p < 1) throw InputError("congruence modulus must be positive");
    return {Kind::Congruence, true, c, d, e, p, {}};
  }
  static Formula all(std::vector<Formula> fs) { return {Kind::And, true, 0, 0, 0, 1, std::move(fs)}; }
  static Formula any(std::vector<Formula> fs) { return {Kind::Or, true, 0, 0, 0, 1, std::move(fs)}; }
  static Formula negate(Formula f) { return {Kind::Not, true, 0, 0, 0, 1, {std::move(f)}}; }

  bool is_atom() const { return kind == Kind::HalfPlane || kind == Kind::Congruence; }

  friend bool operator==(const Formula&, const Formula&) = default;
};

inline i128 atom_value(const Formula& f, i128 x, i128 y) { return f.c * x + f.d * y + f.e; }

inline bool eval_formula(const Formula& f, i128 x, i128 y) {
  switch (f.kind) {
    case Formula::Kind::Const:
      return f.value;
    case Formula::Kind::HalfPlane:
      return atom_value(f, x, y) > 0;
    case Formula::Kind::Congruence:
      return atom_value(f, x, y) % f.p == 0;
    case Formula::Kind::And:
      for (const auto& g : f.args)
        if (!eval_formula(g, x, y)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& g : f.args)
        if (eval_formula(g, x, y)) return true;
      return false;
    case Formula::Kind::Not:
      return !eval_formula(f.args.front(), x, y);
  }
  return false;
}

inline bool eval_formula(const Formula& f, Vec2 v) { return eval_formula(f, v.x, v.y); }

inline Formula complement(const Formula& f) { return Formula::negate(f); }

/// Applies `fn` to every atom, rebuilding the tree.
template <class Fn>
Formula map_atoms(const Formula& f, Fn&& fn) {
  if (f.is_atom()) return fn(f);
  Formula out = f;
  for (auto& g : out.args) g = map_atoms(g, fn);
  return out;
}

template <class Fn>
void for_each_atom(const Formula& f, Fn&& fn) {
  if (f.is_atom()) {
    fn(f);
    return;
  }
  for (const auto& g : f.args) for_each_atom(g, fn);
}

/// Formula in variables (m,n) for the points x = x0 + a*m, y = y0 + b*n.
inline Formula substitute(const Formula& f, i64 x0, i64 a, i64 y0, i64 b) {
  return map_atoms(f, [&](const Formula& at) {
    Formula g = at;
    g.c = checked_mul(at.c, a);
    g.d = checked_mul(at.d, b);
    g.e = narrow(static_cast<i128>(at.c) * x0 + static_cast<i128>(at.d) * y0 + at.e);
    return g;
  });
}

/// The set translated by (a,b): z is in the result iff z - (a,b) is in f.
inline Formula shift(const Formula& f, i64 a, i64 b) { return substitute(f, -a, 1, -b, 1); }

/// lcm of all congruence moduli; 1 if there are none.
inline i64 modulus_lcm(const Formula& f) {
  i64 p = 1;
  for_each_atom(f, [&](const Formula& at) {
    if (at.kind == Formula::Kind::Congruence) p = lcm64(p, at.p);
  });
  return p;
}

inline std::size_t atom_count(const Formula& f) {
  std::size_t n = 0;
  for_each_atom(f, [&](const Formula&) { ++n; });
  return n;
}

inline std::string to_string(const Formula& f) {
  auto lin = [](const Formula& a) {
    return std::to_string(a.c) + "x" + (a.d < 0 ? "" : "+") + std::to_string(a.d) + "y" +
           (a.e < 0 ? "" : "+") + std::to_string(a.e);
  };
  auto join = [](const std::vector<Formula>& args, const std::string& op) {
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? op : "") + to_string(args[i]);
    return s + ")";
  };
  switch (f.kind) {
    case Formula::Kind::Const:
      return f.value ? "true" : "false";
    case Formula::Kind::HalfPlane:
      return lin(f) + ">0";
    case Formula::Kind::Congruence:
      return lin(f) + "=0 mod " + std::to_string(f.p);
    case Formula::Kind::And:
      return f.args.empty() ? "true" : join(f.args, " & ");
    case Formula::Kind::Or:
      return f.args.empty() ? "false" : join(f.args, " | ");
    case Formula::Kind::Not:
      return "!" + to_string(f.args.front());
  }
  return "";
}

}  // namespace trajlab
