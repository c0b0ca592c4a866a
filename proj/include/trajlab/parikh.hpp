#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "trajlab/arith.hpp"
#include "trajlab/dfa.hpp"
#include "trajlab/error.hpp"
#include "trajlab/formula.hpp"
#include "trajlab/nfa.hpp"

namespace trajlab {

/// {base + sum of lambda_i * periods_i}.
struct LinearSet {
  Vec2 base;
  std::vector<Vec2> periods;
  friend bool operator==(const LinearSet&, const LinearSet&) = default;
  friend auto operator<=>(const LinearSet&, const LinearSet&) = default;
};

/// A linear set with at most two periods, independent when there are two.
struct SimpleLinearSet {
  Vec2 base;
  std::vector<Vec2> periods;

  SimpleLinearSet() = default;
  SimpleLinearSet(Vec2 b, std::vector<Vec2> ps) : base(b), periods(std::move(ps)) {
    if (periods.size() > 2 || (periods.size() == 2 && det(periods[0], periods[1]) == 0))
      throw InternalError("linear set is not simple");
  }
  LinearSet linear() const { return {base, periods}; }

  friend bool operator==(const SimpleLinearSet&, const SimpleLinearSet&) = default;
  friend auto operator<=>(const SimpleLinearSet&, const SimpleLinearSet&) = default;
};

/// Membership in the monoid generated by nonnegative vectors, memoized over a
/// growing box.
class MonoidOracle {
 public:
  explicit MonoidOracle(std::vector<Vec2> gens) : gens_(std::move(gens)) {
    for (Vec2 g : gens_)
      if (!g.nonneg() || g.zero()) throw InternalError("monoid generator must be nonnegative and nonzero");
  }

  bool contains(Vec2 v) {
    if (!v.nonneg()) return false;
    if (v.zero()) return true;
    if (v.x > w_ || v.y > h_) grow(std::max(v.x, 2 * w_ + 1), std::max(v.y, 2 * h_ + 1));
    return table_[v.x * (h_ + 1) + v.y];
  }

 private:
  void grow(i64 w, i64 h) {
    if (static_cast<i128>(w + 1) * (h + 1) > (1 << 26)) throw ResourceError("monoid table too large");
    w_ = w;
    h_ = h;
    table_.assign((w + 1) * (h + 1), false);
    table_[0] = true;
    for (i64 x = 0; x <= w; ++x)
      for (i64 y = 0; y <= h; ++y) {
        if (!table_[x * (h + 1) + y]) continue;
        for (Vec2 g : gens_)
          if (x + g.x <= w && y + g.y <= h) table_[(x + g.x) * (h + 1) + y + g.y] = true;
      }
  }

  std::vector<Vec2> gens_;
  i64 w_ = -1, h_ = -1;
  std::vector<bool> table_;
};

inline bool contains(const LinearSet& ls, Vec2 v) {
  return MonoidOracle(ls.periods).contains(v - ls.base);
}

inline bool contains(const SimpleLinearSet& ls, Vec2 v) { return contains(ls.linear(), v); }

using PointSet = std::set<Vec2>;

/// Parikh vectors of accepted words with both counts at most `bound`, by
/// reachability over (state, x, y).
inline PointSet parikh_box_oracle(const Nfa& lang, int bound) {
  if (bound < 0 || bound > 512) throw InputError("box bound must lie in [0,512]");
  Nfa a = remove_epsilon(lang);
  int b1 = bound + 1;
  auto id = [&](int q, int x, int y) { return (static_cast<std::size_t>(q) * b1 + x) * b1 + y; };
  std::vector<bool> seen(static_cast<std::size_t>(a.num_states) * b1 * b1, false);
  std::vector<std::vector<std::pair<Letter, int>>> out(a.num_states);
  for (const auto& t : a.transitions) out[t.from].push_back({*t.label, t.to});
  std::vector<std::array<int, 3>> stack{{a.initial, 0, 0}};
  seen[id(a.initial, 0, 0)] = true;
  PointSet result;
  while (!stack.empty()) {
    auto [q, x, y] = stack.back();
    stack.pop_back();
    if (a.accepting[q]) result.insert({x, y});
    for (auto [c, to] : out[q]) {
      int nx = x + (c == kS), ny = y + (c == kT);
      if (c != kS && c != kT) throw InputError("Parikh image needs letters s and t only");
      if (nx > bound || ny > bound || seen[id(to, nx, ny)]) continue;
      seen[id(to, nx, ny)] = true;
      stack.push_back({to, nx, ny});
    }
  }
  return result;
}

/// Points of a linear set inside [0,bound]^2.
inline PointSet box_points(const LinearSet& ls, int bound) {
  PointSet out;
  if (ls.base.x > bound || ls.base.y > bound || !ls.base.nonneg()) return out;
  std::vector<Vec2> stack{ls.base};
  out.insert(ls.base);
  while (!stack.empty()) {
    Vec2 v = stack.back();
    stack.pop_back();
    for (Vec2 p : ls.periods) {
      Vec2 w = v + p;
      if (w.x <= bound && w.y <= bound && out.insert(w).second) stack.push_back(w);
    }
  }
  return out;
}

template <class Set>
PointSet box_points(const std::vector<Set>& sets, int bound) {
  PointSet out;
  for (const auto& s : sets) {
    PointSet p;
    if constexpr (std::is_same_v<Set, SimpleLinearSet>)
      p = box_points(s.linear(), bound);
    else
      p = box_points(s, bound);
    out.insert(p.begin(), p.end());
  }
  return out;
}

namespace detail {

using Mask = std::uint64_t;

struct Cycle {
  Mask states;
  Vec2 vec;
  friend auto operator<=>(const Cycle&, const Cycle&) = default;
};

// Simple cycles of a small automaton, each rooted at its least state.
inline std::set<Cycle> simple_cycles(const TrajectoryAutomaton& a) {
  std::set<Cycle> out;
  int n = a.num_states();
  for (int root = 0; root < n; ++root) {
    auto dfs = [&](auto&& self, int q, Mask visited, Vec2 vec) -> void {
      for (int k = 0; k < 2; ++k) {
        int to = a.delta[q][k];
        if (to < root) continue;
        Vec2 nv = vec + Vec2{k == 0, k == 1};
        if (to == root) {
          out.insert({visited, nv});
        } else if (!(visited >> to & 1)) {
          self(self, to, visited | Mask{1} << to, nv);
        }
      }
    };
    dfs(dfs, root, Mask{1} << root, {0, 0});
  }
  return out;
}

inline std::vector<Vec2> cycle_vectors(const std::set<Cycle>& cycles, Mask within) {
  std::set<Vec2> vs;
  for (const auto& c : cycles)
    if ((c.states & ~within) == 0) vs.insert(c.vec);
  return {vs.begin(), vs.end()};
}

// Drops periods generated by the remaining ones.
inline std::vector<Vec2> reduce_periods(std::vector<Vec2> ps) {
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (std::size_t i = ps.size(); i-- > 0;) {
    std::vector<Vec2> others = ps;
    others.erase(others.begin() + i);
    if (MonoidOracle(others).contains(ps[i])) ps = std::move(others);
  }
  return ps;
}

inline bool subsumes(const LinearSet& big, const LinearSet& small) {
  MonoidOracle m(big.periods);
  if (!m.contains(small.base - big.base)) return false;
  for (Vec2 p : small.periods)
    if (!m.contains(p)) return false;
  return true;
}

inline std::vector<LinearSet> parikh_search(const TrajectoryAutomaton& a, const std::set<Cycle>& cycles,
                                            std::size_t max_len) {
  struct Node {
    int q;
    Mask visited;
    Vec2 vec;
  };
  std::map<Mask, MonoidOracle> monoids;
  auto monoid = [&](Mask m) -> MonoidOracle& {
    auto it = monoids.find(m);
    if (it == monoids.end()) it = monoids.emplace(m, MonoidOracle(cycle_vectors(cycles, m))).first;
    return it->second;
  };
  std::map<std::pair<int, Mask>, std::vector<Vec2>> kept;
  auto keep = [&](const Node& nd) {
    auto& list = kept[{nd.q, nd.visited}];
    MonoidOracle& m = monoid(nd.visited);
    for (Vec2 v : list)
      if (v.leq(nd.vec) && m.contains(nd.vec - v)) return false;
    list.push_back(nd.vec);
    return true;
  };
  std::vector<Node> frontier{{a.initial, Mask{1} << a.initial, {0, 0}}};
  keep(frontier.front());
  for (std::size_t len = 0; len < max_len && !frontier.empty(); ++len) {
    std::vector<Node> next;
    for (const Node& nd : frontier)
      for (int k = 0; k < 2; ++k) {
        int to = a.delta[nd.q][k];
        if (to < 0) continue;
        Node nn{to, nd.visited | Mask{1} << to, nd.vec + Vec2{k == 0, k == 1}};
        if (keep(nn)) next.push_back(nn);
      }
    frontier = std::move(next);
  }
  std::vector<LinearSet> sets;
  for (const auto& [key, vecs] : kept) {
    if (!a.accepting[key.first]) continue;
    std::vector<Vec2> periods = reduce_periods(cycle_vectors(cycles, key.second));
    for (Vec2 v : vecs) sets.push_back({v, periods});
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<LinearSet> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < sets.size() && !drop; ++j) {
      if (i == j || !subsumes(sets[j], sets[i])) continue;
      // Mutual subsumption keeps the lower index only.
      drop = !subsumes(sets[i], sets[j]) || j < i;
    }
    if (!drop) out.push_back(sets[i]);
  }
  return out;
}

}  // namespace detail

inline constexpr int kParikhValidationBound = 40;

/// Parikh image of a language over {s,t} as a union of linear sets,
/// cross-checked against the box oracle.
inline std::vector<LinearSet> parikh_of_nfa(const Nfa& lang) {
  TrajectoryAutomaton a = minimal_dfa(lang);
  if (a.num_states() > 62) throw ResourceError("automaton too large for Parikh computation");
  if (!a.accepting[a.initial] && a.num_states() == 1) return {};
  std::set<detail::Cycle> cycles = detail::simple_cycles(a);
  std::size_t n = static_cast<std::size_t>(a.num_states());
  PointSet oracle = parikh_box_oracle(a.to_nfa(), kParikhValidationBound);
  for (std::size_t max_len = n * n + n; max_len <= 4 * n * n + 4 * n; max_len += n) {
    std::vector<LinearSet> sets = detail::parikh_search(a, cycles, max_len);
    if (box_points(sets, kParikhValidationBound) == oracle) return sets;
  }
  throw InternalError("Parikh image failed validation against the box oracle");
}

namespace detail {

inline void decompose_into(LinearSet ls, std::set<SimpleLinearSet>& out) {
  std::vector<Vec2>& ps = ls.periods;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  ps.erase(std::remove_if(ps.begin(), ps.end(), [](Vec2 v) { return v.zero(); }), ps.end());
  if (ps.size() <= 1 || (ps.size() == 2 && det(ps[0], ps[1]) != 0)) {
    out.insert(SimpleLinearSet(ls.base, ps));
    return;
  }
  int i1 = -1, i2 = -1;
  for (std::size_t i = 0; i < ps.size() && i1 < 0; ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (det(ps[i], ps[j]) != 0) {
        i1 = static_cast<int>(i), i2 = static_cast<int>(j);
        break;
      }
  if (i1 < 0) {
    // All periods parallel: numerical semigroup along the primitive direction.
    i64 g0 = gcd64(ps[0].x, ps[0].y);
    Vec2 dir{ps[0].x / g0, ps[0].y / g0};
    std::vector<i64> mult;
    for (Vec2 p : ps) mult.push_back(dir.x ? p.x / dir.x : p.y / dir.y);
    i64 d = 0;
    for (i64 m : mult) d = gcd64(d, m);
    i64 top = 0, low = INT64_MAX;
    for (i64& m : mult) m /= d, top = std::max(top, m), low = std::min(low, m);
    i64 limit = top * top + top;
    if (limit > (1 << 22)) throw ResourceError("numerical semigroup too large");
    std::vector<bool> in(limit + 1, false);
    in[0] = true;
    for (i64 k = 1; k <= limit; ++k)
      for (i64 m : mult)
        if (m <= k && in[k - m]) in[k] = true;
    // Conductor: start of a run of `low` consecutive members.
    i64 conductor = -1, run = 0;
    for (i64 k = 0; k <= limit; ++k) {
      run = in[k] ? run + 1 : 0;
      if (run == low) {
        conductor = k - low + 1;
        break;
      }
    }
    if (conductor < 0) throw InternalError("numerical semigroup conductor not found");
    Vec2 step = dir * d;
    for (i64 k = 0; k < conductor; ++k)
      if (in[k]) out.insert(SimpleLinearSet(ls.base + step * k, {}));
    out.insert(SimpleLinearSet(ls.base + step * conductor, {step}));
    return;
  }
  int i3 = 0;
  while (i3 == i1 || i3 == i2) ++i3;
  Vec2 p1 = ps[i1], p2 = ps[i2], p3 = ps[i3];
  std::array<i64, 3> rel{det(p2, p3), -det(p1, p3), det(p1, p2)};
  std::array<int, 3> idx{i1, i2, i3};
  i64 pos = 0, neg = 0;
  for (i64 r : rel) (r > 0 ? pos : neg) += r > 0 ? r : -r;
  int side = pos <= neg ? 1 : -1;
  for (int k = 0; k < 3; ++k) {
    i64 a = rel[k] * side;
    if (a <= 0) continue;
    std::vector<Vec2> rest = ps;
    rest.erase(rest.begin() + idx[k]);
    for (i64 m = 0; m < a; ++m) decompose_into({ls.base + ps[idx[k]] * m, rest}, out);
  }
}

}  // namespace detail

/// Rewrites a linear set as an equal finite union of simple linear sets.
inline std::vector<SimpleLinearSet> decompose_simple(const LinearSet& ls) {
  std::set<SimpleLinearSet> out;
  detail::decompose_into(ls, out);
  return {out.begin(), out.end()};
}

inline std::vector<SimpleLinearSet> decompose_simple(const std::vector<LinearSet>& sets) {
  std::set<SimpleLinearSet> out;
  for (const auto& ls : sets) detail::decompose_into(ls, out);
  return {out.begin(), out.end()};
}

/// Quantifier-free formula for a simple linear set.
inline Formula to_formula(const SimpleLinearSet& s) {
  Vec2 b = s.base;
  // v >= 0 becomes v + 1 > 0.
  auto geq0 = [](i64 c, i64 d, i64 e) { return Formula::half_plane(c, d, checked_add(e, 1)); };
  auto neg = [](i64 v) { return checked_sub(0, v); };
  if (s.periods.empty()) {
    return Formula::all({geq0(1, 0, neg(b.x)), geq0(-1, 0, b.x), geq0(0, 1, neg(b.y)), geq0(0, -1, b.y)});
  }
  if (s.periods.size() == 1) {
    Vec2 p = s.periods[0];
    // Collinearity: p.y*(x-bx) - p.x*(y-by) = 0.
    i64 c = p.y, d = neg(p.x);
    i64 e = narrow(-static_cast<i128>(p.y) * b.x + static_cast<i128>(p.x) * b.y);
    i64 dir_e = narrow(-static_cast<i128>(p.x) * b.x - static_cast<i128>(p.y) * b.y);
    Formula cong = p.x != 0 ? Formula::congruence(1, 0, neg(b.x), p.x < 0 ? -p.x : p.x)
                            : Formula::congruence(0, 1, neg(b.y), p.y < 0 ? -p.y : p.y);
    return Formula::all({geq0(c, d, e), geq0(neg(c), neg(d), neg(e)), geq0(p.x, p.y, dir_e), cong});
  }
  Vec2 p = s.periods[0], q = s.periods[1];
  i64 D = det(p, q);
  i64 sg = D > 0 ? 1 : -1, mod = D > 0 ? D : neg(D);
  // lambda * D = det(z - b, q), mu * D = det(p, z - b).
  i64 lc = q.y, ld = neg(q.x), le = narrow(-static_cast<i128>(b.x) * q.y + static_cast<i128>(b.y) * q.x);
  i64 mc = neg(p.y), md = p.x, me = narrow(static_cast<i128>(p.y) * b.x - static_cast<i128>(p.x) * b.y);
  return Formula::all({geq0(checked_mul(sg, lc), checked_mul(sg, ld), checked_mul(sg, le)),
                       geq0(checked_mul(sg, mc), checked_mul(sg, md), checked_mul(sg, me)),
                       Formula::congruence(lc, ld, le, mod), Formula::congruence(mc, md, me, mod)});
}

inline Formula to_formula(const std::vector<SimpleLinearSet>& sets) {
  std::vector<Formula> parts;
  for (const auto& s : sets) parts.push_back(to_formula(s));
  if (parts.empty()) return Formula::constant(false);
  if (parts.size() == 1) return parts.front();
  return Formula::any(std::move(parts));
}

/// Formula for the Parikh image of a language over {s,t}.
inline Formula formula_of_regular(const Nfa& lang) {
  return to_formula(decompose_simple(parikh_of_nfa(lang)));
}

}  // namespace trajlab
