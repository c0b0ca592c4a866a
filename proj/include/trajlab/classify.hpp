#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajlab/builders.hpp"
#include "trajlab/grid.hpp"
#include "trajlab/parikh.hpp"
#include "trajlab/patterns.hpp"
#include "trajlab/shuffle.hpp"

namespace trajlab {

enum class Verdict { CflSafe, DcflHostile, DcflMixed };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CflSafe:
      return "cfl-safe";
    case Verdict::DcflHostile:
      return "dcfl-hostile";
    case Verdict::DcflMixed:
      return "dcfl-mixed";
  }
  return "";
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "cfl-safe") return Verdict::CflSafe;
  if (s == "dcfl-hostile") return Verdict::DcflHostile;
  if (s == "dcfl-mixed") return Verdict::DcflMixed;
  throw InputError("unknown verdict '" + s + "'");
}

/// Verdict plus the objects it was derived from.
struct Classification {
  Verdict verdict = Verdict::CflSafe;
  bool entirely_useful = true;
  TrajectoryAutomaton trajectory;
  std::vector<SccPattern> patterns;
  Nfa hard;                          // hard(A), empty-read free
  std::vector<LinearSet> parikh;     // Parikh image of hard(A)
  Formula formula = Formula::constant(false);
  std::optional<Grid> antigrid;      // grid of the complement of the formula
  std::vector<Vec2> common_core;     // cone-core intersection for the complement
  i64 modulus = 1;

  friend bool operator==(const Classification&, const Classification&) = default;
};

struct ClassifyOptions {
  bool allow_not_useful = false;
  std::size_t pattern_cap = kDefaultPatternCap;
};

inline Classification classify_trajectory(const TrajectoryAutomaton& t, ClassifyOptions opt = {}) {
  t.validate();
  Classification c;
  c.trajectory = t;
  c.entirely_useful = is_entirely_useful(t);
  if (!c.entirely_useful && !opt.allow_not_useful)
    throw PreconditionError("NotEntirelyUseful: some letter count is missing from the trajectory");
  c.patterns = scc_patterns(t, opt.pattern_cap);
  c.hard = patterns_union(t, c.patterns, true);
  if (is_empty_language(c.hard)) {
    c.verdict = Verdict::CflSafe;
    return c;
  }
  c.parikh = parikh_of_nfa(c.hard);
  c.formula = to_formula(decompose_simple(c.parikh));
  GridDecision d = decide_grid_report(complement(c.formula));
  c.antigrid = d.grid;
  c.common_core = d.common_core;
  c.modulus = d.field.modulus;
  c.verdict = c.antigrid ? Verdict::DcflMixed : Verdict::DcflHostile;
  return c;
}

inline Classification classify_trajectory(std::string_view regex, ClassifyOptions opt = {}) {
  return classify_trajectory(parse_trajectory_regex(regex), opt);
}

/// Witness DPDAs for a mixed trajectory: word lengths in i+pN over {a,b}
/// and in j+qN over {c,d}.
struct MixedWitnesses {
  Grid grid;
  Pda left;
  Pda right;
};

inline MixedWitnesses mixed_witnesses(const TrajectoryAutomaton& t, const Grid& g) {
  g.validate();
  Formula f = formula_of_regular(hard_language(t));
  if (!verify_grid(complement(f), g)) throw PreconditionError("grid " + to_string(g) + " is not an antigrid");
  if (g.i > 2048 || g.j > 2048 || g.p > 2048 || g.q > 2048) throw ResourceError("antigrid too large for witnesses");
  return {g, dpda_length_class(static_cast<int>(g.i), static_cast<int>(g.p), 'a', 'b'),
          dpda_length_class(static_cast<int>(g.j), static_cast<int>(g.q), 'c', 'd')};
}

/// Bounded shuffles of the witnesses along T and along easy(A).
struct MixedEquality {
  std::set<Word> along_t;
  std::set<Word> along_easy;
  bool equal() const { return along_t == along_easy; }
};

inline MixedEquality mixed_equality(const TrajectoryAutomaton& t, const MixedWitnesses& w, std::size_t max_len) {
  TrajectoryAutomaton easy = minimal_dfa(easy_language(t));
  return {shuffle_oracle(Language{w.left}, Language{w.right}, t, max_len),
          shuffle_oracle(Language{w.left}, Language{w.right}, easy, max_len)};
}

}  // namespace trajlab
