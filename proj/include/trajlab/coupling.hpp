#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "trajlab/error.hpp"
#include "trajlab/pda.hpp"

namespace trajlab {

/// Letters [start, start + len) of a run's word.
struct Span {
  std::size_t start = 0;
  std::size_t len = 0;
  std::size_t end() const { return start + len; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Steps (1-based, inclusive) of r<x>: from the step reading the first letter
/// to the step reading the last one.
inline std::pair<int, int> inner_steps(const Run& r, Span x) {
  if (x.len == 0 || x.end() > r.word.size()) throw InputError("span empty or outside the word");
  return {r.read_step[x.start], r.read_step[x.end() - 1]};
}

/// Steps of r<<x>>: r<x> extended by the empty-read steps at both ends.
inline std::pair<int, int> outer_steps(const Run& r, Span x) {
  if (x.end() > r.word.size()) throw InputError("span outside the word");
  int first = x.start == 0 ? 1 : r.read_step[x.start - 1] + 1;
  int last = x.end() == r.word.size() ? r.length() : r.read_step[x.end()] - 1;
  return {first, last};
}

/// Letters consumed once position `pos` is reached.
inline std::size_t consumed(const Run& r, int pos) {
  return static_cast<std::size_t>(std::upper_bound(r.read_step.begin(), r.read_step.end(), pos) -
                                  r.read_step.begin());
}

/// Steps i <= j are coupled: stk(i-1) = stk(j) and every stack in between is
/// strictly higher.
inline bool r_coupled(const Run& r, int i, int j) {
  if (i < 1 || j > r.length() || i > j) throw InputError("step positions out of range");
  int base = r.height(i - 1);
  for (int k = i; k < j; ++k)
    if (r.height(k) <= base) return false;
  return r.stacks[i - 1] == r.stacks[j];
}

/// All coupled step pairs, i.e. each push with the pop of its symbol.
inline std::vector<std::pair<int, int>> coupled_pairs(const Run& r) {
  std::vector<std::pair<int, int>> out;
  std::vector<int> open;
  for (int k = 1; k <= r.length(); ++k) {
    if (r.height(k) > r.height(k - 1)) {
      open.push_back(k);
    } else {
      out.push_back({open.back(), k});
      open.pop_back();
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff two coupled pairs (i1,j1), (i2,j2) have i1 < i2 <= j1 < j2.
inline bool has_crossing_couplings(const Run& r) {
  auto pairs = coupled_pairs(r);
  for (const auto& [i1, j1] : pairs)
    for (const auto& [i2, j2] : pairs)
      if (i1 < i2 && i2 <= j1 && j2 > j1) return true;
  return false;
}

inline bool spans_r_coupled(const Run& r, Span x, Span y) {
  auto [xa, xb] = inner_steps(r, x);
  auto [ya, yb] = inner_steps(r, y);
  for (const auto& [i, j] : coupled_pairs(r))
    if (i >= xa && i <= xb && j >= ya && j <= yb) return true;
  return false;
}

enum class CouplingVerdict { Coupled, NotCoupled, NoAcceptingRun };

inline std::string to_string(CouplingVerdict v) {
  switch (v) {
    case CouplingVerdict::Coupled:
      return "coupled";
    case CouplingVerdict::NotCoupled:
      return "not-coupled";
    case CouplingVerdict::NoAcceptingRun:
      return "no-accepting-run";
  }
  return "";
}

inline void check_spans(const Word& w, Span x, Span y) {
  if (x.len == 0 || y.len == 0) throw PreconditionError("spans must be nonempty");
  if (x.end() > y.start) throw PreconditionError("span x must end before span y starts");
  if (y.end() > w.size()) throw PreconditionError("span outside the word");
}

/// x and y are coupled in every accepting run of `a` on `w`.
inline CouplingVerdict a_coupled(const Pda& a, const Word& w, Span x, Span y, RunCaps caps = {}) {
  check_spans(w, x, y);
  auto runs = enumerate_runs(a, w, caps);
  if (runs.empty()) return CouplingVerdict::NoAcceptingRun;
  for (const auto& r : runs)
    if (!spans_r_coupled(r, x, y)) return CouplingVerdict::NotCoupled;
  return CouplingVerdict::Coupled;
}

/// (u[:c_i], stt(i), stt(j), v[c_j:]) plus positions and the stack-effect.
struct Endcap {
  Word u_prefix;
  int state_i = 0;
  int state_j = 0;
  Word v_suffix;
  int i = 0, j = 0;
  Stack effect;

  bool same_tuple(const Endcap& o) const {
    return std::tie(u_prefix, state_i, state_j, v_suffix) == std::tie(o.u_prefix, o.state_i, o.state_j, o.v_suffix);
  }
};

/// Min-endcap of r for the decomposition u x v with |u| = u_len, |x| = x_len.
inline Endcap min_endcap(const Run& r, std::size_t u_len, std::size_t x_len) {
  if (x_len == 0) throw InputError("min-endcap needs a nonempty x");
  if (u_len + x_len > r.word.size()) throw InputError("decomposition does not match the run label");
  auto [sx, ex] = inner_steps(r, {u_len, x_len});
  int n = r.length();
  int hx = r.height(sx - 1);
  for (int k = sx - 1; k <= ex; ++k) hx = std::min(hx, r.height(k));
  int hv = r.height(ex);
  for (int k = ex; k <= n; ++k) hv = std::min(hv, r.height(k));
  int m = std::min(hx, hv);
  Endcap c;
  int best = -1;
  for (int k = 0; k <= sx - 1; ++k)
    if (r.height(k) <= m && r.height(k) >= best) best = r.height(k), c.i = k;
  c.j = ex;
  while (r.height(c.j) != hv) ++c.j;
  c.state_i = r.states[c.i];
  c.state_j = r.states[c.j];
  c.u_prefix = r.word.substr(0, consumed(r, c.i));
  c.v_suffix = r.word.substr(consumed(r, c.j));
  const Stack& si = r.stacks[c.i];
  const Stack& sj = r.stacks[c.j];
  c.effect.assign(sj.begin() + static_cast<long>(std::min(si.size(), sj.size())), sj.end());
  return c;
}

struct EndcapFacts {
  bool after_i_not_lower = true;
  bool after_j_not_lower = true;
  bool effect_pushed_in_x = true;
  bool all() const { return after_i_not_lower && after_j_not_lower && effect_pushed_in_x; }
};

/// The three assertions about a min-endcap, checked on the run.
inline EndcapFacts check_endcap_facts(const Run& r, std::size_t u_len, std::size_t x_len, const Endcap& c) {
  EndcapFacts f;
  for (int k = c.i; k <= r.length(); ++k)
    if (r.height(k) < r.height(c.i)) f.after_i_not_lower = false;
  for (int k = c.j; k <= r.length(); ++k)
    if (r.height(k) < r.height(c.j)) f.after_j_not_lower = false;
  const Stack& si = r.stacks[c.i];
  const Stack& sj = r.stacks[c.j];
  if (sj.size() < si.size() || !std::equal(si.begin(), si.end(), sj.begin())) {
    f.effect_pushed_in_x = false;
    return f;
  }
  auto [sx, ex] = inner_steps(r, {u_len, x_len});
  // The symbol at height h in stk(j) was pushed by the last step before j
  // that rose from h-1 to h.
  for (int h = static_cast<int>(si.size()) + 1; h <= static_cast<int>(sj.size()); ++h) {
    int k = c.j;
    while (k > 0 && !(r.height(k) == h && r.height(k - 1) == h - 1)) --k;
    if (k < sx || k > ex) f.effect_pushed_in_x = false;
  }
  return f;
}

/// Relations Q= and Q> of the stack word e for words of length at most k.
struct SuffixSignature {
  int k = 0;
  bool epsilon = false;  // reserved class of the empty stack word
  std::set<std::tuple<int, Word, int>> returns;  // runs ending with empty stack
  std::set<std::tuple<int, Word, int>> stays;    // runs ending above it
  friend bool operator==(const SuffixSignature&, const SuffixSignature&) = default;
};

inline SuffixSignature suffix_signature(const Pda& a, const Stack& e, int k) {
  if (k < 0 || k > 6) throw InputError("signature length must lie in [0,6]");
  if (e.size() > 8) throw InputError("stack word longer than 8");
  SuffixSignature sig;
  sig.k = k;
  if (e.empty()) {
    sig.epsilon = true;
    return sig;
  }
  auto out = a.outgoing();
  std::size_t limit = e.size() + detail::height_limit_for(a, static_cast<std::size_t>(k));
  for (int q = 0; q < a.num_states(); ++q) {
    auto dfs = [&](auto&& self, const Word& w, const std::set<detail::Config>& cs) -> void {
      for (const auto& cf : cs) (cf.stack.empty() ? sig.returns : sig.stays).insert({q, w, cf.state});
      if (static_cast<int>(w.size()) == k) return;
      for (Letter c : a.input) {
        auto next = detail::read_letter(a, out, cs, c, limit);
        if (!next.empty()) self(self, w + c, next);
      }
    };
    dfs(dfs, "", detail::eps_closure(a, out, {{q, e}}, limit));
  }
  return sig;
}

/// Runs (not necessarily accepting) consuming exactly `w`, ending on the step
/// that reads its last letter (or at position 0 for the empty word).
inline std::vector<Run> enumerate_prefix_runs(const Pda& a, const Word& w, RunCaps caps = {}) {
  std::size_t cap = max_runs_from_env(caps.max_runs);
  std::size_t budget = caps.step_budget ? caps.step_budget : default_step_budget(a, w.size());
  auto out = a.outgoing();
  std::vector<Run> runs;
  std::vector<int> steps;
  Stack stack;
  auto dfs = [&](auto&& self, int q, std::size_t pos) -> void {
    if (pos == w.size()) {
      if (runs.size() >= cap) throw ResourceError("run explosion");
      runs.push_back(replay(a, w, steps));
      return;
    }
    if (steps.size() >= budget) return;
    for (int k : out[q]) {
      const PdaTransition& t = a.transitions[k];
      if (t.read && w[pos] != *t.read) continue;
      if (!t.push && (stack.empty() || stack.back() != t.sym)) continue;
      t.push ? stack.push_back(t.sym) : stack.pop_back();
      steps.push_back(k);
      self(self, t.to, pos + (t.read ? 1 : 0));
      steps.pop_back();
      t.push ? stack.pop_back() : stack.push_back(t.sym);
    }
  };
  dfs(dfs, a.initial, 0);
  return runs;
}

struct SurgeryResult {
  std::string case_label;  // "1", "2.1" or "2.2"
  Endcap endcap1, endcap2;
  bool surgered_run_valid = false;  // constructed run replays and accepts w2 y z
  bool accepted = false;            // independent membership of w2 y z
  Word target;
};

/// Replays the run surgery: `r` is an accepting run on w1 y z with
/// w1 = u1 x1 v1; `r2` is a run on w2 = u2 x2 v2.
inline SurgeryResult surgery_replay(const Pda& a, const Run& r, std::size_t u1, std::size_t x1, std::size_t v1,
                                    std::size_t y_len, const Run& r2, std::size_t u2, std::size_t x2) {
  std::size_t w1 = u1 + x1 + v1;
  if (w1 + y_len > r.word.size()) throw InputError("decomposition longer than the run label");
  if (!a.accepting[r.states.back()]) throw PreconditionError("run on w1 y z is not accepting");
  if (y_len > 0 && spans_r_coupled(r, {u1, x1}, {w1, y_len}))
    throw PreconditionError("x1 is coupled with y");
  int split = w1 == 0 ? 0 : r.read_step[w1 - 1];
  Run r1 = replay(a, r.word.substr(0, w1), {r.steps.begin(), r.steps.begin() + split});
  SurgeryResult res;
  res.endcap1 = min_endcap(r1, u1, x1);
  res.endcap2 = min_endcap(r2, u2, x2);
  if (!res.endcap1.same_tuple(res.endcap2)) throw PreconditionError("runs do not share a min-endcap");
  bool e1 = res.endcap1.effect.empty(), e2 = res.endcap2.effect.empty();
  if (e1 != e2) throw PreconditionError("one stack-effect is empty and the other is not");
  std::size_t z_len = r.word.size() - w1 - y_len;
  if (!e1 && suffix_signature(a, res.endcap1.effect, static_cast<int>(z_len)) !=
                 suffix_signature(a, res.endcap2.effect, static_cast<int>(z_len)))
    throw PreconditionError("stack-effects are not suffix-equivalent");

  const int i1 = res.endcap1.i, j1 = res.endcap1.j, i2 = res.endcap2.i, j2 = res.endcap2.j;
  res.target = r2.word + r.word.substr(w1);
  std::vector<int> head(r.steps.begin(), r.steps.begin() + i1);
  head.insert(head.end(), r2.steps.begin() + i2, r2.steps.begin() + j2);
  int t = -1;
  if (!e1) {
    std::size_t z_start = w1 + y_len;
    if (z_start < r.word.size())
      for (int pos = r.read_step[z_start]; pos <= r.length() && t < 0; ++pos)
        if (r.stacks[pos] == r.stacks[j1]) t = pos;
  }
  res.case_label = e1 ? "1" : (t < 0 ? "2.1" : "2.2");
  std::vector<int> steps = head;
  if (t < 0) {
    steps.insert(steps.end(), r.steps.begin() + j1, r.steps.end());
    try {
      Run s = replay(a, res.target, steps);
      res.surgered_run_valid = a.accepting[s.states.back()];
    } catch (const InternalError&) {
      res.surgered_run_valid = false;
    }
  } else {
    steps.insert(steps.end(), r.steps.begin() + j1, r.steps.begin() + t);
    std::size_t done = consumed(r, t);
    Word prefix = res.target.substr(0, res.target.size() - (r.word.size() - done));
    try {
      Run s = replay(a, prefix, steps);
      res.surgered_run_valid = accepts_from(a, s.states.back(), s.stacks.back(), r.word.substr(done));
    } catch (const InternalError&) {
      res.surgered_run_valid = false;
    }
  }
  res.accepted = accepts(a, res.target);
  return res;
}

/// Letters outside `keep` become empty reads. The result is analysis-only
/// unless nothing was dropped.
inline Pda project_alphabet(const Pda& a, const std::set<Letter>& keep) {
  Pda out = a;
  out.input.clear();
  bool dropped = false;
  for (auto& t : out.transitions) {
    if (!t.read) continue;
    if (keep.contains(*t.read)) {
      out.input.insert(*t.read);
    } else {
      t.read.reset();
      dropped = true;
    }
  }
  for (Letter c : a.input)
    if (keep.contains(c)) out.input.insert(c);
  out.analysis_only = a.analysis_only || dropped;
  return out;
}

}  // namespace trajlab
