#pragma once

#include <array>
#include <map>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "trajlab/error.hpp"
#include "trajlab/nfa.hpp"
#include "trajlab/regex.hpp"

namespace trajlab {

inline constexpr Letter kS = 's';
inline constexpr Letter kT = 't';

inline int letter_index(Letter c) {
  if (c == kS) return 0;
  if (c == kT) return 1;
  throw InputError(std::string("letter '") + c + "' outside {s,t}");
}

inline Letter index_letter(int i) { return i == 0 ? kS : kT; }

/// Partial DFA over {s,t}. `delta[q][0]` follows s, `delta[q][1]` follows t;
/// -1 means undefined.
struct TrajectoryAutomaton {
  int initial = 0;
  std::vector<bool> accepting;
  std::vector<std::array<int, 2>> delta;

  int num_states() const { return static_cast<int>(delta.size()); }

  int step(int q, Letter c) const { return q < 0 ? -1 : delta[q][letter_index(c)]; }

  bool accepts(std::string_view w) const {
    int q = initial;
    for (Letter c : w) {
      q = step(q, c);
      if (q < 0) return false;
    }
    return accepting[q];
  }

  Nfa to_nfa() const {
    Nfa a;
    for (int q = 0; q < num_states(); ++q) a.add_state(accepting[q]);
    a.initial = initial;
    a.alphabet = {kS, kT};
    for (int q = 0; q < num_states(); ++q)
      for (int k = 0; k < 2; ++k)
        if (delta[q][k] >= 0) a.add_transition(q, index_letter(k), delta[q][k]);
    return a;
  }

  void validate() const {
    if (delta.empty()) throw InputError("automaton has no states");
    if (static_cast<int>(accepting.size()) != num_states())
      throw InputError("accepting vector does not match state count");
    if (initial < 0 || initial >= num_states()) throw InputError("initial state out of range");
    for (const auto& row : delta)
      for (int to : row)
        if (to < -1 || to >= num_states()) throw InputError("transition target out of range");
  }

  friend bool operator==(const TrajectoryAutomaton&, const TrajectoryAutomaton&) = default;
};

/// Drops unreachable states and states from which no accepting state is
/// reachable. The initial state becomes 0; an empty language yields one
/// rejecting state.
inline TrajectoryAutomaton trim(const TrajectoryAutomaton& a) {
  int n = a.num_states();
  std::vector<bool> fwd(n, false), bwd(n, false);
  std::vector<int> order;
  std::queue<int> bfs;
  bfs.push(a.initial);
  fwd[a.initial] = true;
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    order.push_back(q);
    for (int to : a.delta[q])
      if (to >= 0 && !fwd[to]) fwd[to] = true, bfs.push(to);
  }
  for (int q = 0; q < n; ++q) bwd[q] = a.accepting[q];
  for (bool changed = true; changed;) {
    changed = false;
    for (int q = 0; q < n; ++q)
      for (int to : a.delta[q])
        if (!bwd[q] && to >= 0 && bwd[to]) bwd[q] = changed = true;
  }
  TrajectoryAutomaton out;
  if (!bwd[a.initial]) {
    out.accepting = {false};
    out.delta = {{-1, -1}};
    return out;
  }
  std::vector<int> remap(n, -1);
  for (int q : order)
    if (bwd[q]) {
      remap[q] = out.num_states();
      out.delta.push_back({-1, -1});
      out.accepting.push_back(a.accepting[q]);
    }
  for (int q : order) {
    if (remap[q] < 0) continue;
    for (int k = 0; k < 2; ++k) {
      int to = a.delta[q][k];
      out.delta[remap[q]][k] = to >= 0 ? remap[to] : -1;
    }
  }
  out.initial = 0;
  return out;
}

/// Subset construction restricted to the letters s and t.
inline TrajectoryAutomaton determinize(const Nfa& a) {
  for (Letter c : a.alphabet) letter_index(c);
  TrajectoryAutomaton out;
  std::map<StateSet, int> index;
  std::vector<StateSet> sets;
  auto intern = [&](StateSet s) {
    auto [it, fresh] = index.emplace(s, static_cast<int>(sets.size()));
    if (fresh) {
      out.accepting.push_back(any_accepting(a, s));
      out.delta.push_back({-1, -1});
      sets.push_back(std::move(s));
    }
    return it->second;
  };
  out.initial = intern(epsilon_closure(a, {a.initial}));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (int k = 0; k < 2; ++k) {
      StateSet next = nfa_step(a, sets[i], index_letter(k));
      if (!next.empty()) {
        int to = intern(std::move(next));
        out.delta[i][k] = to;
      }
    }
  }
  return out;
}

/// Moore partition refinement followed by trimming.
inline TrajectoryAutomaton minimize(const TrajectoryAutomaton& in) {
  TrajectoryAutomaton a = trim(in);
  int n = a.num_states();
  int sink = n;  // implicit completion state
  auto target = [&](int q, int k) {
    if (q == sink) return sink;
    int to = a.delta[q][k];
    return to < 0 ? sink : to;
  };
  std::vector<int> cls(n + 1);
  for (int q = 0; q < n; ++q) cls[q] = a.accepting[q] ? 1 : 0;
  cls[sink] = 0;
  int count = 0;
  for (;;) {
    std::map<std::array<int, 3>, int> sig;
    std::vector<int> next(n + 1);
    for (int q = 0; q <= n; ++q) {
      std::array<int, 3> key{cls[q], cls[target(q, 0)], cls[target(q, 1)]};
      auto [it, _] = sig.emplace(key, static_cast<int>(sig.size()));
      next[q] = it->second;
    }
    int c = static_cast<int>(sig.size());
    cls = std::move(next);
    if (c == count) break;
    count = c;
  }
  TrajectoryAutomaton out;
  out.delta.assign(count, {-1, -1});
  out.accepting.assign(count, false);
  for (int q = 0; q <= n; ++q) {
    if (q < n) out.accepting[cls[q]] = a.accepting[q];
    for (int k = 0; k < 2; ++k) out.delta[cls[q]][k] = cls[target(q, k)];
  }
  out.initial = cls[a.initial];
  return trim(out);
}

inline TrajectoryAutomaton minimal_dfa(const Nfa& a) { return minimize(determinize(a)); }

/// Minimal trimmed DFA for a regex over {s,t}; `|` is union.
inline TrajectoryAutomaton parse_trajectory_regex(std::string_view text) {
  return minimal_dfa(regex_to_nfa(parse_regex(text, {kS, kT})));
}

}  // namespace trajlab
