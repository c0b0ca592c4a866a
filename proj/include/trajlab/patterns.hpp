#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "trajlab/dfa.hpp"
#include "trajlab/error.hpp"
#include "trajlab/nfa.hpp"
#include "trajlab/scc.hpp"

namespace trajlab {

/// True iff every length n is accepted by the unary automaton `a`.
inline bool accepts_all_lengths(const Nfa& a, Letter c) {
  std::map<StateSet, int> seen;
  StateSet cur = epsilon_closure(a, {a.initial});
  for (int n = 0;; ++n) {
    if (!any_accepting(a, cur)) return false;
    if (!seen.emplace(cur, n).second) return true;
    cur = nfa_step(a, cur, c);
  }
}

/// For each n, T has a word with n letters s and a word with n letters t.
inline bool is_entirely_useful(const TrajectoryAutomaton& t) {
  Nfa a = t.to_nfa();
  return accepts_all_lengths(relabel(a, {{kT, std::nullopt}}), kS) &&
         accepts_all_lengths(relabel(a, {{kS, std::nullopt}}), kT);
}

struct Connector {
  std::vector<int> states;  // at least one state
  std::string labels;       // labels.size() == states.size() - 1
  friend auto operator<=>(const Connector&, const Connector&) = default;
};

struct Anchor {
  int state = 0;
  std::vector<int> scc;
  std::set<Letter> alphabet;
  friend auto operator<=>(const Anchor&, const Anchor&) = default;
};

/// Connectors u1..u_{n+1} and n anchors; connector i ends at anchor i.
struct SccPattern {
  std::vector<Connector> connectors;
  std::vector<Anchor> anchors;
  bool hard = false;
  friend auto operator<=>(const SccPattern&, const SccPattern&) = default;
};

struct SccInfo {
  std::vector<int> comp;
  std::vector<bool> recurrent;  // per component
  std::vector<std::set<Letter>> alphabet;  // per component
  std::vector<std::vector<int>> members;  // per component, sorted
};

inline SccInfo scc_info(const TrajectoryAutomaton& t) {
  std::vector<std::vector<int>> adj(t.num_states());
  for (int q = 0; q < t.num_states(); ++q)
    for (int to : t.delta[q])
      if (to >= 0) adj[q].push_back(to);
  SccInfo info;
  info.comp = tarjan_scc(adj);
  int nc = info.comp.empty() ? 0 : *std::max_element(info.comp.begin(), info.comp.end()) + 1;
  info.recurrent.assign(nc, false);
  info.alphabet.assign(nc, {});
  info.members.assign(nc, {});
  for (int q = 0; q < t.num_states(); ++q) {
    info.members[info.comp[q]].push_back(q);
    for (int k = 0; k < 2; ++k) {
      int to = t.delta[q][k];
      if (to >= 0 && info.comp[to] == info.comp[q]) {
        info.recurrent[info.comp[q]] = true;
        info.alphabet[info.comp[q]].insert(index_letter(k));
      }
    }
  }
  return info;
}

/// Hard iff some anchor alphabet is {s,t} or the alphabet sequence contains
/// stst or tsts as a subsequence.
inline bool is_hard_alphabet_sequence(const std::vector<std::set<Letter>>& seq) {
  for (const auto& a : seq)
    if (a.size() == 2) return true;
  for (const std::string target : {"stst", "tsts"}) {
    std::size_t k = 0;
    for (const auto& a : seq)
      if (k < target.size() && a.contains(target[k])) ++k;
    if (k == target.size()) return true;
  }
  return false;
}

inline constexpr std::size_t kDefaultPatternCap = 10000;

/// Simple accepting paths times anchor subsets; output sorted and deduplicated.
inline std::vector<SccPattern> scc_patterns(const TrajectoryAutomaton& t,
                                            std::size_t cap = kDefaultPatternCap) {
  SccInfo info = scc_info(t);
  std::set<SccPattern> out;
  std::vector<int> path{t.initial};
  std::string labels;
  std::vector<bool> on_path(t.num_states(), false);
  on_path[t.initial] = true;

  auto emit_path = [&]() {
    std::vector<int> candidates;
    for (std::size_t i = 0; i < path.size(); ++i)
      if (info.recurrent[info.comp[path[i]]]) candidates.push_back(static_cast<int>(i));
    if (candidates.size() > 20) throw ResourceError("too many anchor candidates on one path");
    for (unsigned long mask = 0; mask < (1ul << candidates.size()); ++mask) {
      SccPattern p;
      std::size_t start = 0;
      for (std::size_t b = 0; b < candidates.size(); ++b) {
        if (!(mask >> b & 1)) continue;
        std::size_t pos = candidates[b];
        Connector c;
        c.states.assign(path.begin() + start, path.begin() + pos + 1);
        c.labels = labels.substr(start, pos - start);
        p.connectors.push_back(std::move(c));
        int comp = info.comp[path[pos]];
        p.anchors.push_back({path[pos], info.members[comp], info.alphabet[comp]});
        start = pos;
      }
      Connector last;
      last.states.assign(path.begin() + start, path.end());
      last.labels = labels.substr(start);
      p.connectors.push_back(std::move(last));
      std::vector<std::set<Letter>> seq;
      for (const auto& a : p.anchors) seq.push_back(a.alphabet);
      p.hard = is_hard_alphabet_sequence(seq);
      out.insert(std::move(p));
      if (out.size() > cap)
        throw ResourceError("pattern count exceeds cap of " + std::to_string(cap));
    }
  };

  auto dfs = [&](auto&& self, int q) -> void {
    if (t.accepting[q]) emit_path();
    for (int k = 0; k < 2; ++k) {
      int to = t.delta[q][k];
      if (to < 0 || on_path[to]) continue;
      on_path[to] = true;
      path.push_back(to);
      labels.push_back(index_letter(k));
      self(self, to);
      labels.pop_back();
      path.pop_back();
      on_path[to] = false;
    }
  };
  dfs(dfs, t.initial);
  return {out.begin(), out.end()};
}

/// Labels of the pattern's paths: connectors with closed walks inside the
/// anchor SCC inserted at each anchor.
inline Nfa pattern_language(const TrajectoryAutomaton& t, const SccPattern& p) {
  Nfa a;
  a.alphabet = {kS, kT};
  int cur = a.add_state();
  a.initial = cur;
  for (std::size_t i = 0; i < p.connectors.size(); ++i) {
    for (Letter c : p.connectors[i].labels) {
      int next = a.add_state();
      a.add_transition(cur, c, next);
      cur = next;
    }
    if (i == p.anchors.size()) break;
    const Anchor& an = p.anchors[i];
    std::map<int, int> copy;
    for (int q : an.scc) copy[q] = a.add_state();
    for (int q : an.scc)
      for (int k = 0; k < 2; ++k) {
        int to = t.delta[q][k];
        if (to >= 0 && copy.contains(to)) a.add_transition(copy[q], index_letter(k), copy[to]);
      }
    a.add_transition(cur, std::nullopt, copy[an.state]);
    int exit = a.add_state();
    a.add_transition(copy[an.state], std::nullopt, exit);
    cur = exit;
  }
  a.accepting[cur] = true;
  return a;
}

inline Nfa patterns_union(const TrajectoryAutomaton& t, const std::vector<SccPattern>& ps,
                          bool want_hard) {
  std::vector<Nfa> parts;
  for (const auto& p : ps)
    if (p.hard == want_hard) parts.push_back(pattern_language(t, p));
  if (parts.empty()) return empty_language_nfa({kS, kT});
  return trim(remove_epsilon(union_of(parts, {kS, kT})));
}

/// hard(A): labels of hard patterns.
inline Nfa hard_language(const TrajectoryAutomaton& t, std::size_t cap = kDefaultPatternCap) {
  return patterns_union(t, scc_patterns(t, cap), true);
}

/// easy(A): labels of non-hard patterns.
inline Nfa easy_language(const TrajectoryAutomaton& t, std::size_t cap = kDefaultPatternCap) {
  return patterns_union(t, scc_patterns(t, cap), false);
}

/// Complete version of a DFA with an explicit rejecting sink at the end.
inline TrajectoryAutomaton complete(const TrajectoryAutomaton& a) {
  TrajectoryAutomaton out = a;
  int sink = out.num_states();
  out.delta.push_back({sink, sink});
  out.accepting.push_back(false);
  for (auto& row : out.delta)
    for (int& to : row)
      if (to < 0) to = sink;
  return out;
}

/// Product DFA accepting L(a) \ L(b).
inline TrajectoryAutomaton difference(const TrajectoryAutomaton& a, const TrajectoryAutomaton& b) {
  TrajectoryAutomaton ca = complete(a), cb = complete(b);
  int nb = cb.num_states();
  TrajectoryAutomaton out;
  int n = ca.num_states() * nb;
  out.delta.assign(n, {-1, -1});
  out.accepting.assign(n, false);
  for (int p = 0; p < ca.num_states(); ++p)
    for (int q = 0; q < nb; ++q) {
      int id = p * nb + q;
      out.accepting[id] = ca.accepting[p] && !cb.accepting[q];
      for (int k = 0; k < 2; ++k) out.delta[id][k] = ca.delta[p][k] * nb + cb.delta[q][k];
    }
  out.initial = ca.initial * nb + cb.initial;
  return minimize(out);
}

/// The alternative reading of easy(A): T minus hard(A), as a DFA.
inline TrajectoryAutomaton t_minus_hard(const TrajectoryAutomaton& t,
                                        std::size_t cap = kDefaultPatternCap) {
  return difference(t, minimal_dfa(hard_language(t, cap)));
}

}  // namespace trajlab
