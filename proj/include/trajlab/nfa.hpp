#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trajlab/error.hpp"

namespace trajlab {

using Letter = char;
using Word = std::string;

struct NfaTransition {
  int from = 0;
  std::optional<Letter> label;  // nullopt: empty read
  int to = 0;

  friend bool operator==(const NfaTransition&, const NfaTransition&) = default;
  friend auto operator<=>(const NfaTransition&, const NfaTransition&) = default;
};

/// Nondeterministic automaton with empty-read transitions over an arbitrary
/// finite letter set. States are dense integers [0, num_states).
struct Nfa {
  int num_states = 0;
  int initial = 0;
  std::vector<bool> accepting;
  std::vector<NfaTransition> transitions;
  std::set<Letter> alphabet;

  int add_state(bool is_accepting = false) {
    accepting.push_back(is_accepting);
    return num_states++;
  }

  void add_transition(int from, std::optional<Letter> label, int to) {
    if (label) alphabet.insert(*label);
    transitions.push_back({from, label, to});
  }

  void validate() const {
    if (num_states < 1) throw InputError("automaton has no states");
    if (static_cast<int>(accepting.size()) != num_states)
      throw InputError("accepting vector does not match state count");
    if (initial < 0 || initial >= num_states) throw InputError("initial state out of range");
    for (const auto& t : transitions) {
      if (t.from < 0 || t.from >= num_states || t.to < 0 || t.to >= num_states)
        throw InputError("transition endpoint is not a declared state");
      if (t.label && !alphabet.contains(*t.label))
        throw InputError(std::string("transition letter '") + *t.label + "' not in alphabet");
    }
  }

  friend bool operator==(const Nfa&, const Nfa&) = default;
};

using StateSet = std::set<int>;

inline StateSet epsilon_closure(const Nfa& a, StateSet states) {
  std::vector<int> stack(states.begin(), states.end());
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& t : a.transitions) {
      if (t.from == q && !t.label && states.insert(t.to).second) stack.push_back(t.to);
    }
  }
  return states;
}

inline StateSet nfa_step(const Nfa& a, const StateSet& states, Letter c) {
  StateSet next;
  for (const auto& t : a.transitions) {
    if (t.label == c && states.contains(t.from)) next.insert(t.to);
  }
  return epsilon_closure(a, std::move(next));
}

inline bool any_accepting(const Nfa& a, const StateSet& states) {
  return std::any_of(states.begin(), states.end(), [&](int q) { return a.accepting[q]; });
}

inline bool accepts(const Nfa& a, const Word& w) {
  StateSet cur = epsilon_closure(a, {a.initial});
  for (Letter c : w) {
    cur = nfa_step(a, cur, c);
    if (cur.empty()) return false;
  }
  return any_accepting(a, cur);
}

/// All accepted words of length at most `max_len`.
inline std::set<Word> words_up_to(const Nfa& a, std::size_t max_len) {
  std::set<Word> out;
  struct Item {
    Word w;
    StateSet s;
  };
  std::vector<Item> frontier{{"", epsilon_closure(a, {a.initial})}};
  while (!frontier.empty()) {
    std::vector<Item> next;
    for (auto& it : frontier) {
      if (any_accepting(a, it.s)) out.insert(it.w);
      if (it.w.size() == max_len) continue;
      for (Letter c : a.alphabet) {
        StateSet s = nfa_step(a, it.s, c);
        if (!s.empty()) next.push_back({it.w + c, std::move(s)});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

/// Equivalent automaton without empty-read transitions (same state numbering).
inline Nfa remove_epsilon(const Nfa& a) {
  Nfa out;
  out.num_states = a.num_states;
  out.initial = a.initial;
  out.accepting.assign(a.num_states, false);
  out.alphabet = a.alphabet;
  std::set<NfaTransition> seen;
  for (int q = 0; q < a.num_states; ++q) {
    StateSet cl = epsilon_closure(a, {q});
    out.accepting[q] = any_accepting(a, cl);
    for (const auto& t : a.transitions) {
      if (t.label && cl.contains(t.from)) {
        NfaTransition nt{q, t.label, t.to};
        if (seen.insert(nt).second) out.transitions.push_back(nt);
      }
    }
  }
  return out;
}

/// Restricts to states that are reachable and co-reachable. A language-empty
/// automaton collapses to a single non-accepting initial state.
inline Nfa trim(const Nfa& a) {
  std::vector<bool> fwd(a.num_states, false), bwd(a.num_states, false);
  std::vector<int> stack{a.initial};
  fwd[a.initial] = true;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& t : a.transitions)
      if (t.from == q && !fwd[t.to]) fwd[t.to] = true, stack.push_back(t.to);
  }
  for (int q = 0; q < a.num_states; ++q)
    if (a.accepting[q]) bwd[q] = true, stack.push_back(q);
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& t : a.transitions)
      if (t.to == q && !bwd[t.from]) bwd[t.from] = true, stack.push_back(t.from);
  }
  Nfa out;
  out.alphabet = a.alphabet;
  if (!bwd[a.initial]) {
    out.add_state(false);
    return out;
  }
  std::vector<int> remap(a.num_states, -1);
  // Initial state keeps index 0.
  remap[a.initial] = out.add_state(a.accepting[a.initial]);
  for (int q = 0; q < a.num_states; ++q)
    if (q != a.initial && fwd[q] && bwd[q]) remap[q] = out.add_state(a.accepting[q]);
  out.initial = remap[a.initial];
  for (const auto& t : a.transitions)
    if (remap[t.from] >= 0 && remap[t.to] >= 0) out.transitions.push_back({remap[t.from], t.label, remap[t.to]});
  return out;
}

inline bool is_empty_language(const Nfa& a) {
  Nfa t = trim(a);
  return t.num_states == 1 && !t.accepting[0];
}

inline Nfa empty_language_nfa(std::set<Letter> alphabet = {}) {
  Nfa a;
  a.add_state(false);
  a.alphabet = std::move(alphabet);
  return a;
}

/// Union via a fresh initial state with empty-read edges into each operand.
inline Nfa union_of(const std::vector<Nfa>& parts, std::set<Letter> alphabet = {}) {
  Nfa out;
  out.alphabet = std::move(alphabet);
  out.initial = out.add_state(false);
  for (const auto& p : parts) {
    int offset = out.num_states;
    for (int q = 0; q < p.num_states; ++q) out.add_state(p.accepting[q]);
    for (const auto& t : p.transitions) out.add_transition(t.from + offset, t.label, t.to + offset);
    out.add_transition(out.initial, std::nullopt, p.initial + offset);
    out.alphabet.insert(p.alphabet.begin(), p.alphabet.end());
  }
  return out;
}

/// Image under a letter map; letters mapped to nullopt become empty reads.
inline Nfa relabel(const Nfa& a, const std::map<Letter, std::optional<Letter>>& image) {
  Nfa out = a;
  out.alphabet.clear();
  for (auto& t : out.transitions) {
    if (!t.label) continue;
    auto it = image.find(*t.label);
    t.label = it == image.end() ? t.label : it->second;
    if (t.label) out.alphabet.insert(*t.label);
  }
  return out;
}

}  // namespace trajlab
