#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trajlab/error.hpp"
#include "trajlab/nfa.hpp"

namespace trajlab {

using Sym = int;
using Stack = std::vector<Sym>;  // bottom first

struct PdaTransition {
  int from = 0;
  std::optional<Letter> read;
  bool push = true;  // false: pop
  Sym sym = 0;
  int to = 0;
  friend auto operator<=>(const PdaTransition&, const PdaTransition&) = default;
};

/// Pushdown automaton whose every transition pushes or pops exactly one
/// symbol. Acceptance by final state, stack content irrelevant.
struct Pda {
  std::vector<std::string> state_names;
  std::vector<bool> accepting;
  std::set<Letter> input;
  std::vector<std::string> stack_names;
  int initial = 0;
  std::vector<PdaTransition> transitions;
  bool analysis_only = false;  // empty-read cycles may push; runs need a step budget

  int num_states() const { return static_cast<int>(state_names.size()); }

  int add_state(std::string name, bool is_accepting = false) {
    state_names.push_back(std::move(name));
    accepting.push_back(is_accepting);
    return num_states() - 1;
  }

  Sym symbol(const std::string& name) {
    auto it = std::find(stack_names.begin(), stack_names.end(), name);
    if (it != stack_names.end()) return static_cast<Sym>(it - stack_names.begin());
    stack_names.push_back(name);
    return static_cast<Sym>(stack_names.size() - 1);
  }

  std::optional<Sym> find_symbol(const std::string& name) const {
    auto it = std::find(stack_names.begin(), stack_names.end(), name);
    if (it == stack_names.end()) return std::nullopt;
    return static_cast<Sym>(it - stack_names.begin());
  }

  int state(const std::string& name) const {
    auto it = std::find(state_names.begin(), state_names.end(), name);
    if (it == state_names.end()) throw InputError("unknown state '" + name + "'");
    return static_cast<int>(it - state_names.begin());
  }

  void add_push(int from, std::optional<Letter> read, const std::string& sym, int to) {
    if (read) input.insert(*read);
    transitions.push_back({from, read, true, symbol(sym), to});
  }
  void add_pop(int from, std::optional<Letter> read, const std::string& sym, int to) {
    if (read) input.insert(*read);
    transitions.push_back({from, read, false, symbol(sym), to});
  }

  /// Each outgoing list holds transition indices.
  std::vector<std::vector<int>> outgoing() const {
    std::vector<std::vector<int>> out(num_states());
    for (std::size_t k = 0; k < transitions.size(); ++k) out[transitions[k].from].push_back(static_cast<int>(k));
    return out;
  }

  /// True iff some cycle of empty-read transitions contains a push.
  bool has_pushing_epsilon_cycle() const {
    int n = num_states();
    std::vector<std::vector<int>> eps(n);
    for (const auto& t : transitions)
      if (!t.read) eps[t.from].push_back(t.to);
    for (const auto& t : transitions) {
      if (t.read || !t.push) continue;
      std::vector<bool> seen(n, false);
      std::vector<int> st{t.to};
      seen[t.to] = true;
      while (!st.empty()) {
        int q = st.back();
        st.pop_back();
        if (q == t.from) return true;
        for (int r : eps[q])
          if (!seen[r]) seen[r] = true, st.push_back(r);
      }
    }
    return false;
  }

  bool epsilon_acyclic() const {
    int n = num_states();
    std::vector<std::vector<int>> eps(n);
    for (const auto& t : transitions)
      if (!t.read) eps[t.from].push_back(t.to);
    std::vector<int> color(n, 0);
    auto dfs = [&](auto&& self, int q) -> bool {
      color[q] = 1;
      for (int r : eps[q]) {
        if (color[r] == 1) return false;
        if (color[r] == 0 && !self(self, r)) return false;
      }
      color[q] = 2;
      return true;
    };
    for (int q = 0; q < n; ++q)
      if (color[q] == 0 && !dfs(dfs, q)) return false;
    return true;
  }

  void validate() const {
    if (num_states() < 1) throw InputError("PDA has no states");
    if (static_cast<int>(accepting.size()) != num_states()) throw InputError("accepting vector mismatch");
    if (initial < 0 || initial >= num_states()) throw InputError("initial state out of range");
    for (const auto& t : transitions) {
      if (t.from < 0 || t.from >= num_states() || t.to < 0 || t.to >= num_states())
        throw InputError("transition endpoint is not a declared state");
      if (t.read && !input.contains(*t.read))
        throw InputError(std::string("letter '") + *t.read + "' not in input alphabet");
      if (t.sym < 0 || t.sym >= static_cast<Sym>(stack_names.size()))
        throw InputError("stack symbol not declared");
    }
    if (!analysis_only && has_pushing_epsilon_cycle())
      throw InputError("cycle of empty-read transitions that pushes");
  }
};

inline std::string transition_to_string(const Pda& a, const PdaTransition& t) {
  return a.state_names[t.from] + " -" + (t.read ? std::string(1, *t.read) : std::string("eps")) + "/" +
         (t.push ? "push " : "pop ") + a.stack_names[t.sym] + "-> " + a.state_names[t.to];
}

/// An accepting run with cached replay. Positions are 0..steps.size();
/// step k (1-based) moves from position k-1 to position k.
struct Run {
  Word word;
  std::vector<int> steps;
  std::vector<int> states;      // per position
  std::vector<Stack> stacks;    // per position
  std::vector<int> read_step;   // per letter of word: 1-based step reading it

  int length() const { return static_cast<int>(steps.size()); }
  int height(int pos) const { return static_cast<int>(stacks[pos].size()); }
};

/// Replays `steps` on `word` from scratch; throws on an invalid step.
inline Run replay(const Pda& a, const Word& word, const std::vector<int>& steps) {
  Run r;
  r.word = word;
  r.steps = steps;
  r.states.push_back(a.initial);
  r.stacks.push_back({});
  std::size_t pos = 0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const PdaTransition& t = a.transitions.at(steps[k]);
    Stack st = r.stacks.back();
    if (t.from != r.states.back()) throw InternalError("run steps do not chain");
    if (t.read) {
      if (pos >= word.size() || word[pos] != *t.read) throw InternalError("run step reads wrong letter");
      r.read_step.push_back(static_cast<int>(k + 1));
      ++pos;
    }
    if (t.push) {
      st.push_back(t.sym);
    } else {
      if (st.empty() || st.back() != t.sym) throw InternalError("pop of a symbol not on top");
      st.pop_back();
    }
    r.states.push_back(t.to);
    r.stacks.push_back(std::move(st));
  }
  if (pos != word.size()) throw InternalError("run does not consume the word");
  return r;
}

struct RunCaps {
  std::size_t max_runs = 100000;
  std::size_t step_budget = 0;  // 0: derived from the PDA and word length
};

inline std::size_t max_runs_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("TRAJLAB_MAX_RUNS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v <= 1000000) return static_cast<std::size_t>(v);
  }
  return fallback;
}

inline std::size_t default_step_budget(const Pda& a, std::size_t len) {
  return 4 * static_cast<std::size_t>(a.num_states()) * (len + 1);
}

namespace detail {

template <class Visit>
void explore_runs(const Pda& a, const Word& w, std::size_t budget, Visit&& visit) {
  auto out = a.outgoing();
  std::vector<int> steps;
  Stack stack;
  auto dfs = [&](auto&& self, int q, std::size_t pos) -> void {
    if (pos == w.size() && a.accepting[q]) visit(steps);
    if (budget && steps.size() >= budget) return;
    for (int k : out[q]) {
      const PdaTransition& t = a.transitions[k];
      if (t.read && (pos >= w.size() || w[pos] != *t.read)) continue;
      if (!t.push && (stack.empty() || stack.back() != t.sym)) continue;
      if (t.push)
        stack.push_back(t.sym);
      else
        stack.pop_back();
      steps.push_back(k);
      self(self, t.to, pos + (t.read ? 1 : 0));
      steps.pop_back();
      if (t.push)
        stack.pop_back();
      else
        stack.push_back(t.sym);
    }
  };
  dfs(dfs, a.initial, 0);
}

}  // namespace detail

/// All accepting runs of `a` on `w`. Analysis-only PDAs are explored up to
/// the step budget.
inline std::vector<Run> enumerate_runs(const Pda& a, const Word& w, RunCaps caps = {}) {
  std::size_t cap = max_runs_from_env(caps.max_runs);
  std::size_t budget = caps.step_budget;
  if (a.analysis_only && budget == 0) budget = default_step_budget(a, w.size());
  std::vector<Run> runs;
  detail::explore_runs(a, w, budget, [&](const std::vector<int>& steps) {
    if (runs.size() >= cap) throw ResourceError("run explosion: more than " + std::to_string(cap) + " accepting runs");
    runs.push_back(replay(a, w, steps));
  });
  return runs;
}

namespace detail {

struct Config {
  int state;
  Stack stack;
  friend auto operator<=>(const Config&, const Config&) = default;
};

// Closure under empty reads. Pushing cycles are cut by a height limit.
inline std::set<Config> eps_closure(const Pda& a, const std::vector<std::vector<int>>& out,
                                    std::set<Config> cs, std::size_t height_limit) {
  std::vector<Config> work(cs.begin(), cs.end());
  while (!work.empty()) {
    Config c = std::move(work.back());
    work.pop_back();
    for (int k : out[c.state]) {
      const PdaTransition& t = a.transitions[k];
      if (t.read) continue;
      Config n{t.to, c.stack};
      if (t.push) {
        if (n.stack.size() >= height_limit) continue;
        n.stack.push_back(t.sym);
      } else {
        if (n.stack.empty() || n.stack.back() != t.sym) continue;
        n.stack.pop_back();
      }
      if (cs.insert(n).second) work.push_back(std::move(n));
    }
  }
  return cs;
}

inline std::set<Config> read_letter(const Pda& a, const std::vector<std::vector<int>>& out,
                                    const std::set<Config>& cs, Letter c, std::size_t height_limit) {
  std::set<Config> next;
  for (const auto& cf : cs)
    for (int k : out[cf.state]) {
      const PdaTransition& t = a.transitions[k];
      if (t.read != c) continue;
      Config n{t.to, cf.stack};
      if (t.push) {
        if (n.stack.size() >= height_limit) continue;
        n.stack.push_back(t.sym);
      } else {
        if (n.stack.empty() || n.stack.back() != t.sym) continue;
        n.stack.pop_back();
      }
      next.insert(std::move(n));
    }
  return eps_closure(a, out, std::move(next), height_limit);
}

inline std::size_t height_limit_for(const Pda& a, std::size_t len) {
  // A path of empty reads uses each pushing transition at most once.
  return (len + 1) * (a.transitions.size() + 1) + 1;
}

}  // namespace detail

/// Configurations reachable after reading `w` from (initial, stack), with
/// all empty-read moves.
inline bool accepts_from(const Pda& a, int q, const Stack& stack, const Word& w) {
  auto out = a.outgoing();
  std::size_t limit = stack.size() + detail::height_limit_for(a, w.size());
  auto cs = detail::eps_closure(a, out, {{q, stack}}, limit);
  for (Letter c : w) {
    cs = detail::read_letter(a, out, cs, c, limit);
    if (cs.empty()) return false;
  }
  return std::any_of(cs.begin(), cs.end(), [&](const detail::Config& cf) { return a.accepting[cf.state]; });
}

inline bool accepts(const Pda& a, const Word& w) { return accepts_from(a, a.initial, {}, w); }

/// Accepted words of length at most `max_len` over the input alphabet.
inline std::set<Word> accepted_words(const Pda& a, std::size_t max_len) {
  auto out = a.outgoing();
  std::size_t limit = detail::height_limit_for(a, max_len);
  std::set<Word> result;
  auto accepting = [&](const std::set<detail::Config>& cs) {
    return std::any_of(cs.begin(), cs.end(), [&](const detail::Config& cf) { return a.accepting[cf.state]; });
  };
  auto dfs = [&](auto&& self, const Word& w, const std::set<detail::Config>& cs) -> void {
    if (accepting(cs)) result.insert(w);
    if (w.size() == max_len) return;
    for (Letter c : a.input) {
      auto next = detail::read_letter(a, out, cs, c, limit);
      if (!next.empty()) self(self, w + c, next);
    }
  };
  dfs(dfs, "", detail::eps_closure(a, out, {{a.initial, {}}}, limit));
  return result;
}

}  // namespace trajlab
