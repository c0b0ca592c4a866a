#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "trajlab/coupling.hpp"
#include "trajlab/dfa.hpp"
#include "trajlab/error.hpp"
#include "trajlab/nfa.hpp"
#include "trajlab/patterns.hpp"
#include "trajlab/pda.hpp"

namespace trajlab {

/// A language given as a finite word list, an NFA or a PDA.
using Language = std::variant<std::set<Word>, Nfa, Pda>;

struct ShuffleInstance {
  Language left;
  Language right;
  TrajectoryAutomaton trajectory;
};

inline std::set<Letter> letters_of(const Language& l) {
  if (auto* ws = std::get_if<std::set<Word>>(&l)) {
    std::set<Letter> out;
    for (const auto& w : *ws) out.insert(w.begin(), w.end());
    return out;
  }
  if (auto* n = std::get_if<Nfa>(&l)) return n->alphabet;
  return std::get<Pda>(l).input;
}

/// Words of length <= max_len.
inline std::set<Word> bounded_words(const Language& l, std::size_t max_len) {
  if (auto* ws = std::get_if<std::set<Word>>(&l)) {
    std::set<Word> out;
    for (const auto& w : *ws)
      if (w.size() <= max_len) out.insert(w);
    return out;
  }
  if (auto* n = std::get_if<Nfa>(&l)) return words_up_to(*n, max_len);
  return accepted_words(std::get<Pda>(l), max_len);
}

inline void require_disjoint(const std::set<Letter>& a, const std::set<Letter>& b) {
  for (Letter c : a)
    if (b.contains(c))
      throw PreconditionError(std::string("alphabets overlap on '") + c +
                              "'; shuffling over a common alphabet is not well behaved");
  for (const auto* side : {&a, &b})
    for (Letter c : *side)
      if (c == '#' || c == '$' || c == '^') throw InputError(std::string("reserved letter '") + c + "'");
}

/// Interleaving of w1 and w2 scheduled by control word c.
inline Word shuffle_words(const Word& w1, const Word& w2, const Word& c) {
  std::size_t ns = 0, nt = 0;
  for (Letter x : c) {
    if (x == kS) ++ns;
    else if (x == kT) ++nt;
    else throw InputError(std::string("control letter '") + x + "' outside {s,t}");
  }
  if (ns != w1.size() || nt != w2.size())
    throw PreconditionError("control word " + c + " does not match lengths " + std::to_string(w1.size()) +
                            " and " + std::to_string(w2.size()));
  Word out;
  std::size_t i = 0, j = 0;
  for (Letter x : c) out += x == kS ? w1[i++] : w2[j++];
  return out;
}

inline constexpr std::size_t kOracleMaxLen = 12;

/// All shuffles along T of words from l1 and l2, total length <= max_len.
inline std::set<Word> shuffle_oracle(const std::set<Word>& l1, const std::set<Word>& l2,
                                     const TrajectoryAutomaton& t, std::size_t max_len) {
  if (max_len > kOracleMaxLen) throw PreconditionError("oracle length bound is at most 12");
  std::set<Letter> a1, a2;
  for (const auto& w : l1) a1.insert(w.begin(), w.end());
  for (const auto& w : l2) a2.insert(w.begin(), w.end());
  require_disjoint(a1, a2);
  std::map<std::size_t, std::vector<const Word*>> by1, by2;
  for (const auto& w : l1) by1[w.size()].push_back(&w);
  for (const auto& w : l2) by2[w.size()].push_back(&w);
  std::set<Word> out;
  for (const auto& c : words_up_to(t.to_nfa(), max_len)) {
    std::size_t ns = static_cast<std::size_t>(std::count(c.begin(), c.end(), kS));
    auto i1 = by1.find(ns), i2 = by2.find(c.size() - ns);
    if (i1 == by1.end() || i2 == by2.end()) continue;
    for (const Word* w1 : i1->second)
      for (const Word* w2 : i2->second) out.insert(shuffle_words(*w1, *w2, c));
  }
  return out;
}

inline std::set<Word> shuffle_oracle(const Language& l1, const Language& l2, const TrajectoryAutomaton& t,
                                     std::size_t max_len) {
  require_disjoint(letters_of(l1), letters_of(l2));
  return shuffle_oracle(bounded_words(l1, max_len), bounded_words(l2, max_len), t, max_len);
}

/// Product NFA over Q1 x Q2 x Q_T.
inline Nfa shuffle_regular(const Nfa& a1, const Nfa& a2, const TrajectoryAutomaton& t) {
  require_disjoint(a1.alphabet, a2.alphabet);
  Nfa b1 = remove_epsilon(a1), b2 = remove_epsilon(a2);
  int n1 = b1.num_states, n2 = b2.num_states, nt = t.num_states();
  Nfa out;
  out.alphabet = a1.alphabet;
  out.alphabet.insert(a2.alphabet.begin(), a2.alphabet.end());
  auto id = [&](int p, int q, int r) { return (p * n2 + q) * nt + r; };
  for (int p = 0; p < n1; ++p)
    for (int q = 0; q < n2; ++q)
      for (int r = 0; r < nt; ++r) out.add_state(b1.accepting[p] && b2.accepting[q] && t.accepting[r]);
  for (const auto& tr : b1.transitions)
    for (int q = 0; q < n2; ++q)
      for (int r = 0; r < nt; ++r)
        if (int r2 = t.step(r, kS); r2 >= 0) out.add_transition(id(tr.from, q, r), tr.label, id(tr.to, q, r2));
  for (const auto& tr : b2.transitions)
    for (int p = 0; p < n1; ++p)
      for (int r = 0; r < nt; ++r)
        if (int r2 = t.step(r, kT); r2 >= 0) out.add_transition(id(p, tr.from, r), tr.label, id(p, tr.to, r2));
  out.initial = id(b1.initial, b2.initial, t.initial);
  return trim(out);
}

namespace detail {

inline std::string fresh_symbol(const Pda& a, std::string base) {
  while (a.find_symbol(base)) base += "'";
  return base;
}

}  // namespace detail

/// Product PDA; only the first factor uses the stack. Letters of the second
/// factor are read with a push/pop pair of a private marker.
inline Pda shuffle_pda_regular(const Pda& a1, const Nfa& a2, const TrajectoryAutomaton& t) {
  a1.validate();
  require_disjoint(a1.input, a2.alphabet);
  Nfa b2 = remove_epsilon(a2);
  Pda out;
  out.stack_names = a1.stack_names;
  out.analysis_only = a1.analysis_only;
  std::string hash = detail::fresh_symbol(a1, "#");
  std::map<std::array<int, 3>, int> ids;
  std::deque<std::array<int, 3>> work;
  auto get = [&](int p, int q, int r) {
    std::array<int, 3> key{p, q, r};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int s = out.add_state(a1.state_names[p] + "," + std::to_string(q) + "," + std::to_string(r),
                          a1.accepting[p] && b2.accepting[q] && t.accepting[r]);
    ids.emplace(key, s);
    work.push_back(key);
    return s;
  };
  std::vector<std::vector<const NfaTransition*>> out2(b2.num_states);
  for (const auto& tr : b2.transitions) out2[tr.from].push_back(&tr);
  auto out1 = a1.outgoing();
  std::map<int, int> mids;
  out.initial = get(a1.initial, b2.initial, t.initial);
  while (!work.empty()) {
    auto [p, q, r] = work.front();
    work.pop_front();
    int from = ids.at({p, q, r});
    for (int k : out1[p]) {
      const auto& tr = a1.transitions[k];
      int r2 = tr.read ? t.step(r, kS) : r;
      if (r2 < 0) continue;
      int to = get(tr.to, q, r2);
      out.transitions.push_back({from, tr.read, tr.push, tr.sym, to});
      if (tr.read) out.input.insert(*tr.read);
    }
    int r2 = t.step(r, kT);
    if (r2 < 0) continue;
    for (const auto* tr : out2[q]) {
      int to = get(p, tr->to, r2);
      auto [it, fresh] = mids.try_emplace(to, -1);
      if (fresh) {
        it->second = out.add_state(out.state_names[to] + "#");
        out.add_pop(it->second, std::nullopt, hash, to);
      }
      out.add_push(from, tr->label, hash, it->second);
    }
  }
  out.input.insert(a1.input.begin(), a1.input.end());
  out.input.insert(a2.alphabet.begin(), a2.alphabet.end());
  return out;
}

inline constexpr std::size_t kSafeShuffleStateCap = 400000;

namespace detail {

/// Builds the part of the safe shuffle that follows one easy pattern. The
/// factor owning the first anchor letter ("outer") keeps the stack bottom;
/// the other ("inner") runs on top of a $ marker. Outer letters met while the
/// inner factor is active and inner letters met before it starts are buffered
/// in the finite control; inner letters after it finishes are guessed in
/// advance and matched later. Connector letters bound all three queues.
class SafePatternBuilder {
 public:
  SafePatternBuilder(Pda& out, const Pda& a1, const Pda& a2, const TrajectoryAutomaton& t, const SccPattern& pat,
                     int index)
      : out_(out), tag_("p" + std::to_string(index) + ":") {
    Letter first = pat.anchors.empty() ? kS : *pat.anchors.front().alphabet.begin();
    outer_is_first_ = first == kS;
    o_ = outer_is_first_ ? &a1 : &a2;
    i_ = outer_is_first_ ? &a2 : &a1;
    sigma_ = outer_is_first_ ? kS : kT;
    tau_ = outer_is_first_ ? kT : kS;
    opre_ = outer_is_first_ ? "1:" : "2:";
    ipre_ = outer_is_first_ ? "2:" : "1:";
    for (const auto& c : pat.connectors)
      for (Letter x : c.labels) (x == sigma_ ? cap_outer_ : cap_inner_)++;
    trk_ = trim(remove_epsilon(pattern_language(t, pat)));
    next_.assign(trk_.num_states, {});
    for (const auto& tr : trk_.transitions) next_[tr.from][letter_index(*tr.label)].push_back(tr.to);
    oout_ = o_->outgoing();
    iout_ = i_->outgoing();
  }

  int build() {
    int start = get({kU, trk_.initial, o_->initial, i_->initial, "", "", ""});
    while (!work_.empty()) {
      Ctl c = work_.front();
      work_.pop_front();
      expand(c);
    }
    return start;
  }

 private:
  enum Phase { kU, kV, kG, kC, kW };
  struct Ctl {
    int phase, node, o, i;
    std::string b1, b2, q;
    auto operator<=>(const Ctl&) const = default;
  };

  Pda& out_;
  std::string tag_;
  bool outer_is_first_;
  const Pda* o_;
  const Pda* i_;
  Letter sigma_, tau_;
  std::string opre_, ipre_;
  std::size_t cap_outer_ = 0, cap_inner_ = 0;
  Nfa trk_;
  std::vector<std::array<std::vector<int>, 2>> next_;
  std::vector<std::vector<int>> oout_, iout_;
  std::map<Ctl, int> ids_;
  std::deque<Ctl> work_;
  std::map<int, int> mids_;

  const std::vector<int>& steps(int node, Letter ctrl) const { return next_[node][letter_index(ctrl)]; }

  int get(const Ctl& c) {
    auto it = ids_.find(c);
    if (it != ids_.end()) return it->second;
    if (out_.num_states() >= static_cast<int>(kSafeShuffleStateCap))
      throw ResourceError("safe shuffle state cap exceeded");
    bool acc = c.phase == kW && c.b2.empty() && c.q.empty() && o_->accepting[c.o] && trk_.accepting[c.node];
    std::string name = tag_ + "UVGCW"[c.phase] + std::to_string(c.node) + "," + std::to_string(c.o) + "," +
                       std::to_string(c.i) + "[" + c.b1 + "|" + c.b2 + "|" + c.q + "]";
    int s = out_.add_state(name, acc);
    ids_.emplace(c, s);
    work_.push_back(c);
    return s;
  }

  void emit(const Ctl& from, std::optional<Letter> read, bool push, const std::string& sym, const Ctl& to) {
    int a = ids_.at(from), b = get(to);
    if (push) out_.add_push(a, read, sym, b);
    else out_.add_pop(a, read, sym, b);
  }

  void emit_factor(const Ctl& from, std::optional<Letter> read, const Pda& f, const std::string& pre,
                   const PdaTransition& tr, const Ctl& to) {
    emit(from, read, tr.push, pre + f.stack_names[tr.sym], to);
  }

  void noop(const Ctl& from, Letter read, const Ctl& to) {
    int b = get(to);
    auto [it, fresh] = mids_.try_emplace(b, -1);
    if (fresh) {
      it->second = out_.add_state(out_.state_names[b] + "#");
      out_.add_pop(it->second, std::nullopt, "#", b);
    }
    out_.add_push(ids_.at(from), read, "#", it->second);
  }

  void finish_inner(const Ctl& c) {
    Ctl done = c;
    done.i = -1;
    done.phase = kC;
    for (const auto& s : i_->stack_names) emit(c, std::nullopt, false, ipre_ + s, done);
    done.phase = kW;
    emit(c, std::nullopt, false, "$", done);
  }

  void expand(const Ctl& c) {
    switch (c.phase) {
      case kU: {
        for (int k : oout_[c.o]) {
          const auto& tr = o_->transitions[k];
          Ctl n = c;
          n.o = tr.to;
          if (!tr.read) {
            emit_factor(c, std::nullopt, *o_, opre_, tr, n);
            continue;
          }
          for (int node : steps(c.node, sigma_)) {
            n.node = node;
            emit_factor(c, tr.read, *o_, opre_, tr, n);
          }
        }
        if (c.b1.size() < cap_inner_)
          for (Letter b : i_->input)
            for (int node : steps(c.node, tau_)) {
              Ctl n = c;
              n.b1 += b;
              n.node = node;
              noop(c, b, n);
            }
        Ctl n = c;
        n.phase = kV;
        emit(c, std::nullopt, true, "$", n);
        break;
      }
      case kV:
      case kG: {
        if (c.b2.size() < cap_outer_)
          for (Letter a : o_->input)
            for (int node : steps(c.node, sigma_)) {
              Ctl n = c;
              n.b2 += a;
              n.node = node;
              noop(c, a, n);
            }
        if (c.phase == kG && !c.q.empty())
          for (int node : steps(c.node, tau_)) {
            Ctl n = c;
            n.q.erase(0, 1);
            n.node = node;
            noop(c, c.q[0], n);
          }
        for (int k : iout_[c.i]) {
          const auto& tr = i_->transitions[k];
          Ctl n = c;
          n.i = tr.to;
          if (!tr.read) {
            emit_factor(c, std::nullopt, *i_, ipre_, tr, n);
          } else if (!c.b1.empty()) {
            if (*tr.read != c.b1[0]) continue;
            n.b1.erase(0, 1);
            emit_factor(c, std::nullopt, *i_, ipre_, tr, n);
          } else {
            if (c.phase == kV)
              for (int node : steps(c.node, tau_)) {
                Ctl m = n;
                m.node = node;
                emit_factor(c, tr.read, *i_, ipre_, tr, m);
              }
            if (c.q.size() < cap_inner_) {
              Ctl m = n;
              m.q += *tr.read;
              m.phase = kG;
              emit_factor(c, std::nullopt, *i_, ipre_, tr, m);
            }
          }
        }
        if (c.b1.empty() && i_->accepting[c.i]) finish_inner(c);
        break;
      }
      case kC:
        finish_inner(c);
        break;
      case kW: {
        if (!c.q.empty())
          for (int node : steps(c.node, tau_)) {
            Ctl n = c;
            n.q.erase(0, 1);
            n.node = node;
            noop(c, c.q[0], n);
          }
        for (int k : oout_[c.o]) {
          const auto& tr = o_->transitions[k];
          Ctl n = c;
          n.o = tr.to;
          if (!tr.read) {
            emit_factor(c, std::nullopt, *o_, opre_, tr, n);
          } else if (!c.b2.empty()) {
            if (*tr.read != c.b2[0]) continue;
            n.b2.erase(0, 1);
            emit_factor(c, std::nullopt, *o_, opre_, tr, n);
          } else {
            for (int node : steps(c.node, sigma_)) {
              n.node = node;
              emit_factor(c, tr.read, *o_, opre_, tr, n);
            }
          }
        }
        break;
      }
    }
  }
};

}  // namespace detail

/// PDA for L(a1) shuffled with L(a2) along T; requires hard(T) to be empty.
inline Pda safe_shuffle_pda(const Pda& a1, const Pda& a2, const TrajectoryAutomaton& t,
                            std::size_t pattern_cap = kDefaultPatternCap) {
  a1.validate();
  a2.validate();
  require_disjoint(a1.input, a2.input);
  auto pats = scc_patterns(t, pattern_cap);
  for (const auto& p : pats)
    if (p.hard) throw PreconditionError("NotSafe: trajectory has a hard SCC pattern");
  Pda out;
  out.input = a1.input;
  out.input.insert(a2.input.begin(), a2.input.end());
  out.analysis_only = a1.analysis_only || a2.analysis_only;
  int root = out.add_state("root");
  out.initial = root;
  for (std::size_t k = 0; k < pats.size(); ++k) {
    detail::SafePatternBuilder b(out, a1, a2, t, pats[k], static_cast<int>(k));
    int start = b.build();
    out.add_push(root, std::nullopt, "^", start);
  }
  return out;
}

struct ResilienceSample {
  Word control;
  Word partner;
  Word word;
  Span x, y;
  CouplingVerdict verdict = CouplingVerdict::NoAcceptingRun;
};

struct ResilienceReport {
  std::vector<ResilienceSample> samples;
  bool all_coupled() const {
    for (const auto& s : samples)
      if (s.verdict != CouplingVerdict::Coupled) return false;
    return !samples.empty();
  }
};

/// Smallest span of the shuffled word containing the letters of `x` (a span of w1).
inline Span image_span(const Word& control, Span x) {
  std::vector<std::size_t> pos;
  for (std::size_t k = 0; k < control.size(); ++k)
    if (control[k] == kS) pos.push_back(k);
  if (x.len == 0 || x.end() > pos.size()) throw PreconditionError("span outside the first word");
  return {pos[x.start], pos[x.end() - 1] - pos[x.start] + 1};
}

/// Shuffles w1 with each partner along each control of matching counts and
/// tests whether the images of x and y are coupled in `product`.
inline ResilienceReport resilient_span_check(const Pda& product, const Word& w1, Span x, Span y,
                                             const std::set<Word>& partners, const std::set<Word>& controls,
                                             RunCaps caps = {}) {
  check_spans(w1, x, y);
  ResilienceReport rep;
  for (const auto& c : controls) {
    std::size_t ns = static_cast<std::size_t>(std::count(c.begin(), c.end(), kS));
    if (ns != w1.size()) continue;
    for (const auto& w2 : partners) {
      if (w2.size() != c.size() - ns) continue;
      ResilienceSample s{c, w2, shuffle_words(w1, w2, c), image_span(c, x), image_span(c, y)};
      s.verdict = a_coupled(product, s.word, s.x, s.y, caps);
      rep.samples.push_back(std::move(s));
    }
  }
  if (rep.samples.empty()) throw PreconditionError("no sampled control word fits the decomposition");
  return rep;
}

/// Default sampling: controls of T up to |w1|+4 letters and partner words up to 4 letters.
inline ResilienceReport resilient_span_check(const Pda& product, const Word& w1, Span x, Span y,
                                             const Language& partner, const TrajectoryAutomaton& t,
                                             RunCaps caps = {}) {
  return resilient_span_check(product, w1, x, y, bounded_words(partner, 4), words_up_to(t.to_nfa(), w1.size() + 4),
                              caps);
}

}  // namespace trajlab
