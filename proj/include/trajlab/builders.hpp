#pragma once

#include <string>

#include "trajlab/error.hpp"
#include "trajlab/pda.hpp"

namespace trajlab {

namespace detail {

/// Reads `c` without net stack effect: push # then pop it on an empty move.
inline void add_noop_read(Pda& a, int from, Letter c, int to) {
  int mid = a.add_state(a.state_names[from] + "~" + std::string(1, c) + ">" + a.state_names[to]);
  a.add_push(from, c, "#", mid);
  a.add_pop(mid, std::nullopt, "#", to);
}

}  // namespace detail

/// Deterministic PDA for { a^n b^n : n >= 0 }.
inline Pda dpda_anbn(Letter a = 'a', Letter b = 'b') {
  Pda p;
  int q0 = p.add_state("q0", true), q1 = p.add_state("q1"), q2 = p.add_state("q2"), q3 = p.add_state("q3", true);
  p.input = {a, b};
  p.add_push(q0, a, "Z", q1);
  p.add_push(q1, a, "A", q1);
  p.add_pop(q1, b, "A", q2);
  p.add_pop(q1, b, "Z", q3);
  p.add_pop(q2, b, "A", q2);
  p.add_pop(q2, b, "Z", q3);
  return p;
}

/// dpda_anbn with every state accepting and a sink absorbing missing moves.
inline Pda dpda_anbn_all_accepting(Letter a = 'a', Letter b = 'b') {
  Pda p = dpda_anbn(a, b);
  for (std::size_t q = 0; q < p.accepting.size(); ++q) p.accepting[q] = true;
  int sink = p.add_state("sink", true);
  int q0 = p.state("q0"), q2 = p.state("q2"), q3 = p.state("q3");
  p.add_push(q0, b, "X", sink);
  p.add_push(q2, a, "X", sink);
  p.add_push(q3, a, "X", sink);
  p.add_push(q3, b, "X", sink);
  p.add_push(sink, a, "X", sink);
  p.add_push(sink, b, "X", sink);
  return p;
}

/// PDA for { a^n b^* a^n b^* : n >= 0 }.
inline Pda pda_an_bstar_an_bstar(Letter a = 'a', Letter b = 'b') {
  Pda p;
  p.input = {a, b};
  int init = p.add_state("I"), p1 = p.add_state("P1"), p2 = p.add_state("P2"), p3 = p.add_state("P3");
  int fin = p.add_state("F", true);
  p.add_push(init, std::nullopt, "Z", p1);
  p.add_push(p1, a, "A", p1);
  detail::add_noop_read(p, p1, b, p2);
  detail::add_noop_read(p, p2, b, p2);
  p.add_pop(p1, a, "A", p3);
  p.add_pop(p2, a, "A", p3);
  p.add_pop(p3, a, "A", p3);
  for (int q : {p1, p2, p3}) p.add_pop(q, std::nullopt, "Z", fin);
  detail::add_noop_read(p, fin, b, fin);
  return p;
}

/// PDA for { d^* c^n d^* c^n : n >= 0 }.
inline Pda pda_dstar_cn_dstar_cn(Letter d = 'd', Letter c = 'c') {
  Pda p;
  p.input = {c, d};
  int init = p.add_state("I"), d1 = p.add_state("D1"), c1 = p.add_state("C1"), d2 = p.add_state("D2");
  int c2 = p.add_state("C2"), fin = p.add_state("F", true);
  p.add_push(init, std::nullopt, "Z", d1);
  detail::add_noop_read(p, d1, d, d1);
  p.add_push(d1, c, "A", c1);
  p.add_push(c1, c, "A", c1);
  detail::add_noop_read(p, c1, d, d2);
  detail::add_noop_read(p, d2, d, d2);
  p.add_pop(c1, c, "A", c2);
  p.add_pop(d2, c, "A", c2);
  p.add_pop(c2, c, "A", c2);
  p.add_pop(c2, std::nullopt, "Z", fin);
  p.add_pop(d1, std::nullopt, "Z", fin);
  return p;
}

/// Deterministic PDA for { a^m b^m a^k : 2m+k >= i, 2m+k = i (mod p) }.
inline Pda dpda_length_class(int i, int p, Letter a = 'a', Letter b = 'b') {
  if (i < 0 || p < 1) throw PreconditionError("length class needs i >= 0 and p >= 1");
  if (i + p > 4096) throw ResourceError("length class too large");
  Pda m;
  m.input = {a, b};
  int n = i + p;
  auto next = [&](int c) { return c + 1 < n ? c + 1 : c + 1 - p; };
  int init = m.add_state("I");
  std::vector<int> pa(n), pb(n), pc(n);
  for (int c = 0; c < n; ++c) pa[c] = m.add_state("A" + std::to_string(c), c == i);
  for (int c = 0; c < n; ++c) pb[c] = m.add_state("B" + std::to_string(c));
  for (int c = 0; c < n; ++c) pc[c] = m.add_state("C" + std::to_string(c), c == i);
  m.add_push(init, std::nullopt, "Z", pa[0]);
  for (int c = 0; c < n; ++c) {
    m.add_push(pa[c], a, "A", pa[next(c)]);
    m.add_pop(pa[c], b, "A", pb[next(c)]);
    m.add_pop(pb[c], b, "A", pb[next(c)]);
    m.add_pop(pb[c], std::nullopt, "Z", pc[c]);
    detail::add_noop_read(m, pc[c], a, pc[next(c)]);
  }
  return m;
}

}  // namespace trajlab
