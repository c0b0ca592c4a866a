#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "trajlab/classify.hpp"
#include "trajlab/coupling.hpp"
#include "trajlab/formula.hpp"
#include "trajlab/grid.hpp"
#include "trajlab/nfa.hpp"
#include "trajlab/parikh.hpp"
#include "trajlab/patterns.hpp"
#include "trajlab/pda.hpp"

namespace trajlab {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

inline Letter letter_from(const Json& j) {
  if (!j.is_string() || j.get<std::string>().size() != 1) throw InputError("letters must be one-character strings");
  return j.get<std::string>()[0];
}

inline Json letters_to(const std::set<Letter>& ls) {
  Json a = Json::array();
  for (Letter c : ls) a.push_back(std::string(1, c));
  return a;
}

inline std::set<Letter> letters_from(const Json& j) {
  if (!j.is_array()) throw InputError("alphabet must be an array");
  std::set<Letter> out;
  for (const auto& x : j) out.insert(letter_from(x));
  return out;
}

inline std::map<std::string, int> name_index(const std::vector<std::string>& names) {
  std::map<std::string, int> idx;
  for (std::size_t k = 0; k < names.size(); ++k)
    if (!idx.emplace(names[k], static_cast<int>(k)).second) throw InputError("duplicate state '" + names[k] + "'");
  return idx;
}

inline int lookup(const std::map<std::string, int>& idx, const Json& j) {
  if (!j.is_string()) throw InputError("state references must be strings");
  auto it = idx.find(j.get<std::string>());
  if (it == idx.end()) throw InputError("unknown state '" + j.get<std::string>() + "'");
  return it->second;
}

inline Json vec_to(Vec2 v) { return Json::array({v.x, v.y}); }

inline Vec2 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw InputError("vectors are pairs of integers");
  return {j[0].get<i64>(), j[1].get<i64>()};
}

}  // namespace detail

// ---- finite automata ------------------------------------------------------

inline Json to_json(const Nfa& a) {
  Json j;
  Json states = Json::array(), acc = Json::array(), trs = Json::array();
  for (int q = 0; q < a.num_states; ++q) {
    states.push_back("q" + std::to_string(q));
    if (a.accepting[q]) acc.push_back("q" + std::to_string(q));
  }
  for (const auto& t : a.transitions)
    trs.push_back({{"from", "q" + std::to_string(t.from)},
                   {"label", t.label ? Json(std::string(1, *t.label)) : Json(nullptr)},
                   {"to", "q" + std::to_string(t.to)}});
  j["states"] = states;
  j["alphabet"] = detail::letters_to(a.alphabet);
  j["initial"] = "q" + std::to_string(a.initial);
  j["accepting"] = acc;
  j["transitions"] = trs;
  return j;
}

inline Nfa nfa_from_json(const Json& j) {
  auto names = detail::get_as<std::vector<std::string>>(j, "states");
  auto idx = detail::name_index(names);
  Nfa a;
  for (std::size_t k = 0; k < names.size(); ++k) a.add_state();
  a.alphabet = detail::letters_from(detail::field(j, "alphabet"));
  a.initial = detail::lookup(idx, detail::field(j, "initial"));
  for (const auto& s : detail::field(j, "accepting")) a.accepting[detail::lookup(idx, s)] = true;
  for (const auto& t : detail::field(j, "transitions")) {
    const Json& lab = detail::field(t, "label");
    std::optional<Letter> label;
    if (!lab.is_null()) label = detail::letter_from(lab);
    a.transitions.push_back({detail::lookup(idx, detail::field(t, "from")), label, detail::lookup(idx, detail::field(t, "to"))});
  }
  a.validate();
  return a;
}

inline Json to_json(const TrajectoryAutomaton& t) {
  Json j = to_json(t.to_nfa());
  j["alphabet"] = Json::array({"s", "t"});
  return j;
}

/// Deterministic documents keep their numbering; others are determinized
/// and minimized.
inline TrajectoryAutomaton trajectory_from_json(const Json& j) {
  Nfa a = nfa_from_json(j);
  for (Letter c : a.alphabet)
    if (c != kS && c != kT) throw InputError(std::string("trajectory letter '") + c + "' outside {s,t}");
  bool det = true;
  TrajectoryAutomaton out;
  out.initial = a.initial;
  out.accepting = a.accepting;
  out.delta.assign(a.num_states, {-1, -1});
  for (const auto& t : a.transitions) {
    if (!t.label) {
      det = false;
      break;
    }
    int& slot = out.delta[t.from][letter_index(*t.label)];
    if (slot >= 0 && slot != t.to) det = false;
    slot = t.to;
  }
  if (!det) return minimal_dfa(a);
  out.validate();
  return out;
}

// ---- pushdown automata ----------------------------------------------------

inline Json to_json(const Pda& a) {
  Json trs = Json::array(), acc = Json::array();
  for (int q = 0; q < a.num_states(); ++q)
    if (a.accepting[q]) acc.push_back(a.state_names[q]);
  for (const auto& t : a.transitions)
    trs.push_back({{"from", a.state_names[t.from]},
                   {"read", t.read ? Json(std::string(1, *t.read)) : Json(nullptr)},
                   {"action", {{t.push ? "push" : "pop", a.stack_names[t.sym]}}},
                   {"to", a.state_names[t.to]}});
  Json j{{"states", a.state_names},
         {"input", detail::letters_to(a.input)},
         {"stack", a.stack_names},
         {"initial", a.state_names.empty() ? Json(nullptr) : Json(a.state_names[a.initial])},
         {"accepting", acc},
         {"transitions", trs}};
  if (a.analysis_only) j["analysis_only"] = true;
  return j;
}

inline Pda pda_from_json(const Json& j) {
  Pda a;
  a.state_names = detail::get_as<std::vector<std::string>>(j, "states");
  auto idx = detail::name_index(a.state_names);
  a.accepting.assign(a.state_names.size(), false);
  a.input = detail::letters_from(detail::field(j, "input"));
  a.stack_names = detail::get_as<std::vector<std::string>>(j, "stack");
  if (std::set<std::string>(a.stack_names.begin(), a.stack_names.end()).size() != a.stack_names.size())
    throw InputError("duplicate stack symbol");
  a.initial = detail::lookup(idx, detail::field(j, "initial"));
  for (const auto& s : detail::field(j, "accepting")) a.accepting[detail::lookup(idx, s)] = true;
  for (const auto& t : detail::field(j, "transitions")) {
    PdaTransition tr;
    tr.from = detail::lookup(idx, detail::field(t, "from"));
    tr.to = detail::lookup(idx, detail::field(t, "to"));
    const Json& rd = detail::field(t, "read");
    if (!rd.is_null()) tr.read = detail::letter_from(rd);
    const Json& act = detail::field(t, "action");
    if (!act.is_object() || act.size() != 1) throw InputError("action must be {\"push\":X} or {\"pop\":X}");
    std::string op = act.begin().key();
    if (op != "push" && op != "pop") throw InputError("unknown stack action '" + op + "'");
    if (!act.begin()->is_string()) throw InputError("stack symbols are strings");
    tr.push = op == "push";
    auto sym = a.find_symbol(act.begin()->get<std::string>());
    if (!sym) throw InputError("undeclared stack symbol '" + act.begin()->get<std::string>() + "'");
    tr.sym = *sym;
    a.transitions.push_back(tr);
  }
  if (j.contains("analysis_only")) a.analysis_only = detail::get_as<bool>(j, "analysis_only");
  a.validate();
  return a;
}

// ---- formulas, linear sets, grids ----------------------------------------

inline Json to_json(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Const:
      return {{"const", f.value}};
    case Formula::Kind::HalfPlane:
      return {{"atom", "halfplane"}, {"c", f.c}, {"d", f.d}, {"e", f.e}};
    case Formula::Kind::Congruence:
      return {{"atom", "congruence"}, {"c", f.c}, {"d", f.d}, {"e", f.e}, {"p", f.p}};
    default: {
      Json args = Json::array();
      for (const auto& g : f.args) args.push_back(to_json(g));
      const char* op = f.kind == Formula::Kind::And ? "and" : f.kind == Formula::Kind::Or ? "or" : "not";
      return {{"op", op}, {"args", args}};
    }
  }
}

inline Formula formula_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("formula nodes are objects");
  if (j.contains("const")) return Formula::constant(detail::get_as<bool>(j, "const"));
  if (j.contains("atom")) {
    auto kind = detail::get_as<std::string>(j, "atom");
    i64 c = detail::get_as<i64>(j, "c"), d = detail::get_as<i64>(j, "d"), e = detail::get_as<i64>(j, "e");
    if (kind == "halfplane") return Formula::half_plane(c, d, e);
    if (kind == "congruence") return Formula::congruence(c, d, e, detail::get_as<i64>(j, "p"));
    throw InputError("unknown atom '" + kind + "'");
  }
  auto op = detail::get_as<std::string>(j, "op");
  const Json& args = detail::field(j, "args");
  if (!args.is_array()) throw InputError("args must be an array");
  std::vector<Formula> fs;
  for (const auto& a : args) fs.push_back(formula_from_json(a));
  if (op == "and") return Formula::all(std::move(fs));
  if (op == "or") return Formula::any(std::move(fs));
  if (op == "not") {
    if (fs.size() != 1) throw InputError("not takes one argument");
    return Formula::negate(std::move(fs.front()));
  }
  throw InputError("unknown operator '" + op + "'");
}

inline Json to_json(const LinearSet& ls) {
  Json ps = Json::array();
  for (Vec2 p : ls.periods) ps.push_back(detail::vec_to(p));
  return {{"base", detail::vec_to(ls.base)}, {"periods", ps}};
}

inline LinearSet linear_set_from_json(const Json& j) {
  LinearSet ls;
  ls.base = detail::vec_from(detail::field(j, "base"));
  for (const auto& p : detail::field(j, "periods")) ls.periods.push_back(detail::vec_from(p));
  if (!ls.base.nonneg()) throw InputError("linear-set base must be nonnegative");
  for (Vec2 p : ls.periods)
    if (!p.nonneg() || p.zero()) throw InputError("periods must be nonnegative and nonzero");
  return ls;
}

inline Json to_json(const Grid& g) { return {{"i", g.i}, {"p", g.p}, {"j", g.j}, {"q", g.q}}; }

inline Grid grid_from_json(const Json& j) {
  Grid g{detail::get_as<i64>(j, "i"), detail::get_as<i64>(j, "p"), detail::get_as<i64>(j, "j"),
         detail::get_as<i64>(j, "q")};
  g.validate();
  return g;
}

// ---- reports --------------------------------------------------------------

inline Json to_json(const SccPattern& p) {
  Json cons = Json::array(), cstates = Json::array(), anchors = Json::array();
  for (const auto& c : p.connectors) {
    cons.push_back(c.labels);
    cstates.push_back(c.states);
  }
  for (const auto& a : p.anchors)
    anchors.push_back({{"state", a.state}, {"scc", a.scc}, {"alphabet", detail::letters_to(a.alphabet)}});
  return {{"connectors", cons}, {"connector_states", cstates}, {"anchors", anchors}, {"hard", p.hard}};
}

inline SccPattern pattern_from_json(const Json& j) {
  SccPattern p;
  auto labels = detail::get_as<std::vector<std::string>>(j, "connectors");
  auto states = detail::get_as<std::vector<std::vector<int>>>(j, "connector_states");
  if (labels.size() != states.size()) throw InputError("connector labels and states disagree");
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (states[k].size() != labels[k].size() + 1) throw InputError("connector has the wrong number of states");
    p.connectors.push_back({states[k], labels[k]});
  }
  for (const auto& a : detail::field(j, "anchors"))
    p.anchors.push_back({detail::get_as<int>(a, "state"), detail::get_as<std::vector<int>>(a, "scc"),
                         detail::letters_from(detail::field(a, "alphabet"))});
  if (p.connectors.size() != p.anchors.size() + 1) throw InputError("a pattern has one more connector than anchors");
  p.hard = detail::get_as<bool>(j, "hard");
  return p;
}

inline Json patterns_to_json(const std::vector<SccPattern>& ps) {
  Json arr = Json::array();
  for (const auto& p : ps) arr.push_back(to_json(p));
  return {{"patterns", arr}};
}

inline std::vector<SccPattern> patterns_from_json(const Json& j) {
  std::vector<SccPattern> out;
  for (const auto& p : detail::field(j, "patterns")) out.push_back(pattern_from_json(p));
  return out;
}

/// Full evidence; the summary form drops patterns, automata and Parikh sets.
inline Json to_json(const Classification& c, bool full = true) {
  Json cores = Json::array();
  for (Vec2 r : c.common_core) cores.push_back(detail::vec_to(r));
  Json j{{"verdict", to_string(c.verdict)},
         {"entirely_useful", c.entirely_useful},
         {"formula", to_json(c.formula)},
         {"witness", c.antigrid ? to_json(*c.antigrid) : Json(nullptr)},
         {"modulus", c.modulus},
         {"cone_cores", cores}};
  if (full) {
    Json ls = Json::array();
    for (const auto& s : c.parikh) ls.push_back(to_json(s));
    j["trajectory"] = to_json(c.trajectory);
    j["patterns"] = patterns_to_json(c.patterns)["patterns"];
    j["hard_nfa"] = to_json(c.hard);
    j["parikh"] = ls;
  }
  return j;
}

inline Classification classification_from_json(const Json& j) {
  Classification c;
  c.verdict = verdict_from_string(detail::get_as<std::string>(j, "verdict"));
  c.entirely_useful = detail::get_as<bool>(j, "entirely_useful");
  c.formula = formula_from_json(detail::field(j, "formula"));
  if (!detail::field(j, "witness").is_null()) c.antigrid = grid_from_json(j.at("witness"));
  c.modulus = detail::get_as<i64>(j, "modulus");
  for (const auto& r : detail::field(j, "cone_cores")) c.common_core.push_back(detail::vec_from(r));
  if (j.contains("trajectory")) {
    c.trajectory = trajectory_from_json(j.at("trajectory"));
    c.patterns = patterns_from_json({{"patterns", detail::field(j, "patterns")}});
    c.hard = nfa_from_json(detail::field(j, "hard_nfa"));
    for (const auto& s : detail::field(j, "parikh")) c.parikh.push_back(linear_set_from_json(s));
  }
  return c;
}

/// Per-run coupled step pairs and the all-runs verdict.
inline Json coupling_report(const Pda& a, const Word& w, Span x, Span y, RunCaps caps = {}) {
  check_spans(w, x, y);
  auto runs = enumerate_runs(a, w, caps);
  Json rs = Json::array();
  bool all = !runs.empty();
  for (const auto& r : runs) {
    Json pairs = Json::array();
    for (auto [i, k] : coupled_pairs(r)) pairs.push_back(Json::array({i, k}));
    bool ok = spans_r_coupled(r, x, y);
    all = all && ok;
    rs.push_back({{"steps", r.length()}, {"coupled_pairs", pairs}, {"spans_coupled", ok}});
  }
  CouplingVerdict v = runs.empty() ? CouplingVerdict::NoAcceptingRun
                                   : (all ? CouplingVerdict::Coupled : CouplingVerdict::NotCoupled);
  return {{"word", w},
          {"x", {{"start", x.start}, {"len", x.len}}},
          {"y", {{"start", y.start}, {"len", y.len}}},
          {"runs", rs},
          {"verdict", to_string(v)}};
}

// ---- files and plotting ---------------------------------------------------

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

/// CSV rows x,y,in_set over [0,bound]^2.
inline std::string plot_csv(const Formula& f, int bound) {
  if (bound < 0 || bound > 1000) throw PreconditionError("plot box must lie in [0,1000]");
  std::ostringstream out;
  out << "x,y,in_set\n";
  for (int x = 0; x <= bound; ++x)
    for (int y = 0; y <= bound; ++y) out << x << ',' << y << ',' << (eval_formula(f, x, y) ? 1 : 0) << '\n';
  return out.str();
}

}  // namespace trajlab
