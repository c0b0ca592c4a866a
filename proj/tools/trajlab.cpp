#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajlab/trajlab.hpp"

using namespace trajlab;

namespace {

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad integer '" + s + "' in " + what);
  }
}

TrajectoryAutomaton load_trajectory(const std::string& arg) {
  if (starts_with(arg, "file:")) return trajectory_from_json(read_json_file(arg.substr(5)));
  return parse_trajectory_regex(starts_with(arg, "regex:") ? arg.substr(6) : arg);
}

Formula strip_formula() {
  return Formula::all({Formula::half_plane(1, -1, 2), Formula::half_plane(-1, 1, 2), Formula::congruence(1, 0, 1, 2)});
}

Pda builtin_pda(const std::string& desc) {
  auto parts = split(desc, ':');
  const std::string& name = parts.at(0);
  auto letters = [&](std::size_t k, Letter a, Letter b) -> std::pair<Letter, Letter> {
    if (parts.size() <= k) return {a, b};
    if (parts[k].size() != 2) throw InputError("builtin letter override takes two letters");
    return {parts[k][0], parts[k][1]};
  };
  if (name == "anbn") {
    auto [a, b] = letters(1, 'a', 'b');
    return dpda_anbn(a, b);
  }
  if (name == "anbn-all") {
    auto [a, b] = letters(1, 'a', 'b');
    return dpda_anbn_all_accepting(a, b);
  }
  if (name == "anbstar") {
    auto [a, b] = letters(1, 'a', 'b');
    return pda_an_bstar_an_bstar(a, b);
  }
  if (name == "dstarcn") {
    auto [d, c] = letters(1, 'd', 'c');
    return pda_dstar_cn_dstar_cn(d, c);
  }
  if (name == "length") {
    if (parts.size() < 3) throw InputError("builtin:length:i:p[:ab]");
    auto [a, b] = letters(3, 'a', 'b');
    return dpda_length_class(to_int(parts[1], "builtin:length"), to_int(parts[2], "builtin:length"), a, b);
  }
  throw InputError("unknown builtin '" + name + "'");
}

Language load_language(const std::string& desc) {
  if (starts_with(desc, "builtin:")) return builtin_pda(desc.substr(8));
  if (starts_with(desc, "words:")) {
    auto ws = split(desc.substr(6), ',');
    return std::set<Word>(ws.begin(), ws.end());
  }
  if (starts_with(desc, "regex:")) {
    std::string text = desc.substr(6);
    std::set<Letter> letters;
    for (char c : text)
      if (std::isalnum(static_cast<unsigned char>(c))) letters.insert(c);
    return regex_to_nfa(parse_regex(text, letters));
  }
  if (starts_with(desc, "file:")) {
    Json j = read_json_file(desc.substr(5));
    if (j.contains("stack")) return pda_from_json(j);
    return nfa_from_json(j);
  }
  throw InputError("language descriptor must start with builtin:, words:, regex: or file:");
}

Pda load_pda(const std::string& desc) {
  Language l = load_language(desc);
  if (auto* p = std::get_if<Pda>(&l)) return *p;
  throw InputError("'" + desc + "' does not describe a pushdown automaton");
}

Span parse_span(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() != 2) throw InputError("spans are written start:len");
  int a = to_int(parts[0], "span"), b = to_int(parts[1], "span");
  if (a < 0 || b < 0) throw InputError("spans are nonnegative");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

void write_plot(const std::string& path, const Formula& f, int box) {
  std::string csv = plot_csv(f, box);
  if (path == "-") {
    std::cout << csv;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << csv;
}

TrajectoryAutomaton swap_letters(TrajectoryAutomaton t) {
  for (auto& row : t.delta) std::swap(row[0], row[1]);
  return t;
}

Nfa finite_nfa(const std::set<Word>& ws) {
  Nfa a;
  a.initial = a.add_state();
  for (const auto& w : ws) {
    int cur = a.initial;
    for (Letter c : w) {
      int next = a.add_state();
      a.add_transition(cur, c, next);
      cur = next;
    }
    a.accepting[cur] = true;
  }
  return a;
}

/// Language words along T via the matching construction.
std::pair<std::set<Word>, std::string> shuffle_by_construction(const Language& l, const Language& r,
                                                              const TrajectoryAutomaton& t, std::size_t max_len) {
  auto as_nfa = [](const Language& x) -> std::optional<Nfa> {
    if (auto* n = std::get_if<Nfa>(&x)) return *n;
    if (auto* ws = std::get_if<std::set<Word>>(&x)) return finite_nfa(*ws);
    return std::nullopt;
  };
  auto ln = as_nfa(l), rn = as_nfa(r);
  if (ln && rn) return {words_up_to(shuffle_regular(*ln, *rn, t), max_len), "regular-product"};
  if (!ln && rn) return {accepted_words(shuffle_pda_regular(std::get<Pda>(l), *rn, t), max_len), "pda-regular-product"};
  if (ln && !rn)
    return {accepted_words(shuffle_pda_regular(std::get<Pda>(r), *ln, swap_letters(t)), max_len),
            "pda-regular-product"};
  return {accepted_words(safe_shuffle_pda(std::get<Pda>(l), std::get<Pda>(r), t), max_len), "safe-shuffle"};
}

void print_words(const std::set<Word>& ws) {
  for (const auto& w : ws) std::cout << (w.empty() ? "(empty)" : w) << "\n";
}

Json words_json(const std::set<Word>& ws) { return Json(std::vector<std::string>(ws.begin(), ws.end())); }

int run_selftest(bool json) {
  struct Check {
    std::string name;
    std::function<bool()> ok;
  };
  std::vector<Check> checks;
  auto verdict = [](const char* re, Verdict v) { return Check{std::string("classify ") + re, [=] {
                                                                return classify_trajectory(re).verdict == v;
                                                              }}; };
  checks.push_back(verdict("s*t*", Verdict::CflSafe));
  checks.push_back(verdict("s*t*s*", Verdict::CflSafe));
  checks.push_back(verdict("s*t*s*t*", Verdict::DcflHostile));
  checks.push_back(verdict("(st)*t*(st)*t*", Verdict::DcflHostile));
  checks.push_back(verdict("(st(t)*)*", Verdict::DcflHostile));
  checks.push_back(verdict("(st)*(s*|t*)", Verdict::DcflHostile));
  checks.push_back(verdict("(s*|t*)(st)*(s*|t*)", Verdict::DcflHostile));
  checks.push_back(verdict("(s|t)*", Verdict::DcflHostile));
  checks.push_back(verdict("(st)*", Verdict::DcflMixed));
  checks.push_back({"strip formula has no grid", [] { return !decide_grid(strip_formula()).has_value(); }});
  checks.push_back({"strip formula antigrid verifies", [] {
                      auto g = decide_antigrid(strip_formula());
                      return g && verify_grid(complement(strip_formula()), *g);
                    }});
  checks.push_back({"strip membership (1,1) and not (0,0)", [] {
                      return eval_formula(strip_formula(), 1, 1) && !eval_formula(strip_formula(), 0, 0);
                    }});
  checks.push_back({"strip antigrid (0,2,0,2)", [] {
                      return verify_grid(complement(strip_formula()), Grid{0, 2, 0, 2});
                    }});
  checks.push_back({"a^n b^n couplings n=1..6", [] {
                      Pda a = dpda_anbn();
                      for (std::size_t n = 1; n <= 6; ++n)
                        if (a_coupled(a, std::string(n, 'a') + std::string(n, 'b'), {0, n}, {n, n}) !=
                            CouplingVerdict::Coupled)
                          return false;
                      return true;
                    }});
  checks.push_back({"all-accepting a^n b^n couples a^k3 with b^(k1+k2)", [] {
                      Pda a = dpda_anbn_all_accepting();
                      for (std::size_t k = 1; k <= 2; ++k) {
                        Word w = std::string(3 * k, 'a') + std::string(3 * k, 'b');
                        if (a_coupled(a, w, {k, k}, {3 * k, 2 * k}) != CouplingVerdict::Coupled) return false;
                      }
                      return true;
                    }});
  checks.push_back({"safe shuffle refuses s*t*s*t*", [] {
                      try {
                        safe_shuffle_pda(dpda_anbn(), dpda_anbn('c', 'd'), parse_trajectory_regex("s*t*s*t*"));
                      } catch (const PreconditionError&) {
                        return true;
                      }
                      return false;
                    }});
  checks.push_back({"safe shuffle under s*t* matches the oracle", [] {
                      auto t = parse_trajectory_regex("s*t*");
                      Pda a = dpda_anbn(), b = dpda_anbn('c', 'd');
                      return accepted_words(safe_shuffle_pda(a, b, t), 8) ==
                             shuffle_oracle(Language{a}, Language{b}, t, 8);
                    }});
  int failed = 0;
  Json rows = Json::array();
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.ok();
    } catch (const std::exception&) {
      ok = false;
    }
    failed += !ok;
    if (json) rows.push_back({{"check", c.name}, {"ok", ok}});
    else std::cout << (ok ? "ok   " : "FAIL ") << c.name << "\n";
  }
  if (json) std::cout << Json{{"checks", rows}, {"failed", failed}}.dump(2) << "\n";
  else std::cout << (checks.size() - failed) << "/" << checks.size() << " checks passed\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajlab: shuffles along trajectories and pushdown couplings"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");

  std::string traj;
  bool evidence = false, allow = false;
  std::string plot;
  int box = 40;
  auto* classify = app.add_subcommand("classify", "Classify a trajectory");
  classify->add_option("trajectory", traj, "Regex over {s,t} or file:automaton.json")->required();
  classify->add_flag("--evidence", evidence, "Emit patterns, automata, Parikh sets and formula");
  classify->add_flag("--allow-not-useful", allow, "Classify trajectories that are not entirely useful");
  classify->add_option("--plot-data", plot, "Write x,y,in_set CSV of the hard Parikh set ('-' for stdout)");
  classify->add_option("--box", box, "Plot box size")->check(CLI::Range(0, 1000));

  auto* patterns = app.add_subcommand("patterns", "List SCC patterns");
  patterns->add_option("trajectory", traj, "Regex over {s,t} or file:automaton.json")->required();

  bool hard_only = false;
  auto* parikh = app.add_subcommand("parikh", "Parikh image as linear sets and formula");
  parikh->add_option("trajectory", traj, "Regex over {s,t} or file:automaton.json")->required();
  parikh->add_flag("--hard", hard_only, "Use the hard part of the trajectory");
  parikh->add_option("--plot-data", plot, "Write x,y,in_set CSV ('-' for stdout)");
  parikh->add_option("--box", box, "Plot box size")->check(CLI::Range(0, 1000));

  std::string formula_src;
  bool anti = false;
  auto* grid = app.add_subcommand("grid", "Decide whether a semilinear set has a grid");
  grid->add_option("formula", formula_src, "Formula JSON path, builtin:strip, or hard:REGEX")->required();
  grid->add_flag("--anti", anti, "Look for an antigrid instead");
  grid->add_option("--plot-data", plot, "Write x,y,in_set CSV ('-' for stdout)");
  grid->add_option("--box", box, "Plot box size")->check(CLI::Range(0, 1000));

  std::string left, right;
  std::size_t max_len = 6;
  bool oracle_only = false;
  auto* shuffle = app.add_subcommand("shuffle", "Bounded shuffle of two languages along a trajectory");
  shuffle->add_option("--a", left, "First language descriptor")->required();
  shuffle->add_option("--b", right, "Second language descriptor")->required();
  shuffle->add_option("--trajectory", traj, "Regex over {s,t} or file:automaton.json")->required();
  shuffle->add_option("--max-len", max_len, "Word length bound")->check(CLI::Range(0, 12));
  shuffle->add_flag("--oracle", oracle_only, "Only run the brute-force oracle");

  std::string pda_desc, word, xs, ys;
  auto* couplings = app.add_subcommand("couplings", "Coupled step pairs of every accepting run");
  couplings->add_option("--pda", pda_desc, "PDA descriptor (builtin:... or file:...)")->required();
  couplings->add_option("--word", word, "Input word")->required();
  couplings->add_option("--x", xs, "Span start:len")->required();
  couplings->add_option("--y", ys, "Span start:len")->required();

  auto* selftest = app.add_subcommand("selftest", "Replay the built-in fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Input);
  }

  try {
    if (*classify) {
      Classification c = classify_trajectory(load_trajectory(traj), {allow});
      if (!plot.empty()) write_plot(plot, c.formula, box);
      if (json) {
        std::cout << to_json(c, evidence).dump(2) << "\n";
      } else {
        std::cout << to_string(c.verdict) << "\n";
        if (c.antigrid) std::cout << "antigrid " << to_string(*c.antigrid) << "\n";
        else if (c.verdict == Verdict::DcflHostile) std::cout << "no antigrid; cone cores meet in 0 residues\n";
        if (evidence) {
          std::cout << "patterns " << c.patterns.size() << ", hard "
                    << std::count_if(c.patterns.begin(), c.patterns.end(), [](auto& p) { return p.hard; }) << "\n";
          std::cout << "hard Parikh formula " << to_string(c.formula) << "\n";
        }
      }
    } else if (*patterns) {
      auto ps = scc_patterns(load_trajectory(traj));
      if (json) {
        std::cout << patterns_to_json(ps).dump(2) << "\n";
      } else {
        for (const auto& p : ps) {
          std::cout << (p.hard ? "hard " : "easy ");
          for (std::size_t k = 0; k < p.connectors.size(); ++k) {
            std::cout << (p.connectors[k].labels.empty() ? "-" : p.connectors[k].labels);
            if (k < p.anchors.size()) {
              std::cout << " [q" << p.anchors[k].state << ":";
              for (Letter c : p.anchors[k].alphabet) std::cout << c;
              std::cout << "] ";
            }
          }
          std::cout << "\n";
        }
      }
    } else if (*parikh) {
      TrajectoryAutomaton t = load_trajectory(traj);
      Nfa lang = hard_only ? hard_language(t) : t.to_nfa();
      auto sets = parikh_of_nfa(lang);
      Formula f = to_formula(decompose_simple(sets));
      if (!plot.empty()) write_plot(plot, f, box);
      if (json) {
        Json ls = Json::array();
        for (const auto& s : sets) ls.push_back(to_json(s));
        std::cout << Json{{"linear_sets", ls}, {"formula", to_json(f)}}.dump(2) << "\n";
      } else {
        for (const auto& s : sets) {
          std::cout << to_string(s.base);
          for (Vec2 p : s.periods) std::cout << " + N" << to_string(p);
          std::cout << "\n";
        }
        std::cout << to_string(f) << "\n";
      }
    } else if (*grid) {
      Formula f;
      if (formula_src == "builtin:strip") f = strip_formula();
      else if (starts_with(formula_src, "hard:")) f = formula_of_regular(hard_language(load_trajectory(formula_src.substr(5))));
      else f = formula_from_json(read_json_file(starts_with(formula_src, "file:") ? formula_src.substr(5) : formula_src));
      if (!plot.empty()) write_plot(plot, f, box);
      auto rep = decide_grid_report(anti ? complement(f) : f);
      if (json) {
        Json cores = Json::array();
        for (Vec2 r : rep.common_core) cores.push_back(Json::array({r.x, r.y}));
        std::cout << Json{{"kind", anti ? "antigrid" : "grid"},
                          {"witness", rep.grid ? to_json(*rep.grid) : Json(nullptr)},
                          {"modulus", rep.field.modulus},
                          {"cones", rep.field.cones.size()},
                          {"bands", rep.field.bands.size()},
                          {"cone_cores", cores}}
                         .dump(2)
                  << "\n";
      } else if (rep.grid) {
        std::cout << (anti ? "antigrid " : "grid ") << to_string(*rep.grid) << "\n";
      } else {
        std::cout << "no " << (anti ? "antigrid" : "grid") << "\n";
      }
    } else if (*shuffle) {
      Language l = load_language(left), r = load_language(right);
      TrajectoryAutomaton t = load_trajectory(traj);
      std::set<Word> oracle = shuffle_oracle(l, r, t, max_len);
      std::set<Word> words = oracle;
      std::string method = "oracle";
      if (!oracle_only) std::tie(words, method) = shuffle_by_construction(l, r, t, max_len);
      if (json) {
        std::cout << Json{{"method", method}, {"words", words_json(words)}, {"oracle_agrees", words == oracle}}.dump(2)
                  << "\n";
      } else {
        print_words(words);
      }
      if (words != oracle) {
        std::cerr << "error: construction disagrees with the oracle\n";
        return static_cast<int>(ErrorKind::Internal);
      }
    } else if (*couplings) {
      Json rep = coupling_report(load_pda(pda_desc), word, parse_span(xs), parse_span(ys));
      if (json) {
        std::cout << rep.dump(2) << "\n";
      } else {
        for (const auto& run : rep["runs"]) {
          std::cout << "run:";
          for (const auto& p : run["coupled_pairs"]) std::cout << " (" << p[0] << "," << p[1] << ")";
          std::cout << (run["spans_coupled"].get<bool>() ? "  x~y" : "  x!~y") << "\n";
        }
        std::cout << rep["verdict"].get<std::string>() << "\n";
      }
    } else if (*selftest) {
      return run_selftest(json);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::Internal);
  }
  return 0;
}
