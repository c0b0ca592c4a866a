#include <gtest/gtest.h>

#include <cstdlib>
#include <functional>
#include <regex>

#include "trajlab/trajlab.hpp"

using namespace trajlab;

namespace {

std::vector<std::string> all_words(const std::string& letters, std::size_t max_len) {
  std::vector<std::string> out{""};
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k].size() < max_len)
      for (char c : letters) out.push_back(out[k] + c);
  return out;
}


bool is_anbn(const std::string& w) {
  std::size_t n = w.size() / 2;
  return w.size() % 2 == 0 && w == std::string(n, 'a') + std::string(n, 'b');
}

bool is_an_bstar_an_bstar(const std::string& w) {
  std::smatch m;
  if (!std::regex_match(w, m, std::regex("(a*)(b*)(a*)(b*)"))) return false;
  for (std::size_t n = 0; 2 * n <= w.size(); ++n) {
    std::string an(n, 'a');
    for (std::size_t k1 = 0; 2 * n + k1 <= w.size(); ++k1)
      if (w == an + std::string(k1, 'b') + an + std::string(w.size() - 2 * n - k1, 'b')) return true;
  }
  return false;
}

bool is_dstar_cn_dstar_cn(const std::string& w) {
  for (std::size_t n = 0; 2 * n <= w.size(); ++n) {
    std::string cn(n, 'c');
    for (std::size_t k1 = 0; 2 * n + k1 <= w.size(); ++k1)
      if (w == std::string(k1, 'd') + cn + std::string(w.size() - 2 * n - k1, 'd') + cn) return true;
  }
  return false;
}

bool is_length_class(const std::string& w, int i, int p) {
  std::smatch m;
  bool shape = std::regex_match(w, std::regex("a*")) ||
               (std::regex_match(w, m, std::regex("(a+)(b+)(a*)")) && m[1].length() == m[2].length());
  int n = static_cast<int>(w.size());
  return shape && n >= i && (n - i) % p == 0;
}

/// Coupled step pairs from an explicit stack of push steps.
std::set<std::pair<int, int>> oracle_pairs(const Pda& a, const Run& r) {
  std::set<std::pair<int, int>> out;
  std::vector<int> pushed;
  for (int k = 1; k <= r.length(); ++k) {
    const auto& t = a.transitions[r.steps[k - 1]];
    if (t.push) {
      pushed.push_back(k);
    } else {
      out.insert({pushed.back(), k});
      pushed.pop_back();
    }
  }
  return out;
}

Pda tiny_pda(bool pushing_cycle) {
  Pda p;
  int a = p.add_state("a", true), b = p.add_state("b");
  p.input = {'x'};
  if (pushing_cycle) p.add_push(a, std::nullopt, "X", b);
  else p.add_pop(a, std::nullopt, "X", b);
  p.add_pop(b, std::nullopt, "X", a);
  return p;
}

}  // namespace

TEST(Builders, LanguagesMatchIndependentPredicates) {
  Pda anbn = dpda_anbn(), all = dpda_anbn_all_accepting(), l1 = pda_an_bstar_an_bstar(), l2 = pda_dstar_cn_dstar_cn();
  for (const auto& w : all_words("ab", 8)) {
    EXPECT_EQ(accepts(anbn, w), is_anbn(w)) << w;
    EXPECT_TRUE(accepts(all, w)) << w;
    EXPECT_EQ(accepts(l1, w), is_an_bstar_an_bstar(w)) << w;
  }
  for (const auto& w : all_words("cd", 8)) EXPECT_EQ(accepts(l2, w), is_dstar_cn_dstar_cn(w)) << w;
  for (auto [i, p] : {std::pair{3, 2}, std::pair{1, 3}, std::pair{0, 3}, std::pair{2, 1}}) {
    Pda lc = dpda_length_class(i, p);
    for (const auto& w : all_words("ab", 9)) EXPECT_EQ(accepts(lc, w), is_length_class(w, i, p)) << w << " " << i;
  }
}

TEST(Builders, DeterministicOnesHaveOneRunPerWord) {
  for (const Pda& a : {dpda_anbn(), dpda_anbn_all_accepting(), dpda_length_class(2, 3)})
    for (const auto& w : all_words("ab", 7)) EXPECT_LE(enumerate_runs(a, w).size(), 1u) << w;
}

TEST(PdaModel, PushingEmptyCyclesAreRejected) {
  EXPECT_THROW(tiny_pda(true).validate(), InputError);
  EXPECT_NO_THROW(tiny_pda(false).validate());
  Pda analysis = tiny_pda(true);
  analysis.analysis_only = true;
  EXPECT_NO_THROW(analysis.validate());
}

TEST(PdaModel, RunsReplayWithPositions) {
  auto runs = enumerate_runs(dpda_anbn(), "aabb");
  ASSERT_EQ(runs.size(), 1u);
  const trajlab::Run& r = runs[0];
  EXPECT_EQ(r.length(), 4);
  EXPECT_EQ(r.read_step, (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(r.height(0), 0);
  EXPECT_EQ(r.height(2), 2);
  EXPECT_EQ(r.height(4), 0);
  trajlab::Run again = replay(dpda_anbn(), "aabb", r.steps);
  EXPECT_EQ(again.stacks, r.stacks);
}

TEST(PdaModel, RunCapIsAResourceError) {
  RunCaps caps;
  caps.max_runs = 2;
  EXPECT_THROW(enumerate_runs(pda_an_bstar_an_bstar(), "bbbb", caps), ResourceError);
}

TEST(PdaModel, EnvironmentOverridesRunCap) {
  setenv("TRAJLAB_MAX_RUNS", "1", 1);
  EXPECT_THROW(enumerate_runs(pda_an_bstar_an_bstar(), "bbbb"), ResourceError);
  unsetenv("TRAJLAB_MAX_RUNS");
  EXPECT_NO_THROW(enumerate_runs(pda_an_bstar_an_bstar(), "bbbb"));
}

TEST(Coupling, ExampleOneForNUpToSix) {
  Pda a = dpda_anbn();
  for (std::size_t n = 1; n <= 6; ++n) {
    Word w = std::string(n, 'a') + std::string(n, 'b');
    EXPECT_EQ(a_coupled(a, w, {0, n}, {n, n}), CouplingVerdict::Coupled) << n;
  }
}

TEST(Coupling, AllAcceptingDpdaCouplesInnerBlocks) {
  Pda a = dpda_anbn_all_accepting();
  for (std::size_t k = 1; k <= 2; ++k) {
    std::size_t k1 = k, k2 = k, k3 = k;
    Word w = std::string(k1 + k3 + k2, 'a') + std::string(k1 + k2, 'b') + std::string(k3, 'b');
    EXPECT_EQ(a_coupled(a, w, {k1, k3}, {k1 + k2 + k3, k1 + k2}), CouplingVerdict::Coupled) << k;
  }
}

TEST(Coupling, NotCoupledAndNoRun) {
  Pda a = dpda_anbn();
  EXPECT_EQ(a_coupled(a, "aabb", {0, 1}, {3, 1}), CouplingVerdict::Coupled);
  EXPECT_EQ(a_coupled(dpda_anbn_all_accepting(), "abab", {0, 1}, {2, 1}), CouplingVerdict::NotCoupled);
  EXPECT_EQ(a_coupled(a, "aab", {0, 1}, {2, 1}), CouplingVerdict::NoAcceptingRun);
  EXPECT_THROW(a_coupled(a, "aabb", {0, 2}, {1, 2}), PreconditionError);
  EXPECT_THROW(a_coupled(a, "aabb", {0, 0}, {2, 2}), PreconditionError);
}

TEST(Coupling, PairsMatchStackOracleAndNeverCross) {
  for (const Pda& a : {dpda_anbn(), dpda_anbn_all_accepting(), pda_an_bstar_an_bstar()})
    for (const auto& w : all_words("ab", 7))
      for (const auto& r : enumerate_runs(a, w)) {
        auto got = coupled_pairs(r);
        EXPECT_EQ((std::set<std::pair<int, int>>(got.begin(), got.end())), oracle_pairs(a, r)) << w;
        EXPECT_FALSE(has_crossing_couplings(r)) << w;
        for (auto [i, j] : got) EXPECT_TRUE(r_coupled(r, i, j));
      }
}

TEST(Endcap, FactsHoldOnEveryDecomposition) {
  int checked = 0;
  for (const Pda& a : {dpda_anbn(), dpda_anbn_all_accepting(), pda_an_bstar_an_bstar(), dpda_length_class(2, 3)})
    for (const auto& w : all_words("ab", 6))
      for (const auto& r : enumerate_runs(a, w))
        for (std::size_t u = 0; u < w.size(); ++u)
          for (std::size_t x = 1; u + x <= w.size(); ++x) {
            Endcap c = min_endcap(r, u, x);
            EndcapFacts f = check_endcap_facts(r, u, x, c);
            EXPECT_TRUE(f.all()) << w << " u=" << u << " x=" << x;
            ++checked;
          }
  EXPECT_GT(checked, 500);
}

TEST(Endcap, TupleFollowsTheDefinition) {
  trajlab::Run r = enumerate_runs(dpda_anbn(), "aabb")[0];
  Endcap c = min_endcap(r, 1, 1);
  EXPECT_TRUE(c.effect.empty());
  Endcap d = min_endcap(r, 0, 2);
  EXPECT_EQ(d.i, 0);
  EXPECT_EQ(d.u_prefix, "");
  EXPECT_EQ(c.v_suffix, r.word.substr(consumed(r, c.j)));
}

TEST(SuffixSignature, EqualSignaturesGiveEqualBoundedAcceptance) {
  for (const Pda& a0 : {dpda_anbn(), pda_an_bstar_an_bstar()}) {
    Pda a = a0;
    std::vector<Stack> words{{}};
    for (std::size_t k = 0; k < words.size(); ++k)
      if (words[k].size() < 3)
        for (Sym s = 0; s < static_cast<Sym>(a.stack_names.size()); ++s) {
          Stack e = words[k];
          e.push_back(s);
          words.push_back(e);
        }
    for (int k = 0; k <= 3; ++k) {
      std::vector<SuffixSignature> sigs;
      for (const auto& e : words) sigs.push_back(suffix_signature(a, e, k));
      for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) {
          if (words[i].empty() != words[j].empty()) {
            EXPECT_NE(sigs[i], sigs[j]);
          }
          if (sigs[i] != sigs[j]) continue;
          for (const auto& pre : words) {
            if (pre.size() > 2) continue;
            for (int q = 0; q < a.num_states(); ++q)
              for (const auto& w : all_words(std::string(a.input.begin(), a.input.end()), k)) {
                Stack s1 = pre, s2 = pre;
                s1.insert(s1.end(), words[i].begin(), words[i].end());
                s2.insert(s2.end(), words[j].begin(), words[j].end());
                ASSERT_EQ(accepts_from(a, q, s1, w), accepts_from(a, q, s2, w));
              }
          }
        }
    }
  }
}

TEST(SuffixSignature, BoundsAreChecked) {
  EXPECT_THROW(suffix_signature(dpda_anbn(), {0}, 7), InputError);
  EXPECT_TRUE(suffix_signature(dpda_anbn(), {}, 2).epsilon);
}

TEST(Surgery, AllCasesReplayToAcceptingRuns) {
  std::map<std::string, int> seen;
  for (const Pda& a : {dpda_anbn(), dpda_anbn_all_accepting()})
    for (const auto& w : all_words("ab", 4))
      for (const auto& r : enumerate_runs(a, w))
        for (std::size_t w1 = 1; w1 <= w.size(); ++w1)
          for (std::size_t y = 0; w1 + y <= w.size(); ++y)
            for (std::size_t u1 = 0; u1 < w1; ++u1)
              for (std::size_t x1 = 1; u1 + x1 <= w1; ++x1)
                for (const auto& w2 : all_words("ab", 3))
                  for (const auto& r2 : enumerate_prefix_runs(a, w2))
                    for (std::size_t u2 = 0; u2 < w2.size(); ++u2)
                      for (std::size_t x2 = 1; u2 + x2 <= w2.size(); ++x2) {
                        try {
                          SurgeryResult s = surgery_replay(a, r, u1, x1, w1 - u1 - x1, y, r2, u2, x2);
                          ++seen[s.case_label];
                          EXPECT_TRUE(s.surgered_run_valid) << w << " -> " << s.target;
                          EXPECT_TRUE(s.accepted) << w << " -> " << s.target;
                        } catch (const PreconditionError&) {
                        }
                      }
  EXPECT_GT(seen["1"], 0);
  EXPECT_GT(seen["2.1"], 0);
  EXPECT_GT(seen["2.2"], 0);
}

TEST(Surgery, PreconditionsAreEnforced) {
  Pda a = dpda_anbn();
  trajlab::Run r = enumerate_runs(a, "aabb")[0];
  trajlab::Run r2 = enumerate_prefix_runs(a, "a")[0];
  EXPECT_THROW(surgery_replay(a, r, 0, 2, 0, 2, r2, 0, 1), PreconditionError);
  trajlab::Run rej = enumerate_prefix_runs(a, "aab")[0];
  EXPECT_THROW(surgery_replay(a, rej, 0, 1, 0, 1, r2, 0, 1), PreconditionError);
}

TEST(Projection, ProductRunsProjectToFactorCouplings) {
  Pda product = shuffle_pda_regular(dpda_anbn(), regex_to_nfa(parse_regex("x*", {'x'})), parse_trajectory_regex("(s|t)*"));
  Pda proj = project_alphabet(product, {'a', 'b'});
  EXPECT_TRUE(proj.analysis_only);
  EXPECT_EQ(proj.input, (std::set<Letter>{'a', 'b'}));
  for (const auto& w : all_words("ab", 6)) EXPECT_EQ(accepts(proj, w), is_anbn(w)) << w;
  for (std::size_t n = 1; n <= 3; ++n) {
    Word w = std::string(n, 'a') + std::string(n, 'b');
    RunCaps caps;
    caps.step_budget = 2 * n + 4;
    EXPECT_EQ(a_coupled(proj, w, {0, n}, {n, n}, caps), CouplingVerdict::Coupled);
  }
}
