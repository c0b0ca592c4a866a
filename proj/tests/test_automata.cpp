#include <gtest/gtest.h>

#include <random>
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

const std::vector<std::string> kFixtures = {
    "s*t*", "s*t*s*", "s*t*s*t*", "(st)*t*(st)*t*", "(st(t)*)*", "(st)*(s*|t*)", "(s*|t*)(st)*(s*|t*)",
    "(s|t)*", "(st)*", "s(t|s)", "(ss)*t*", "st+s*", "()", "(s|)t"};

bool reach(const std::vector<std::vector<int>>& adj, int a, int b) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<int> st{a};
  seen[a] = true;
  while (!st.empty()) {
    int q = st.back();
    st.pop_back();
    if (q == b) return true;
    for (int r : adj[q])
      if (!seen[r]) seen[r] = true, st.push_back(r);
  }
  return false;
}

}  // namespace

TEST(Regex, MatchesStdRegexOnBoundedWords) {
  for (const auto& re : kFixtures) {
    std::regex oracle(re);
    TrajectoryAutomaton t = parse_trajectory_regex(re);
    Nfa n = regex_to_nfa(re);
    for (const auto& w : all_words("st", 8)) {
      bool want = std::regex_match(w, oracle);
      EXPECT_EQ(t.accepts(w), want) << re << " on " << w;
      EXPECT_EQ(accepts(n, w), want) << re << " on " << w;
    }
  }
}

TEST(Regex, SyntaxErrorsCarryOffsets) {
  try {
    parse_regex("s(");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset, 2u);
    EXPECT_EQ(e.exit_code(), 3);
  }
  EXPECT_THROW(parse_regex("st)"), SyntaxError);
  EXPECT_THROW(parse_regex("*s"), SyntaxError);
  EXPECT_THROW(parse_trajectory_regex("sa"), InputError);
  EXPECT_NO_THROW(parse_regex(" s * t "));
}

TEST(Dfa, MinimalStateCounts) {
  EXPECT_EQ(parse_trajectory_regex("s*t*").num_states(), 2);
  EXPECT_EQ(parse_trajectory_regex("(st)*").num_states(), 2);
  EXPECT_EQ(parse_trajectory_regex("(s|t)*").num_states(), 1);
  EXPECT_EQ(parse_trajectory_regex("s*t*s*t*").num_states(), 4);
  EXPECT_EQ(parse_trajectory_regex("s(t|s)").num_states(), 3);
}

TEST(Dfa, MinimizationIsCanonical) {
  EXPECT_EQ(parse_trajectory_regex("(s|t)*"), parse_trajectory_regex("(s*t*)*"));
  EXPECT_EQ(parse_trajectory_regex("s*t*"), parse_trajectory_regex("s*(t*|s*t+)"));
  EXPECT_EQ(parse_trajectory_regex("(st)*"), parse_trajectory_regex("()|s(ts)*t"));
}

TEST(Dfa, EmptyLanguageIsOneRejectingState) {
  Nfa none = empty_language_nfa({kS, kT});
  TrajectoryAutomaton t = minimal_dfa(none);
  EXPECT_EQ(t.num_states(), 1);
  EXPECT_FALSE(t.accepting[0]);
}

TEST(Dfa, ValidateRejectsBadTables) {
  TrajectoryAutomaton t;
  t.initial = 0;
  t.accepting = {true};
  t.delta = {{3, -1}};
  EXPECT_THROW(t.validate(), InputError);
}

TEST(Scc, TarjanAgreesWithMutualReachability) {
  std::mt19937 rng(7);
  for (int round = 0; round < 50; ++round) {
    int n = 1 + static_cast<int>(rng() % 9);
    std::vector<std::vector<int>> adj(n);
    for (int e = 0; e < 2 * n; ++e) adj[rng() % n].push_back(static_cast<int>(rng() % n));
    auto comp = tarjan_scc(adj);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        EXPECT_EQ(comp[a] == comp[b], reach(adj, a, b) && reach(adj, b, a));
  }
}

TEST(Usefulness, Fixtures) {
  for (const char* re : {"s*t*", "s*t*s*t*", "(st)*", "(s|t)*", "(st(t)*)*"})
    EXPECT_TRUE(is_entirely_useful(parse_trajectory_regex(re))) << re;
  for (const char* re : {"()", "s(t|s)", "s*", "(ss)*t*"})
    EXPECT_FALSE(is_entirely_useful(parse_trajectory_regex(re))) << re;
}

TEST(Patterns, CountsPerFixture) {
  struct Row {
    const char* re;
    std::size_t total, hard;
  };
  for (const Row& r : {Row{"s*t*", 6, 0}, Row{"(s|t)*", 2, 1}, Row{"s*t*s*t*", 30, 1}, Row{"(st)*", 2, 1},
                       Row{"(st(t)*)*", 5, 3}, Row{"(st)*(s*|t*)", 18, 12}}) {
    auto ps = scc_patterns(parse_trajectory_regex(r.re));
    EXPECT_EQ(ps.size(), r.total) << r.re;
    EXPECT_EQ(static_cast<std::size_t>(std::count_if(ps.begin(), ps.end(), [](auto& p) { return p.hard; })), r.hard)
        << r.re;
  }
}

TEST(Patterns, HardnessFromAlphabetSequences) {
  using S = std::set<Letter>;
  EXPECT_TRUE(is_hard_alphabet_sequence({S{'s', 't'}}));
  EXPECT_TRUE(is_hard_alphabet_sequence({S{'s'}, S{'t'}, S{'s'}, S{'t'}}));
  EXPECT_TRUE(is_hard_alphabet_sequence({S{'t'}, S{'s'}, S{'s'}, S{'t'}, S{'s'}}));
  EXPECT_FALSE(is_hard_alphabet_sequence({S{'s'}, S{'t'}, S{'s'}}));
  EXPECT_FALSE(is_hard_alphabet_sequence({S{'t'}, S{'t'}, S{'s'}, S{'t'}}));
  EXPECT_FALSE(is_hard_alphabet_sequence({}));
}

TEST(Patterns, EveryPatternIsAnAcceptingPathSkeleton) {
  for (const auto& re : kFixtures) {
    TrajectoryAutomaton t = parse_trajectory_regex(re);
    for (const auto& p : scc_patterns(t)) {
      ASSERT_EQ(p.connectors.size(), p.anchors.size() + 1);
      EXPECT_EQ(p.connectors.front().states.front(), t.initial);
      EXPECT_TRUE(t.accepting[p.connectors.back().states.back()]);
      for (std::size_t k = 0; k < p.anchors.size(); ++k) {
        EXPECT_EQ(p.connectors[k].states.back(), p.anchors[k].state);
        EXPECT_EQ(p.connectors[k + 1].states.front(), p.anchors[k].state);
        EXPECT_FALSE(p.anchors[k].alphabet.empty());
        if (p.anchors[k].alphabet.size() == 2) {
          EXPECT_TRUE(p.hard);
        }
      }
      for (const auto& c : p.connectors)
        for (std::size_t k = 0; k < c.labels.size(); ++k) EXPECT_EQ(t.step(c.states[k], c.labels[k]), c.states[k + 1]);
    }
  }
}

TEST(Patterns, LanguagesCoverTheTrajectory) {
  for (const auto& re : kFixtures) {
    TrajectoryAutomaton t = parse_trajectory_regex(re);
    auto ps = scc_patterns(t);
    std::set<Word> covered;
    for (const auto& p : ps) {
      auto ws = words_up_to(pattern_language(t, p), 8);
      for (const auto& w : ws) EXPECT_TRUE(t.accepts(w)) << re << " pattern word " << w;
      covered.insert(ws.begin(), ws.end());
    }
    EXPECT_EQ(covered, words_up_to(t.to_nfa(), 8)) << re;
  }
}

TEST(Patterns, HardLanguagesOfFixtures) {
  EXPECT_TRUE(is_empty_language(hard_language(parse_trajectory_regex("s*t*"))));
  EXPECT_TRUE(is_empty_language(hard_language(parse_trajectory_regex("s*t*s*"))));
  // (st)*: the only hard pattern is the st-loop itself.
  TrajectoryAutomaton st = parse_trajectory_regex("(st)*");
  auto hard = words_up_to(hard_language(st), 8);
  std::set<Word> want{"", "st", "stst", "ststst", "stststst"};
  EXPECT_EQ(hard, want);
  // s*t*s*t*: hard words use the last three blocks.
  for (const auto& w : words_up_to(hard_language(parse_trajectory_regex("s*t*s*t*")), 7))
    EXPECT_TRUE(std::regex_match(w, std::regex("s*t+s+t+"))) << w;
}

TEST(Patterns, FullShuffleHasOneHardAndOneEmptyPattern) {
  auto ps = scc_patterns(parse_trajectory_regex("(s|t)*"));
  ASSERT_EQ(ps.size(), 2u);
  int hard = 0;
  for (const auto& p : ps) {
    if (p.hard) {
      ++hard;
      ASSERT_EQ(p.anchors.size(), 1u);
      EXPECT_EQ(p.anchors[0].alphabet, (std::set<Letter>{'s', 't'}));
    } else {
      EXPECT_TRUE(p.anchors.empty());
    }
  }
  EXPECT_EQ(hard, 1);
}

TEST(Patterns, CapOverflowIsAResourceError) {
  EXPECT_THROW(scc_patterns(parse_trajectory_regex("s*t*s*t*"), 3), ResourceError);
}

TEST(Patterns, TMinusHardExcludesHardWords) {
  TrajectoryAutomaton t = parse_trajectory_regex("(st)*|s*t*");
  TrajectoryAutomaton d = t_minus_hard(t);
  auto hard = words_up_to(hard_language(t), 8);
  for (const auto& w : words_up_to(t.to_nfa(), 8)) EXPECT_EQ(d.accepts(w), !hard.contains(w)) << w;
}
