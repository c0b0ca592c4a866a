#include <gtest/gtest.h>

#include "trajlab/trajlab.hpp"

using namespace trajlab;

namespace {

TrajectoryAutomaton swapped(TrajectoryAutomaton t) {
  for (auto& row : t.delta) std::swap(row[0], row[1]);
  return t;
}

Nfa star_of(const std::string& letters) {
  std::string re = "(";
  for (std::size_t k = 0; k < letters.size(); ++k) re += (k ? "|" : "") + std::string(1, letters[k]);
  re += ")*";
  return regex_to_nfa(parse_regex(re, std::set<Letter>(letters.begin(), letters.end())));
}

Nfa nfa_of(const char* re, const std::string& letters) {
  return regex_to_nfa(parse_regex(re, std::set<Letter>(letters.begin(), letters.end())));
}

Word control_of(const Word& w, const std::set<Letter>& left) {
  Word c;
  for (Letter x : w) c += left.contains(x) ? kS : kT;
  return c;
}

}  // namespace

TEST(ShuffleWords, Examples) {
  EXPECT_EQ(shuffle_words("ab", "xy", "stst"), "axby");
  EXPECT_EQ(shuffle_words("ab", "xy", "sstt"), "abxy");
  EXPECT_EQ(shuffle_words("", "", ""), "");
  EXPECT_THROW(shuffle_words("a", "xy", "st"), PreconditionError);
  EXPECT_THROW(shuffle_words("a", "x", "sq"), InputError);
}

TEST(Oracle, Examples) {
  TrajectoryAutomaton st = parse_trajectory_regex("st");
  EXPECT_EQ(shuffle_oracle(std::set<Word>{"a"}, std::set<Word>{"x"}, st, 4), (std::set<Word>{"ax"}));
  EXPECT_EQ(shuffle_oracle(std::set<Word>{"ab"}, std::set<Word>{"x"}, parse_trajectory_regex("s*t*s*"), 6),
            (std::set<Word>{"abx", "axb", "xab"}));
  EXPECT_THROW(shuffle_oracle(std::set<Word>{"a"}, std::set<Word>{"x"}, st, 13), PreconditionError);
}

TEST(Oracle, EmptyInputsGiveEmptyShuffles) {
  TrajectoryAutomaton none = minimal_dfa(empty_language_nfa({kS, kT}));
  EXPECT_TRUE(shuffle_oracle(std::set<Word>{"a", "ab"}, std::set<Word>{"x"}, none, 8).empty());
  EXPECT_TRUE(shuffle_oracle(std::set<Word>{"a"}, std::set<Word>{}, parse_trajectory_regex("(s|t)*"), 8).empty());
  Nfa empty2 = empty_language_nfa({'x'});
  EXPECT_TRUE(words_up_to(shuffle_regular(nfa_of("a*", "a"), empty2, parse_trajectory_regex("(s|t)*")), 8).empty());
}

TEST(Oracle, OverlapAndReservedLetters) {
  TrajectoryAutomaton t = parse_trajectory_regex("(s|t)*");
  try {
    shuffle_oracle(std::set<Word>{"ab"}, std::set<Word>{"bc"}, t, 6);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("not well behaved"), std::string::npos);
  }
  EXPECT_THROW(shuffle_regular(nfa_of("a*", "a"), nfa_of("a", "a"), t), PreconditionError);
  EXPECT_THROW(shuffle_oracle(std::set<Word>{"a"}, std::set<Word>{"#"}, t, 4), InputError);
}

TEST(Oracle, CommutesWithSwappedTrajectory) {
  std::set<Word> l1{"", "a", "ab", "aab"}, l2{"x", "xy", "yyx"};
  for (const char* re : {"(s|t)*", "s*t*", "(st)*", "s*t*s*t*", "(st(t)*)*"}) {
    TrajectoryAutomaton t = parse_trajectory_regex(re);
    EXPECT_EQ(shuffle_oracle(l1, l2, t, 8), shuffle_oracle(l2, l1, swapped(t), 8)) << re;
  }
}

TEST(Oracle, ControlOfEachShuffleLiesInTheTrajectory) {
  std::set<Word> l1{"a", "ab", "abab"}, l2{"", "x", "xx", "xxx"};
  for (const char* re : {"(s|t)*", "(st)*", "s*t*s*", "(sst|t)*"}) {
    TrajectoryAutomaton t = parse_trajectory_regex(re);
    for (const auto& w : shuffle_oracle(l1, l2, t, 8)) EXPECT_TRUE(t.accepts(control_of(w, {'a', 'b'}))) << re << " " << w;
  }
}

TEST(Constructions, RegularProductMatchesOracle) {
  struct Case {
    const char *l1, *l2, *t;
  };
  for (const Case& c : {Case{"a*b", "c(d)*", "(s|t)*"}, Case{"(ab)*", "c*", "(st)*"}, Case{"a*", "(cd)*", "s*t*s*t*"},
                        Case{"a|bb", "cc|d", "s*t*"}, Case{"(a|b)*", "c", "(st(t)*)*"}, Case{"ab*", "(c|d)*", "(sst|t)*"}}) {
    Nfa a1 = nfa_of(c.l1, "ab"), a2 = nfa_of(c.l2, "cd");
    TrajectoryAutomaton t = parse_trajectory_regex(c.t);
    EXPECT_EQ(words_up_to(shuffle_regular(a1, a2, t), 8), shuffle_oracle(Language{a1}, Language{a2}, t, 8))
        << c.l1 << " " << c.l2 << " " << c.t;
  }
}

TEST(Constructions, PdaRegularProductMatchesOracle) {
  Nfa x = nfa_of("x*", "x"), xy = nfa_of("(xy)*", "xy");
  for (const char* re : {"(s|t)*", "s*t*", "(st)*", "s*t*s*t*", "(st)*(s*|t*)", "t*s*"}) {
    TrajectoryAutomaton t = parse_trajectory_regex(re);
    for (const Pda& a : {dpda_anbn(), pda_an_bstar_an_bstar()})
      for (const Nfa& n : {x, xy}) {
        Pda p = shuffle_pda_regular(a, n, t);
        EXPECT_NO_THROW(p.validate());
        EXPECT_EQ(accepted_words(p, 8), shuffle_oracle(Language{a}, Language{n}, t, 8)) << re;
      }
  }
}

TEST(Constructions, SafeShuffleMatchesOracle) {
  Pda ab = dpda_anbn(), cd = dpda_anbn('c', 'd');
  for (const char* re : {"s*t*", "s*t*s*", "t*s*t*", "sts*t*", "(ss)*t*s*"}) {
    TrajectoryAutomaton t = parse_trajectory_regex(re);
    Pda p = safe_shuffle_pda(ab, cd, t);
    EXPECT_NO_THROW(p.validate());
    auto want = shuffle_oracle(Language{ab}, Language{cd}, t, 8);
    EXPECT_FALSE(want.empty());
    EXPECT_EQ(accepted_words(p, 8), want) << re;
  }
}

TEST(Constructions, SafeShuffleOfNondeterministicFactors) {
  Pda l1 = pda_an_bstar_an_bstar(), l2 = pda_dstar_cn_dstar_cn();
  TrajectoryAutomaton t = parse_trajectory_regex("s*t*s*");
  EXPECT_EQ(accepted_words(safe_shuffle_pda(l1, l2, t), 7), shuffle_oracle(Language{l1}, Language{l2}, t, 7));
}

TEST(Constructions, SafeShuffleRejectsHardTrajectories) {
  for (const char* re : {"s*t*s*t*", "(st)*", "(s|t)*"}) {
    try {
      safe_shuffle_pda(dpda_anbn(), dpda_anbn('c', 'd'), parse_trajectory_regex(re));
      FAIL() << re;
    } catch (const PreconditionError& e) {
      EXPECT_NE(std::string(e.what()).find("NotSafe"), std::string::npos);
    }
  }
  EXPECT_THROW(safe_shuffle_pda(dpda_anbn(), dpda_anbn(), parse_trajectory_regex("s*t*")), PreconditionError);
}

TEST(Resilience, AnbnCouplingSurvivesShufflingWithXStar) {
  Nfa x = nfa_of("x*", "x");
  TrajectoryAutomaton t = parse_trajectory_regex("(s|t)*");
  Pda product = shuffle_pda_regular(dpda_anbn(), x, t);
  for (std::size_t n = 1; n <= 4; ++n) {
    Word w = std::string(n, 'a') + std::string(n, 'b');
    auto rep = resilient_span_check(product, w, {0, n}, {n, n}, Language{x}, t);
    EXPECT_TRUE(rep.all_coupled()) << n;
    EXPECT_GT(rep.samples.size(), 1u);
    for (const auto& s : rep.samples) EXPECT_EQ(s.word, shuffle_words(w, s.partner, s.control));
  }
}

TEST(Resilience, EmptyPartnerIsTheIdentity) {
  Pda product = shuffle_pda_regular(dpda_anbn(), nfa_of("x*", "x"), parse_trajectory_regex("(s|t)*"));
  auto rep = resilient_span_check(product, "aabb", {0, 2}, {2, 2}, std::set<Word>{""}, std::set<Word>{"ssss"});
  ASSERT_EQ(rep.samples.size(), 1u);
  EXPECT_EQ(rep.samples[0].word, "aabb");
  EXPECT_EQ(rep.samples[0].x, (Span{0, 2}));
  EXPECT_EQ(rep.samples[0].y, (Span{2, 2}));
  EXPECT_EQ(rep.samples[0].verdict, a_coupled(dpda_anbn(), "aabb", {0, 2}, {2, 2}));
}

TEST(Resilience, BadSpansAndEmptySamples) {
  Pda product = shuffle_pda_regular(dpda_anbn(), nfa_of("x*", "x"), parse_trajectory_regex("(s|t)*"));
  EXPECT_THROW(resilient_span_check(product, "aabb", {0, 3}, {2, 2}, std::set<Word>{""}, std::set<Word>{"ssss"}),
               PreconditionError);
  EXPECT_THROW(resilient_span_check(product, "aabb", {0, 2}, {2, 2}, std::set<Word>{""}, std::set<Word>{"st"}),
               PreconditionError);
  EXPECT_EQ(image_span("tstts", {0, 2}), (Span{1, 4}));
}

TEST(Resilience, CrossingCouplingsInTheDiagonalShuffle) {
  TrajectoryAutomaton t = parse_trajectory_regex("(st)*");
  Pda p1 = shuffle_pda_regular(pda_an_bstar_an_bstar(), star_of("cd"), t);
  Pda p2 = shuffle_pda_regular(pda_dstar_cn_dstar_cn(), star_of("ab"), swapped(t));
  for (std::size_t k = 1; k <= 2; ++k) {
    Word w;
    for (const char* blk : {"ad", "bc", "ad", "bc"})
      for (std::size_t r = 0; r < k; ++r) w += blk;
    std::size_t b = 2 * k;  // letters per block
    Span x1{0, b - 1}, y1{2 * b, b - 1};
    Span x2{b + 1, b - 1}, y2{3 * b + 1, b - 1};
    EXPECT_EQ(a_coupled(p1, w, x1, y1), CouplingVerdict::Coupled) << w;
    EXPECT_EQ(a_coupled(p2, w, x2, y2), CouplingVerdict::Coupled) << w;
    EXPECT_LE(x1.end(), x2.start);
    EXPECT_LE(x2.end(), y1.start);
    EXPECT_LE(y1.end(), y2.start);
  }
}
