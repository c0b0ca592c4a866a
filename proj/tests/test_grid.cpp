#include <gtest/gtest.h>

#include <random>

#include "trajlab/trajlab.hpp"

using namespace trajlab;

namespace {

Formula strip() {
  return Formula::all({Formula::half_plane(1, -1, 2), Formula::half_plane(-1, 1, 2), Formula::congruence(1, 0, 1, 2)});
}

bool bounded_ok(const Formula& f, const Grid& g, int n = 40) {
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      if (!eval_formula(f, g.i + g.p * a, g.j + g.q * b)) return false;
  return true;
}

std::optional<Grid> probe(const Formula& f) {
  for (i64 p = 1; p <= 6; ++p)
    for (i64 q = 1; q <= 6; ++q)
      for (i64 i = 0; i <= 12; ++i)
        for (i64 j = 0; j <= 12; ++j) {
          Grid g{i, p, j, q};
          if (bounded_ok(f, g, 6) && verify_grid(f, g)) return g;
        }
  return std::nullopt;
}

Formula random_atom(std::mt19937& rng) {
  auto r = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
  if (rng() % 3 == 0) return Formula::congruence(r(-2, 2), r(-2, 2), r(-3, 3), r(1, 4));
  return Formula::half_plane(r(-3, 3), r(-3, 3), r(-6, 6));
}

Formula random_formula(std::mt19937& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return random_atom(rng);
  std::vector<Formula> args;
  int k = 2 + static_cast<int>(rng() % 2);
  for (int i = 0; i < k; ++i) args.push_back(random_formula(rng, depth - 1));
  switch (rng() % 3) {
    case 0:
      return Formula::all(args);
    case 1:
      return Formula::any(args);
    default:
      return Formula::negate(Formula::any(args));
  }
}

std::vector<Formula> fixtures() {
  std::vector<Formula> fs{strip(), complement(strip()), Formula::constant(true), Formula::constant(false)};
  for (const char* re : {"(st)*", "(s|t)*", "s*t*s*t*", "(st(t)*)*", "(st)*(s*|t*)", "(ss)*(ttt)*", "(sst|t)*"}) {
    Formula f = formula_of_regular(parse_trajectory_regex(re).to_nfa());
    fs.push_back(f);
    fs.push_back(complement(f));
  }
  std::mt19937 rng(2024);
  for (int k = 0; k < 25; ++k) fs.push_back(random_formula(rng, 2));
  return fs;
}

}  // namespace

TEST(Grid, SpecExamples) {
  EXPECT_EQ(decide_grid(Formula::constant(true)), (Grid{0, 1, 0, 1}));
  EXPECT_FALSE(decide_grid(Formula::constant(false)));
  EXPECT_FALSE(decide_grid(strip()));
  EXPECT_FALSE(decide_antigrid(Formula::constant(true)));
  auto anti = decide_antigrid(strip());
  ASSERT_TRUE(anti);
  EXPECT_TRUE(verify_grid(complement(strip()), *anti));
  EXPECT_EQ(*anti, (Grid{0, 2, 0, 2}));
}

TEST(Grid, VerifyExamples) {
  EXPECT_TRUE(verify_grid(Formula::constant(true), Grid{3, 5, 7, 2}));
  EXPECT_TRUE(verify_grid(complement(strip()), Grid{0, 2, 0, 2}));
  EXPECT_FALSE(verify_grid(strip(), Grid{1, 2, 1, 2}));
  EXPECT_FALSE(eval_formula(strip(), 1, 5));
  auto bad = grid_violation(strip(), Grid{1, 2, 1, 2});
  ASSERT_TRUE(bad);
  EXPECT_FALSE(eval_formula(strip(), 1 + 2 * bad->x, 1 + 2 * bad->y));
}

TEST(Grid, DiagonalAntigrid) {
  Formula diag = formula_of_regular(regex_to_nfa("(st)*"));
  EXPECT_TRUE(verify_grid(complement(diag), Grid{1, 3, 0, 3}));
  auto g = decide_antigrid(diag);
  ASSERT_TRUE(g);
  EXPECT_TRUE(verify_grid(complement(diag), *g));
  EXPECT_FALSE(decide_grid(diag));
}

TEST(Grid, VerifyAgreesWithBoundedEnumeration) {
  std::mt19937 rng(99);
  for (const auto& f : fixtures())
    for (int k = 0; k < 30; ++k) {
      Grid g{static_cast<i64>(rng() % 8), 1 + static_cast<i64>(rng() % 4), static_cast<i64>(rng() % 8),
             1 + static_cast<i64>(rng() % 4)};
      bool exact = verify_grid(f, g);
      if (exact) {
        EXPECT_TRUE(bounded_ok(f, g)) << to_string(f) << " " << to_string(g);
      }
      auto bad = grid_violation(f, g);
      EXPECT_EQ(exact, !bad.has_value());
      if (bad) {
        EXPECT_FALSE(eval_formula(f, g.point(bad->x, bad->y)));
      }
    }
}

TEST(Grid, WitnessesVerifyAndNoneMeansNoProbe) {
  for (const auto& f : fixtures()) {
    auto g = decide_grid(f);
    if (g) {
      EXPECT_TRUE(verify_grid(f, *g)) << to_string(f);
      EXPECT_TRUE(bounded_ok(f, *g)) << to_string(f);
    } else {
      auto p = probe(f);
      EXPECT_FALSE(p) << to_string(f) << " probe found " << to_string(*p);
    }
  }
}

TEST(Grid, ShiftInvariance) {
  std::mt19937 rng(17);
  for (const auto& f : fixtures()) {
    bool has = decide_grid(f).has_value();
    for (int k = 0; k < 20; ++k) {
      i64 a = rng() % 11, b = rng() % 11;
      auto g = decide_grid(shift(f, a, b));
      EXPECT_EQ(g.has_value(), has) << to_string(f) << " shifted by " << a << "," << b;
      if (g) {
        EXPECT_TRUE(verify_grid(shift(f, a, b), *g));
      }
    }
  }
}

TEST(Grid, DualityAndMonotonicity) {
  std::mt19937 rng(23);
  for (const auto& f : fixtures()) {
    EXPECT_EQ(decide_antigrid(f), decide_grid(complement(f)));
    if (decide_grid(f)) {
      EXPECT_TRUE(decide_grid(Formula::any({f, random_formula(rng, 1)})));
    }
  }
}

TEST(Grid, FarFieldHasCones) {
  for (const auto& f : fixtures()) {
    FarField ff = far_field(f);
    EXPECT_GE(ff.cones.size(), 1u);
    EXPECT_EQ(ff.cones.size(), ff.bands.size() + 1);
    EXPECT_EQ(ff.modulus % modulus_lcm(f), 0);
  }
}

TEST(Grid, RejectsBadGrids) {
  EXPECT_THROW((Grid{0, 0, 0, 1}.validate()), InputError);
  EXPECT_THROW((Grid{-1, 1, 0, 1}.validate()), InputError);
}
