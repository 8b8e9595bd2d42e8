#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace gpk {
namespace {

using test::R;
using test::S;

Rational at(const Capacity& l, Subset e, ConditioningRule rule, Subset a) {
  return condition_lower(l, e, rule).capacity[a];
}

TEST(Conditioning, SplitBeliefOnAB) {
  const Frame& f = test::abc();
  const Capacity l = test::split_belief();
  const Subset e = S(f, "{a,b}"), a = S(f, "{a}");
  EXPECT_EQ(at(l, e, ConditioningRule::bayes, a), R("1/2"));
  EXPECT_EQ(at(l, e, ConditioningRule::geometric, a), 1);
  EXPECT_EQ(at(l, e, ConditioningRule::dempster, a), R("1/2"));
  EXPECT_EQ(conditional_envelope(l, a, e), R("1/2"));
}

TEST(Conditioning, BayesGivesOneOnTheEvent) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Frame f = Frame::of_size(3);
    const Capacity l = lab::gen_capacity(f, lab::CapacityKind::two_monotone, seed);
    for (Subset e = 1; e <= f.full(); ++e)
      if (l[f.complement(e)] < 1) {
        EXPECT_EQ(at(l, e, ConditioningRule::bayes, e), 1);
      }
  }
}

TEST(Conditioning, InnerTermOfVacuousIsZero) {
  EXPECT_EQ(at(Capacity::vacuous(test::ab()), 1, ConditioningRule::it, 1), 0);
}

TEST(Conditioning, PreconditionsPerRule) {
  const Capacity l = Capacity::additive(test::ab(), {1, 0});
  EXPECT_THROW(condition_lower(l, 2, ConditioningRule::bayes), UndefinedOperation);
  EXPECT_THROW(condition_lower(l, 2, ConditioningRule::dempster), UndefinedOperation);
  EXPECT_THROW(condition_lower(l, 2, ConditioningRule::it), UndefinedOperation);
  EXPECT_THROW(condition_lower(Capacity::vacuous(test::ab()), 1, ConditioningRule::geometric),
               UndefinedOperation);
  EXPECT_THROW(condition_lower(test::monotone_not_supermodular(), 3, ConditioningRule::bayes),
               std::invalid_argument);
}

TEST(Conditioning, ResultsAreNormalized) {
  const Capacity l = test::split_belief();
  for (auto rule : {ConditioningRule::bayes, ConditioningRule::geometric, ConditioningRule::dempster,
                    ConditioningRule::it}) {
    const Capacity c = condition_lower(l, S(test::abc(), "{a,b}"), rule).capacity;
    EXPECT_EQ(c[0], 0);
    EXPECT_EQ(c[7], 1);
  }
}

TEST(Conditioning, BayesMatchesTheLpEnvelope) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Frame f = Frame::of_size(2 + seed % 3);
    const Capacity l = lab::gen_capacity(f, lab::CapacityKind::two_monotone, seed);
    for (Subset e = 1; e <= f.full(); ++e) {
      if (l[f.complement(e)] >= 1) continue;
      const ConditionedCapacity c = condition_lower(l, e, ConditioningRule::bayes);
      for (Subset a = 0; a <= f.full(); ++a) ASSERT_EQ(c.capacity[a], conditional_envelope(l, a, e));
    }
  }
}

TEST(Conditioning, ZeroDenominatorFallsBackToTheEnvelope) {
  // l({a}) = 1/2 on {a,b}: conditioning on {b}, both A = {b} and A = {a,b} give 0/0.
  const Capacity l = test::half_a_belief();
  const ConditionedCapacity c = condition_lower(l, 2, ConditioningRule::bayes);
  EXPECT_EQ(c.envelope_cells, (std::vector<Subset>{2, 3}));
  EXPECT_EQ(c.capacity[0], 0);
  EXPECT_EQ(c.capacity[1], 0);
  EXPECT_EQ(c.capacity[2], 1);
  EXPECT_EQ(c.capacity[3], 1);
}

TEST(Conditioning, BayesIsTheMostConservative) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Frame f = Frame::of_size(2 + seed % 3);
    const Capacity l = lab::gen_capacity(f, lab::CapacityKind::two_monotone, seed);
    for (Subset e = 1; e <= f.full(); ++e) {
      if (l[f.complement(e)] >= 1 || l[e] <= 0) continue;
      const Capacity b = condition_lower(l, e, ConditioningRule::bayes).capacity;
      const Capacity g = condition_lower(l, e, ConditioningRule::geometric).capacity;
      const Capacity d = condition_lower(l, e, ConditioningRule::dempster).capacity;
      const bool complementary = l[e] + l[f.complement(e)] == 1;
      for (Subset a = 0; a <= f.full(); ++a) {
        EXPECT_LE(b[a], g[a]);
        EXPECT_LE(b[a], d[a]);
        if (complementary) {
          EXPECT_EQ(b[a], g[a]);
          EXPECT_EQ(b[a], d[a]);
        }
      }
    }
  }
}

TEST(Conditioning, BayesPreservesKMonotonicity) {
  for (std::size_t n = 2; n <= 4; ++n)
    for (std::size_t k = 2; k <= n; ++k)
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Frame f = Frame::of_size(n);
        const Capacity l = lab::gen_k_monotone(f, k, seed);
        for (Subset e = 1; e <= f.full(); ++e) {
          if (l[f.complement(e)] >= 1) continue;
          const Capacity c = condition_lower(l, e, ConditioningRule::bayes).capacity;
          for (std::size_t j = 2; j <= k; ++j) ASSERT_TRUE(is_k_monotone(c, j));
        }
      }
}

TEST(Combination, AdditivePriorReducesToKinematicsForEachRule) {
  const Capacity b1 = Capacity::additive(test::ab(), {R("1/2"), R("1/2")});
  const Capacity b2 = test::half_a_belief();
  for (auto rule : {CombinationRule::bar, CombinationRule::dbar, CombinationRule::tbar})
    for (auto level : {CombinationLevel::mass, CombinationLevel::belief}) {
      const Combination c = combine_belief(b1, b2, rule, level);
      EXPECT_EQ(c.belief[1], R("3/4")) << to_string(rule);
      EXPECT_TRUE(is_additive(c.belief));
    }
}

TEST(Combination, VacuousEvidenceLeavesThePrior) {
  const Capacity b1 = test::split_belief();
  const Capacity b2 = Capacity::vacuous(test::abc());
  for (auto level : {CombinationLevel::mass, CombinationLevel::belief}) {
    EXPECT_EQ(combine_belief(b1, b2, CombinationRule::bar, level).belief, b1);
    EXPECT_EQ(combine_belief(b1, b2, CombinationRule::tbar, level).belief, b1);
  }
}

TEST(Combination, VacuousPriorExposesTheInnerTermAnomaly) {
  const Capacity b1 = Capacity::vacuous(test::ab());
  const Capacity b2 = test::capacity(test::ab(), {{"{a}", "1"}});
  const Capacity bar = combine_belief(b1, b2, CombinationRule::bar, CombinationLevel::belief).belief;
  EXPECT_EQ(bar[1], 1);
  EXPECT_EQ(bar[2], 0);
  const Capacity tbar = combine_belief(b1, b2, CombinationRule::tbar, CombinationLevel::belief).belief;
  EXPECT_EQ(tbar[1], 0);
  EXPECT_EQ(at(b1, 1, ConditioningRule::it, 1), 0);
}

TEST(Combination, LevelsAgreeAndOutputsAreBeliefs) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Frame f = Frame::of_size(2 + seed % 3);
    const Capacity b1 = lab::gen_belief(f, seed);
    const Capacity b2 = lab::gen_belief(f, seed + 500);
    for (auto rule : {CombinationRule::bar, CombinationRule::dbar, CombinationRule::tbar, CombinationRule::dempster}) {
      std::optional<Combination> mass_level, belief_level;
      try {
        mass_level = combine_belief(b1, b2, rule, CombinationLevel::mass);
      } catch (const UndefinedOperation&) {
        EXPECT_THROW(combine_belief(b1, b2, rule, CombinationLevel::belief), UndefinedOperation);
        continue;
      }
      belief_level = combine_belief(b1, b2, rule, CombinationLevel::belief);
      ASSERT_EQ(mass_level->belief, belief_level->belief) << to_string(rule) << " seed " << seed;
      // The belief level is the subset sum of the mass level.
      std::vector<Rational> dense(f.subset_count());
      for (const auto& [s, v] : mass_level->mass.masses()) dense[s] = v;
      EXPECT_EQ(oracle::zeta(dense), belief_level->belief.base().values());
      if (rule != CombinationRule::dempster) {
        EXPECT_TRUE(is_belief(belief_level->belief));
      }
      if (rule == CombinationRule::bar || rule == CombinationRule::dbar) {
        for (Subset a = 0; a <= f.full(); ++a) EXPECT_GE(belief_level->belief[a], b2[a]);
      }
    }
  }
}

TEST(Combination, DempsterRuleOnAClassicExample) {
  const Capacity b1 = Capacity::from_masses(test::masses(test::abc(), {{"{a}", "1/2"}, {"{b,c}", "1/2"}}));
  const Capacity b2 = Capacity::from_masses(test::masses(test::abc(), {{"{a,b}", "1/2"}, {"{c}", "1/2"}}));
  const Combination c = combine_belief(b1, b2, CombinationRule::dempster, CombinationLevel::mass);
  // Products: {a} 1/4, {} 1/4 (conflict), {b} 1/4, {c} 1/4; renormalized by 3/4.
  EXPECT_EQ(c.mass.mass(S(test::abc(), "{a}")), R("1/3"));
  EXPECT_EQ(c.mass.mass(S(test::abc(), "{b}")), R("1/3"));
  EXPECT_EQ(c.mass.mass(S(test::abc(), "{c}")), R("1/3"));
}

TEST(Combination, Preconditions) {
  const Capacity additive = Capacity::additive(test::ab(), {1, 0});
  const Capacity on_b = test::capacity(test::ab(), {{"{b}", "1"}});
  EXPECT_THROW(combine_belief(additive, on_b, CombinationRule::bar, CombinationLevel::mass), UndefinedOperation);
  EXPECT_THROW(combine_belief(additive, on_b, CombinationRule::dbar, CombinationLevel::belief), UndefinedOperation);
  EXPECT_THROW(combine_belief(additive, on_b, CombinationRule::dempster, CombinationLevel::mass), UndefinedOperation);
  EXPECT_THROW(combine_belief(test::pairs_capacity(), test::split_belief(), CombinationRule::bar,
                              CombinationLevel::mass),
               std::invalid_argument);
  try {
    combine_belief(additive, on_b, CombinationRule::tbar, CombinationLevel::mass);
    FAIL();
  } catch (const UndefinedOperation& e) {
    EXPECT_NE(std::string(e.what()).find("focal set {b}"), std::string::npos);
  }
}

}  // namespace
}  // namespace gpk
