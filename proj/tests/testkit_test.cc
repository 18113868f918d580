/*
 * Copyright 2026 The fsub Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fsub/testkit.h"

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "fsub/checker.h"
#include "fsub/errors.h"
#include "fsub/rules.h"
#include "fsub/syntax.h"

namespace fsk {
namespace {

constexpr ScopeMode kStrict = ScopeMode::kStrict;
constexpr ScopeMode kLax = ScopeMode::kLax;

std::vector<TyVarName> names_of(const TypeEnv& env) {
  std::vector<TyVarName> out;
  for (const Binding& b : env.entries()) out.push_back(b.name);
  return out;
}

TEST(MixSeed, MatchesSplitMix64ReferenceOutput) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(mix_seed(0, 0), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(mix_seed(5, 3), mix_seed(6, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Rng, WrapsMersenneTwister64) {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the
  // standard.
  Rng rng(5489);
  std::uint64_t last = 0;
  for (int i = 0; i < 10000; ++i) last = rng.next();
  EXPECT_EQ(last, 9981545732273789042ULL);
}

TEST(GenEnv, Examples) {
  GenConfig cfg;
  cfg.max_env_len = 0;
  EXPECT_TRUE(gen_env(cfg).empty());
  cfg.max_env_len = 4;
  bool saw_long = false;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    cfg.seed = seed;
    TypeEnv env = gen_env(cfg);
    EXPECT_LE(env.size(), 4u);
    EXPECT_TRUE(env_well_formed(env, kStrict)) << render_env(env);
    EXPECT_EQ(gen_env(cfg), env);
    saw_long |= env.size() == 4;
  }
  EXPECT_TRUE(saw_long);
  EXPECT_EQ(gen_env(GenConfig{}).entries().empty() ||
                gen_env(GenConfig{}).entries()[0].name == TyVarName("X"),
            true);
}

TEST(GenEnv, LaxBoundsMayMentionLaterNames) {
  GenConfig cfg;
  cfg.mode = kLax;
  cfg.max_env_len = 3;
  std::size_t ill_ordered = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    cfg.seed = seed;
    TypeEnv env = gen_env(cfg);
    for (const TyVarName& v : env.bound_free_vars()) {
      EXPECT_TRUE(env.contains(v));
    }
    if (!env_well_formed(env, kStrict)) ++ill_ordered;
  }
  EXPECT_GT(ill_ordered, 0u);
}

TEST(GenType, Examples) {
  GenConfig cfg;
  cfg.max_type_size = 1;
  EXPECT_EQ(gen_type(cfg, TypeEnv()), Type::top());
  cfg.max_type_size = 7;
  TypeEnv env = parse_env("A <: Top");
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    cfg.seed = seed;
    Type t = gen_type(cfg, env);
    EXPECT_LE(t.size(), 7u);
    for (const TyVarName& v : free_vars(t)) EXPECT_EQ(v, TyVarName("A"));
    EXPECT_EQ(gen_type(cfg, env), t);
  }
}

TEST(GenType, RootShapeFrequencies) {
  // With a budget of at least 3 the root is a leaf 40%, an arrow 30% and a
  // quantifier 30% of the time.
  std::size_t leaf = 0, arrow = 0, forall = 0;
  const std::size_t n = 20000;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(51, i));
    Type t = gen_type(rng, parse_env("A <: Top"), 9);
    if (t.is_arrow()) {
      ++arrow;
    } else if (t.is_forall()) {
      ++forall;
    } else {
      ++leaf;
    }
  }
  EXPECT_NEAR(static_cast<double>(leaf) / n, 0.40, 0.02);
  EXPECT_NEAR(static_cast<double>(arrow) / n, 0.30, 0.02);
  EXPECT_NEAR(static_cast<double>(forall) / n, 0.30, 0.02);
}

TEST(GenRelated, SupertypesAndSubtypesAreDerivable) {
  GenConfig cfg;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    Rng rng(mix_seed(52, i));
    TypeEnv env = gen_env(rng, cfg);
    Type q = gen_type(rng, env, cfg.max_type_size);
    Type up = gen_supertype(rng, env, q);
    Type down = gen_subtype(rng, env, q);
    EXPECT_TRUE(well_scoped_type(up, env));
    EXPECT_TRUE(well_scoped_type(down, env));
    EXPECT_TRUE(check(SystemId::kOriginal, kStrict, env, q, up).is_derivable())
        << render_env(env) << " |- " << render_type(q)
        << " <: " << render_type(up);
    EXPECT_TRUE(
        check(SystemId::kOriginal, kStrict, env, down, q).is_derivable())
        << render_env(env) << " |- " << render_type(down)
        << " <: " << render_type(q);
  }
}

TEST(GenDerivation, ProducesValidVariedDerivations) {
  GenConfig cfg;
  std::set<std::vector<Rule>> shapes;
  std::size_t found = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng(mix_seed(53, i));
    Instance inst = gen_instance(rng, cfg);
    for (SystemId system : {SystemId::kOriginal, SystemId::kVariant}) {
      auto d =
          gen_derivation(rng, system, kStrict, inst.env, inst.left, inst.right);
      if (!d) continue;
      ++found;
      EXPECT_TRUE(validate_derivation(*d, system, kStrict).ok);
      EXPECT_TRUE(judgment_alpha_eq(d->conclusion(),
                                    {inst.env, inst.left, inst.right}));
      shapes.insert(rule_shape(*d));
    }
  }
  EXPECT_GT(found, 800u);
  EXPECT_GT(shapes.size(), 100u);
}

TEST(GenInstance, MixesDerivableAndUnderivable) {
  GenConfig cfg;
  std::size_t derivable = 0;
  const std::size_t n = 3000;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng(mix_seed(54, i));
    Instance inst = gen_instance(rng, cfg);
    if (check(SystemId::kOriginal, kStrict, inst.env, inst.left, inst.right)
            .is_derivable()) {
      ++derivable;
    }
  }
  EXPECT_GT(derivable, n / 2);
  EXPECT_LT(derivable, n * 9 / 10);
}

TEST(Enumerate, TypeUniverseCounts) {
  // Hand counts: Top; Top -> Top; All X <: Top . Top; All X <: Top . X.
  EXPECT_EQ(enumerate_types({}, 1).size(), 1u);
  EXPECT_EQ(enumerate_types({}, 3).size(), 4u);
  EXPECT_EQ(enumerate_types({TyVarName("A")}, 3).size(), 12u);
  std::vector<Type> types = enumerate_types({TyVarName("A")}, 5);
  std::set<std::string> distinct;
  TypeEnv env = parse_env("A <: Top");
  for (const Type& t : types) {
    EXPECT_LE(t.size(), 5u);
    EXPECT_TRUE(well_scoped_type(t, env));
    distinct.insert(serialize_type(t));
  }
  EXPECT_EQ(distinct.size(), types.size());
}

TEST(Enumerate, EnvironmentCounts) {
  std::vector<TypeEnv> envs = enumerate_envs(2, 3);
  // 1 empty, 4 single-entry, 4 * 12 two-entry.
  EXPECT_EQ(envs.size(), 53u);
  for (const TypeEnv& env : envs) EXPECT_TRUE(env_well_formed(env, kStrict));
}

TEST(Oracle, Examples) {
  auto top = enumerate_oracle(SystemId::kOriginal, kStrict, TypeEnv(),
                              Type::top(), Type::top(), 3);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].rule(), Rule::kTop);

  TypeEnv env = parse_env("X <: Top");
  auto two = enumerate_oracle(SystemId::kOriginal, kStrict, env, Type::var("X"),
                              Type::top(), 3);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(rule_shape(two[0]), std::vector{Rule::kTop});
  EXPECT_EQ(rule_shape(two[1]), (std::vector{Rule::kTransTVar, Rule::kTop}));

  EXPECT_TRUE(enumerate_oracle(SystemId::kOriginal, kStrict, TypeEnv(),
                               Type::top(), Type::var("X"), 5)
                  .empty());
  EXPECT_THROW(enumerate_oracle(SystemId::kOriginal, kStrict, TypeEnv(),
                                Type::top(), Type::top(), 13),
               DepthGuard);
  EXPECT_TRUE(enumerate_oracle(SystemId::kOriginal, kStrict, TypeEnv(),
                               Type::top(), Type::top(), 0)
                  .empty());
}

TEST(Oracle, DepthBoundsHeight) {
  TypeEnv env = parse_env("A <: Top, B <: A");
  auto d1 = enumerate_oracle(SystemId::kOriginal, kStrict, env, Type::var("B"),
                             Type::top(), 1);
  auto d3 = enumerate_oracle(SystemId::kOriginal, kStrict, env, Type::var("B"),
                             Type::top(), 3);
  // SA-Top; via A then Top; via A, then via Top.
  EXPECT_EQ(d1.size(), 1u);
  EXPECT_EQ(d3.size(), 3u);
  for (const Derivation& d : d3) EXPECT_LE(d.height(), 3u);
}

TEST(Oracle, EmittedDerivationsValidateAndMatchExistence) {
  for (SystemId system : {SystemId::kOriginal, SystemId::kVariant}) {
    for (const TypeEnv& env : enumerate_envs(2, 1)) {
      std::vector<Type> types = enumerate_types(names_of(env), 3);
      for (const Type& s : types) {
        for (const Type& t : types) {
          auto all = enumerate_oracle(system, kStrict, env, s, t, 3);
          for (const Derivation& d : all) {
            EXPECT_TRUE(validate_derivation(d, system, kStrict).ok);
            EXPECT_TRUE(judgment_alpha_eq(d.conclusion(), {env, s, t}));
            EXPECT_LE(d.height(), 3u);
          }
          EXPECT_EQ(!all.empty(),
                    oracle_derivable(system, kStrict, env, s, t, 3));
        }
      }
    }
  }
}

TEST(Oracle, VariantIntermediateRangesBeyondDeclaredBound) {
  // X <: A -> A |- X <: B -> A needs an intermediate other than the bound:
  // SA-Tr-TVar via A -> A, then SA-Arrow with B <: A.
  TypeEnv env = parse_env("A <: Top, B <: A, X <: A -> A");
  auto all = enumerate_oracle(SystemId::kVariant, kStrict, env, Type::var("X"),
                              parse_type("B -> A"), 3);
  ASSERT_FALSE(all.empty());
  EXPECT_EQ(all[0].rule(), Rule::kTrTVar);
}

// Synthetic recheck: instances "disagree" while the left endpoint mentions A
// and the environment binds A.
std::optional<std::pair<CheckOutcome, CheckOutcome>> mentions_a(
    const TypeEnv& env, const Type& s, const Type&) {
  if (!env.contains(TyVarName("A")) || !free_vars(s).contains(TyVarName("A"))) {
    return std::nullopt;
  }
  return std::make_pair(
      CheckOutcome::derivable(Derivation(Rule::kTop, {env, s, Type::top()})),
      CheckOutcome::not_derivable());
}

TEST(Shrink, ReachesALocalMinimum) {
  TypeEnv env = parse_env("A <: Top -> Top, B <: A, C <: B -> A");
  Type s = parse_type("(A -> B) -> (All X <: C . X)");
  Type t = parse_type("B -> Top");
  Counterexample c{env, s, t, *mentions_a(env, s, t), false, std::nullopt};
  Counterexample small = shrink_instance(c, mentions_a);
  EXPECT_TRUE(small.shrunk);
  EXPECT_EQ(small.env, parse_env("A <: Top"));
  // Replacing by Top never hoists a subterm, so the arrows stay.
  EXPECT_EQ(render_type(small.left), "(A -> Top) -> Top");
  EXPECT_EQ(render_type(small.right), "Top");
  EXPECT_TRUE(small.outcomes.first.is_derivable());
  EXPECT_TRUE(small.outcomes.second.is_not_derivable());

  Counterexample again = shrink_instance(small, mentions_a);
  EXPECT_TRUE(again.shrunk);
  EXPECT_EQ(again.env, small.env);
  EXPECT_EQ(again.left, small.left);
  EXPECT_EQ(again.right, small.right);
}

TEST(Shrink, NeverGrowsAndKeepsDisagreeing) {
  // Disagreement between the checker and a search that stops at height 2.
  Recheck recheck = [](const TypeEnv& env, const Type& s, const Type& t)
      -> std::optional<std::pair<CheckOutcome, CheckOutcome>> {
    CheckOutcome full = check(SystemId::kOriginal, kStrict, env, s, t);
    CheckOutcome shallow = CheckOutcome::not_derivable();
    if (full.is_derivable() && full.derivation().height() > 2) {
      return std::make_pair(full, shallow);
    }
    return std::nullopt;
  };
  GenConfig cfg;
  std::size_t shrunk = 0;
  for (std::uint64_t i = 0; i < 400 && shrunk < 50; ++i) {
    Rng rng(mix_seed(55, i));
    Instance inst = gen_instance(rng, cfg);
    auto outcomes = recheck(inst.env, inst.left, inst.right);
    if (!outcomes) continue;
    Counterexample c{inst.env,  inst.left, inst.right,
                     *outcomes, false,     std::nullopt};
    Counterexample small = shrink_instance(c, recheck);
    ++shrunk;
    EXPECT_LE(small.env.size(), c.env.size());
    EXPECT_LE(small.left.size(), c.left.size());
    EXPECT_LE(small.right.size(), c.right.size());
    EXPECT_TRUE(recheck(small.env, small.left, small.right).has_value());
    EXPECT_TRUE(env_well_formed(small.env, kStrict));
  }
  EXPECT_GT(shrunk, 10u);
}

TEST(DifferentialRun, TrivialCases) {
  GenConfig cfg;
  DiffReport empty = differential_run(
      cfg, {SystemId::kOriginal, SystemId::kVariant}, kDefaultFuel, 0);
  EXPECT_EQ(empty.trials, 0u);
  EXPECT_EQ(render_report_sexp(empty),
            "(diff-report (trials 0) (agree 0) (fuel-exhausted 0) "
            "(disagreements))\n");
  DiffReport self = differential_run(
      cfg, {SystemId::kOriginal, SystemId::kOriginal}, kDefaultFuel, 500);
  EXPECT_TRUE(self.disagree.empty());
  EXPECT_EQ(self.trials, self.agree + self.fuel_exhausted);
}

TEST(DifferentialRun, IsReproducibleAndTallied) {
  for (ScopeMode mode : {kStrict, kLax}) {
    GenConfig cfg;
    cfg.seed = 99;
    cfg.mode = mode;
    auto run = [&] {
      return differential_run(cfg, {SystemId::kOriginal, SystemId::kVariant},
                              kDefaultFuel, 1000);
    };
    DiffReport a = run();
    DiffReport b = run();
    EXPECT_EQ(render_report_sexp(a), render_report_sexp(b));
    EXPECT_EQ(render_report_text(a), render_report_text(b));
    EXPECT_EQ(a.trials, a.agree + a.disagree.size() + a.fuel_exhausted);
    for (const Counterexample& c : a.disagree) EXPECT_TRUE(c.shrunk);
  }
}

TEST(PermutationRun, Contract) {
  GenConfig strict;
  EXPECT_THROW(permutation_run(strict, 10, kDefaultFuel), ModeError);
  GenConfig cfg;
  cfg.mode = kLax;
  cfg.max_env_len = 0;
  DiffReport empty = permutation_run(cfg, 200, kDefaultFuel);
  EXPECT_EQ(empty.agree + empty.fuel_exhausted, 200u);
  EXPECT_TRUE(empty.disagree.empty());
  cfg.max_env_len = 4;
  DiffReport r = permutation_run(cfg, 1000, kDefaultFuel);
  EXPECT_TRUE(r.disagree.empty()) << render_report_text(r);
  EXPECT_EQ(r.trials, r.agree + r.disagree.size() + r.fuel_exhausted);
}

TEST(Report, RendersCounterexamples) {
  DiffReport r;
  r.trials = 3;
  r.agree = 1;
  r.fuel_exhausted = 1;
  TypeEnv env = parse_env("A <: Top");
  r.disagree.push_back(
      Counterexample{env,
                     Type::var("A"),
                     Type::top(),
                     {CheckOutcome::derivable(Derivation(
                          Rule::kTop, {env, Type::var("A"), Type::top()})),
                      CheckOutcome::not_derivable()},
                     true,
                     parse_env("A <: Top")});
  EXPECT_EQ(render_report_sexp(r),
            "(diff-report (trials 3) (agree 1) (fuel-exhausted 1) "
            "(disagreements (counterexample (judgment ((A Top)) (var A) Top) "
            "(outcomes derivable not-derivable) (shrunk true) "
            "(permuted ((A Top))))))\n");
  EXPECT_NE(render_report_text(r).find("disagreements: 1"), std::string::npos);
}

}  // namespace
}  // namespace fsk
