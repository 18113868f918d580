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

#include "fsub/rules.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "fsub/checker.h"
#include "fsub/errors.h"
#include "fsub/syntax.h"
#include "fsub/testkit.h"

namespace fsk {
namespace {

Judgment J(const char* env, const char* s, const char* t) {
  return Judgment{parse_env(env), parse_type(s), parse_type(t)};
}

bool has_reason(const ValidationReport& r, const std::string& needle) {
  for (const ValidationFailure& f : r.failures) {
    if (f.reason.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(Rules, TagsAndArities) {
  for (Rule r : kAllRules) EXPECT_EQ(rule_from_tag(rule_tag(r)), r);
  EXPECT_EQ(rule_from_tag("SA-Bogus"), std::nullopt);
  EXPECT_EQ(rule_arity(Rule::kTop), 0u);
  EXPECT_EQ(rule_arity(Rule::kHyp), 0u);
  EXPECT_EQ(rule_arity(Rule::kTransTVar), 1u);
  EXPECT_EQ(rule_arity(Rule::kAll), 2u);
  EXPECT_EQ(rule_arity(Rule::kExtra), 2u);
  EXPECT_TRUE(system_admits(SystemId::kOriginal, Rule::kTransTVar));
  EXPECT_FALSE(system_admits(SystemId::kOriginal, Rule::kHyp));
  EXPECT_FALSE(system_admits(SystemId::kVariant, Rule::kTransTVar));
  EXPECT_FALSE(system_admits(SystemId::kVariant, Rule::kExtra));
  EXPECT_TRUE(system_admits(SystemId::kVariantPlus, Rule::kExtra));
}

TEST(Validate, Examples) {
  Derivation ok(Rule::kTop, J("", "Top", "Top"));
  EXPECT_TRUE(
      validate_derivation(ok, SystemId::kOriginal, ScopeMode::kStrict).ok);

  Derivation ill(Rule::kTop, J("", "X", "Top"));
  ValidationReport r =
      validate_derivation(ill, SystemId::kOriginal, ScopeMode::kStrict);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(has_reason(r, "left not well-scoped"));
  EXPECT_TRUE(
      validate_derivation(ill, SystemId::kOriginal, ScopeMode::kLax).ok);

  Derivation hyp(Rule::kHyp, J("A <: Top", "A", "Top"));
  r = validate_derivation(hyp, SystemId::kOriginal, ScopeMode::kStrict);
  EXPECT_TRUE(has_reason(r, "rule not in system"));
  EXPECT_TRUE(
      validate_derivation(hyp, SystemId::kVariant, ScopeMode::kStrict).ok);
}

TEST(Validate, ReportsEveryFailureWithItsPath) {
  // Both premises of the arrow node are wrong.
  Derivation bad(Rule::kArrow, J("A <: Top", "Top -> A", "A -> Top"),
                 {Derivation(Rule::kReflTVar, J("A <: Top", "A", "Top")),
                  Derivation(Rule::kTop, J("A <: Top", "A", "A"))});
  ValidationReport r =
      validate_derivation(bad, SystemId::kOriginal, ScopeMode::kStrict);
  EXPECT_FALSE(r.ok);
  std::vector<std::string> rendered;
  for (const ValidationFailure& f : r.failures) {
    rendered.push_back(render_failure(f));
  }
  bool root = false, first = false, second = false;
  for (const ValidationFailure& f : r.failures) {
    root |= f.path.empty();
    first |= f.path == std::vector<std::size_t>{0};
    second |= f.path == std::vector<std::size_t>{1};
  }
  EXPECT_TRUE(root && first && second);
  EXPECT_EQ(render_failure({{0, 1}, "SA-Top: x"}), "at [0 1] SA-Top: x");
}

TEST(Validate, PremiseCountMismatch) {
  Derivation d(Rule::kTransTVar, J("A <: Top", "A", "Top"));
  ValidationReport r =
      validate_derivation(d, SystemId::kOriginal, ScopeMode::kStrict);
  EXPECT_TRUE(has_reason(r, "expected 1 premises, found 0"));
}

TEST(Validate, AllRuleChecksBinderFreshnessAndOpening) {
  // |- All X <: Top . X <: All Y <: Top . Y, opened at Z.
  Judgment root = J("", "All X <: Top . X", "All Y <: Top . Y");
  Derivation bound(Rule::kTop, J("", "Top", "Top"));
  Derivation good(
      Rule::kAll, root,
      {bound, Derivation(Rule::kReflTVar, J("Z <: Top", "Z", "Z"))});
  EXPECT_TRUE(
      validate_derivation(good, SystemId::kOriginal, ScopeMode::kStrict).ok);

  // Opened at a name different from the premise's new entry.
  Derivation wrong_body(
      Rule::kAll, root,
      {bound, Derivation(Rule::kTop, J("Z <: Top", "Z", "Top"))});
  EXPECT_FALSE(
      validate_derivation(wrong_body, SystemId::kOriginal, ScopeMode::kStrict)
          .ok);

  // Binder that clashes with a free variable of an endpoint.
  Judgment clash = J("A <: Top", "All X <: Top . B", "All Y <: Top . B");
  Derivation reuse(
      Rule::kAll, clash,
      {Derivation(Rule::kTop, J("A <: Top", "Top", "Top")),
       Derivation(Rule::kReflTVar, J("A <: Top, B <: Top", "B", "B"))});
  ValidationReport r =
      validate_derivation(reuse, SystemId::kOriginal, ScopeMode::kLax);
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_TRUE(r.failures[0].path.empty());
}

TEST(Validate, ExtraRuleShape) {
  // X <: Top |- X <: Top from X <: Top |- X <: Top and X <: Top |- X <: Top.
  Derivation base(Rule::kTop, J("X <: Top", "X", "Top"));
  Derivation extra(Rule::kExtra, J("X <: Top", "X", "Top"), {base, base});
  EXPECT_TRUE(
      validate_derivation(extra, SystemId::kVariantPlus, ScopeMode::kStrict)
          .ok);
  EXPECT_FALSE(
      validate_derivation(extra, SystemId::kVariant, ScopeMode::kStrict).ok);
}

TEST(Serialize, Examples) {
  EXPECT_EQ(serialize_derivation(Derivation(Rule::kTop, J("", "Top", "Top"))),
            "(SA-Top (judgment () Top Top))");
  EXPECT_EQ(serialize_derivation(
                Derivation(Rule::kReflTVar, J("X <: Top", "X", "X"))),
            "(SA-Refl-TVar (judgment ((X Top)) (var X) (var X)))");
  EXPECT_EQ(serialize_type(parse_type("All X <: A . X -> Top")),
            "(all X (var A) (arrow (var X) Top))");
}

TEST(Parse, Examples) {
  EXPECT_EQ(parse_derivation("(SA-Top (judgment () Top Top))"),
            Derivation(Rule::kTop, J("", "Top", "Top")));
  EXPECT_THROW(parse_derivation("(SA-Arrow (judgment () Top Top))"),
               ArityError);
  EXPECT_THROW(parse_derivation("(SA-Nope (judgment () Top Top))"), ParseError);
  EXPECT_THROW(parse_derivation("(SA-Top (judgment () Top Top)"), ParseError);
  EXPECT_THROW(
      parse_derivation("(SA-Top (judgment ((A Top) (A Top)) Top Top))"),
      DuplicateNameError);
}

TEST(Serialize, RoundTripIsIdentityOnRandomDerivations) {
  GenConfig cfg;
  std::size_t seen = 0;
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Rng rng(mix_seed(21, i));
    cfg.mode = i % 3 == 0 ? ScopeMode::kLax : ScopeMode::kStrict;
    Instance inst = gen_instance(rng, cfg);
    SystemId system = i % 2 ? SystemId::kVariant : SystemId::kOriginal;
    auto d =
        gen_derivation(rng, system, cfg.mode, inst.env, inst.left, inst.right);
    if (!d) continue;
    ++seen;
    std::string text = serialize_derivation(*d);
    Derivation back = parse_derivation(text);
    EXPECT_EQ(back, *d);
    EXPECT_EQ(serialize_derivation(back), text);
    // Trailing newline as written by the file format.
    EXPECT_EQ(parse_derivation(text + "\n"), *d);
  }
  EXPECT_GT(seen, 1000u);
}

TEST(Derivation, Metrics) {
  Derivation leaf(Rule::kReflTVar, J("A <: Top, B <: A", "A", "A"));
  Derivation d(Rule::kTransTVar, J("A <: Top, B <: A", "B", "A"), {leaf});
  EXPECT_EQ(d.height(), 2u);
  EXPECT_EQ(d.node_count(), 2u);
  EXPECT_TRUE(uses_rule(d, Rule::kReflTVar));
  EXPECT_FALSE(uses_rule(d, Rule::kTop));
  EXPECT_EQ(rule_shape(d), (std::vector{Rule::kTransTVar, Rule::kReflTVar}));
  EXPECT_EQ(derivation_names(d), (NameSet{TyVarName("A"), TyVarName("B")}));
}

TEST(JudgmentAlphaEq, ComparesUpToBinders) {
  EXPECT_TRUE(judgment_alpha_eq(J("A <: All X <: Top . X", "A", "Top"),
                                J("A <: All Y <: Top . Y", "A", "Top")));
  EXPECT_FALSE(
      judgment_alpha_eq(J("A <: Top", "A", "Top"), J("B <: Top", "B", "Top")));
}

}  // namespace
}  // namespace fsk
