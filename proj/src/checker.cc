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

#include "fsub/checker.h"

#include "fsub/errors.h"

namespace fsk {

std::string_view outcome_name(CheckOutcome::Status status) {
  switch (status) {
    case CheckOutcome::Status::kDerivable:
      return "derivable";
    case CheckOutcome::Status::kNotDerivable:
      return "not-derivable";
    case CheckOutcome::Status::kFuelExhausted:
      return "fuel-exhausted";
  }
  return "?";
}

namespace {

enum class Verdict { kFound, kFailed, kExhausted };

struct Result {
  Verdict verdict;
  std::optional<Derivation> derivation;

  static Result found(Derivation d) { return {Verdict::kFound, std::move(d)}; }
  static Result failed() { return {Verdict::kFailed, std::nullopt}; }
  static Result exhausted() { return {Verdict::kExhausted, std::nullopt}; }
};

class Search {
 public:
  Search(SystemId system, ScopeMode mode, std::uint64_t fuel)
      : variant_(system != SystemId::kOriginal), mode_(mode), fuel_(fuel) {}

  Result solve(const TypeEnv& env, const Type& s, const Type& t) {
    if (fuel_ == 0) return Result::exhausted();
    --fuel_;
    Judgment goal{env, s, t};

    if (t.is_top() && (lax() || well_scoped_type(s, env))) {
      return Result::found(Derivation(Rule::kTop, goal));
    }
    if (s.is_var()) {
      if (t.is_var() && s.name() == t.name() &&
          (lax() || env.contains(s.name()))) {
        return Result::found(Derivation(Rule::kReflTVar, goal));
      }
      return variant_ ? variable_variant(goal) : variable_original(goal);
    }
    if (s.is_arrow() && t.is_arrow()) return arrow(goal);
    if (s.is_forall() && t.is_forall()) return all(goal);
    return Result::failed();
  }

 private:
  bool lax() const { return mode_ == ScopeMode::kLax; }

  Result variable_original(const Judgment& goal) {
    const Type* bound = goal.env.lookup(goal.left.name());
    if (bound == nullptr) return Result::failed();
    Result sub = solve(goal.env, *bound, goal.right);
    if (sub.verdict != Verdict::kFound) return sub;
    return Result::found(
        Derivation(Rule::kTransTVar, goal, {std::move(*sub.derivation)}));
  }

  Result variable_variant(const Judgment& goal) {
    const Type* bound = goal.env.lookup(goal.left.name());
    if (bound == nullptr) return Result::failed();
    if (alpha_eq(*bound, goal.right)) {
      return Result::found(Derivation(Rule::kHyp, goal));
    }
    Result head = solve(goal.env, goal.left, *bound);
    if (head.verdict != Verdict::kFound) return head;
    Result rest = solve(goal.env, *bound, goal.right);
    if (rest.verdict != Verdict::kFound) return rest;
    return Result::found(
        Derivation(Rule::kTrTVar, goal,
                   {std::move(*head.derivation), std::move(*rest.derivation)}));
  }

  Result arrow(const Judgment& goal) {
    Result dom = solve(goal.env, goal.right.dom(), goal.left.dom());
    if (dom.verdict != Verdict::kFound) return dom;
    Result cod = solve(goal.env, goal.left.cod(), goal.right.cod());
    if (cod.verdict != Verdict::kFound) return cod;
    return Result::found(
        Derivation(Rule::kArrow, goal,
                   {std::move(*dom.derivation), std::move(*cod.derivation)}));
  }

  Result all(const Judgment& goal) {
    const Type& s = goal.left;
    const Type& t = goal.right;
    Result bounds = solve(goal.env, t.bound(), s.bound());
    if (bounds.verdict != Verdict::kFound) return bounds;
    TyVarName z = choose_binder(goal.env, s, t);
    Result body = solve(goal.env.extended(Binding{z, t.bound()}),
                        open_body(s, z), open_body(t, z));
    if (body.verdict != Verdict::kFound) return body;
    return Result::found(Derivation(
        Rule::kAll, goal,
        {std::move(*bounds.derivation), std::move(*body.derivation)}));
  }

  bool variant_;
  ScopeMode mode_;
  std::uint64_t fuel_;
};

}  // namespace

CheckOutcome check(SystemId system, ScopeMode mode, const TypeEnv& env,
                   const Type& s, const Type& t, Fuel fuel) {
  if (!env_well_formed(env, mode)) {
    throw IllFormedEnv("environment is not well-formed: " + render_env(env));
  }
  if (mode == ScopeMode::kStrict) {
    for (const Type* side : {&s, &t}) {
      for (const TyVarName& v : free_vars(*side)) {
        if (!env.contains(v)) {
          throw UnknownVariable("unbound type variable '" + v.text() + "'");
        }
      }
    }
  }
  Search search(system, mode, fuel.remaining);
  Result r = search.solve(env, s, t);
  switch (r.verdict) {
    case Verdict::kFound:
      return CheckOutcome::derivable(std::move(*r.derivation));
    case Verdict::kFailed:
      return CheckOutcome::not_derivable();
    case Verdict::kExhausted:
      return CheckOutcome::fuel_exhausted();
  }
  return CheckOutcome::not_derivable();
}

}  // namespace fsk
