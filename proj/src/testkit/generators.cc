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

#include <algorithm>
#include <set>
#include <utility>

#include "fsub/testkit.h"

namespace fsk {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = (seed ^ index) + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::vector<TyVarName> scope_of(const TypeEnv& env) {
  std::vector<TyVarName> out;
  for (const Binding& b : env.entries()) out.push_back(b.name);
  return out;
}

Type gen_leaf(Rng& rng, const std::vector<TyVarName>& scope) {
  if (scope.empty() || rng.percent(34)) return Type::top();
  return Type::var(scope[rng.below(scope.size())]);
}

Type gen_in(Rng& rng, std::vector<TyVarName>& scope, std::size_t budget) {
  std::size_t roll = budget < 3 ? 0 : rng.below(10);
  if (roll < 4) return gen_leaf(rng, scope);
  std::size_t first = 1 + rng.below(budget - 2);
  std::size_t second = budget - 1 - first;
  if (roll < 7) {
    Type dom = gen_in(rng, scope, first);
    Type cod = gen_in(rng, scope, second);
    return Type::arrow(std::move(dom), std::move(cod));
  }
  // A quarter of binders shadow a name already in scope.
  TyVarName binder = !scope.empty() && rng.percent(25)
                         ? scope[rng.below(scope.size())]
                         : fresh_name(NameSet(scope.begin(), scope.end()));
  Type bound = gen_in(rng, scope, first);
  scope.push_back(binder);
  Type body = gen_in(rng, scope, second);
  scope.pop_back();
  return Type::forall(std::move(binder), std::move(bound), std::move(body));
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[rng.below(i)]);
  }
}

// Whether the bound chain starting at `name` passes through `q`.
bool chain_reaches(const TypeEnv& env, const TyVarName& name, const Type& q) {
  Type current = Type::var(name);
  NameSet visited;
  while (true) {
    if (alpha_eq(current, q)) return true;
    if (!current.is_var() || !visited.insert(current.name()).second) {
      return false;
    }
    const Type* bound = env.lookup(current.name());
    if (bound == nullptr) return false;
    current = *bound;
  }
}

TypeEnv extend_fresh(Rng& rng, const TypeEnv& base, std::size_t count,
                     const GenConfig& cfg) {
  std::size_t bound_size = std::max<std::size_t>(1, cfg.max_type_size / 2);
  std::vector<TyVarName> names = scope_of(base);
  std::size_t first_new = names.size();
  for (std::size_t i = 0; i < count; ++i) {
    names.push_back(fresh_name(NameSet(names.begin(), names.end())));
  }
  std::vector<Binding> entries(base.entries().begin(), base.entries().end());
  for (std::size_t i = first_new; i < names.size(); ++i) {
    std::vector<TyVarName> scope =
        cfg.mode == ScopeMode::kStrict
            ? std::vector<TyVarName>(names.begin(), names.begin() + i)
            : names;
    entries.push_back(Binding{names[i], gen_in(rng, scope, bound_size)});
  }
  return TypeEnv(std::move(entries));
}

enum class Verdict { kFound, kFailed, kExhausted };

struct Attempt {
  Verdict verdict;
  std::optional<Derivation> derivation;
};

// Checker-shaped search that tries applicable rules in random order.
class RandomProver {
 public:
  RandomProver(Rng& rng, SystemId system, ScopeMode mode, std::uint64_t fuel)
      : rng_(rng),
        variant_(system != SystemId::kOriginal),
        lax_(mode == ScopeMode::kLax),
        fuel_(fuel) {}

  Attempt solve(const TypeEnv& env, const Type& s, const Type& t) {
    if (fuel_ == 0) return {Verdict::kExhausted, std::nullopt};
    --fuel_;
    std::vector<Rule> rules;
    if (t.is_top() && (lax_ || well_scoped_type(s, env))) {
      rules.push_back(Rule::kTop);
    }
    if (s.is_var()) {
      if (t.is_var() && t.name() == s.name() &&
          (lax_ || env.contains(s.name()))) {
        rules.push_back(Rule::kReflTVar);
      }
      if (const Type* bound = env.lookup(s.name())) {
        if (!variant_) {
          rules.push_back(Rule::kTransTVar);
        } else {
          if (alpha_eq(*bound, t)) rules.push_back(Rule::kHyp);
          rules.push_back(Rule::kTrTVar);
        }
      }
    }
    if (s.is_arrow() && t.is_arrow()) rules.push_back(Rule::kArrow);
    if (s.is_forall() && t.is_forall()) rules.push_back(Rule::kAll);
    shuffle(rng_, rules);
    Judgment goal{env, s, t};
    for (Rule r : rules) {
      Attempt a = apply(r, goal);
      if (a.verdict != Verdict::kFailed) return a;
    }
    return {Verdict::kFailed, std::nullopt};
  }

 private:
  Attempt apply(Rule rule, const Judgment& goal) {
    const TypeEnv& env = goal.env;
    const Type& s = goal.left;
    const Type& t = goal.right;
    std::vector<std::pair<TypeEnv, std::pair<Type, Type>>> subgoals;
    switch (rule) {
      case Rule::kTop:
      case Rule::kReflTVar:
      case Rule::kHyp:
        return {Verdict::kFound, Derivation(rule, goal)};
      case Rule::kTransTVar:
        subgoals.push_back({env, {*env.lookup(s.name()), t}});
        break;
      case Rule::kTrTVar: {
        const Type& bound = *env.lookup(s.name());
        subgoals.push_back({env, {s, bound}});
        subgoals.push_back({env, {bound, t}});
        break;
      }
      case Rule::kArrow:
        subgoals.push_back({env, {t.dom(), s.dom()}});
        subgoals.push_back({env, {s.cod(), t.cod()}});
        break;
      case Rule::kAll: {
        TyVarName z = choose_binder(env, s, t);
        subgoals.push_back({env, {t.bound(), s.bound()}});
        subgoals.push_back({env.extended(Binding{z, t.bound()}),
                            {open_body(s, z), open_body(t, z)}});
        break;
      }
      case Rule::kExtra:
        return {Verdict::kFailed, std::nullopt};
    }
    std::vector<Derivation> premises;
    for (const auto& [sub_env, sides] : subgoals) {
      Attempt a = solve(sub_env, sides.first, sides.second);
      if (a.verdict != Verdict::kFound) return a;
      premises.push_back(std::move(*a.derivation));
    }
    return {Verdict::kFound, Derivation(rule, goal, std::move(premises))};
  }

  Rng& rng_;
  bool variant_;
  bool lax_;
  std::uint64_t fuel_;
};

}  // namespace

TypeEnv gen_env(Rng& rng, const GenConfig& cfg) {
  std::size_t length = rng.below(cfg.max_env_len + 1);
  return extend_fresh(rng, TypeEnv(), length, cfg);
}

TypeEnv gen_env(const GenConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_env(rng, cfg);
}

Type gen_type(Rng& rng, const TypeEnv& env, std::size_t max_size) {
  std::vector<TyVarName> scope = scope_of(env);
  return gen_in(rng, scope, std::max<std::size_t>(1, max_size));
}

Type gen_type(const GenConfig& cfg, const TypeEnv& env) {
  Rng rng(cfg.seed);
  return gen_type(rng, env, cfg.max_type_size);
}

Type gen_supertype(Rng& rng, const TypeEnv& env, const Type& q,
                   std::size_t depth) {
  if (depth == 0) return rng.percent(50) ? q : Type::top();
  std::size_t roll = rng.below(10);
  if (roll < 2) return Type::top();
  if (roll < 4) return q;
  switch (q.kind()) {
    case Type::Kind::kTop:
      return q;
    case Type::Kind::kVar: {
      const Type* bound = env.lookup(q.name());
      if (bound != nullptr && rng.percent(60)) {
        return gen_supertype(rng, env, *bound, depth - 1);
      }
      return q;
    }
    case Type::Kind::kArrow: {
      Type dom = gen_subtype(rng, env, q.dom(), depth - 1);
      Type cod = gen_supertype(rng, env, q.cod(), depth - 1);
      return Type::arrow(std::move(dom), std::move(cod));
    }
    case Type::Kind::kForall: {
      TyVarName z = pick_name(q.name(), binder_avoid_set(env, q, q));
      Type bound = gen_subtype(rng, env, q.bound(), depth - 1);
      Type body = gen_supertype(rng, env.extended(Binding{z, bound}),
                                open_body(q, z), depth - 1);
      return Type::forall(z, std::move(bound), std::move(body));
    }
  }
  return q;
}

Type gen_subtype(Rng& rng, const TypeEnv& env, const Type& q,
                 std::size_t depth) {
  if (depth == 0) return q;
  std::size_t roll = rng.below(10);
  if (roll < 2) return q;
  if (roll < 5) {
    std::vector<TyVarName> candidates;
    for (const Binding& b : env.entries()) {
      if (q.is_top() || chain_reaches(env, b.name, q)) {
        candidates.push_back(b.name);
      }
    }
    if (!candidates.empty()) {
      return Type::var(candidates[rng.below(candidates.size())]);
    }
  }
  switch (q.kind()) {
    case Type::Kind::kTop:
      return gen_type(rng, env, 5);
    case Type::Kind::kVar:
      return q;
    case Type::Kind::kArrow: {
      Type dom = gen_supertype(rng, env, q.dom(), depth - 1);
      Type cod = gen_subtype(rng, env, q.cod(), depth - 1);
      return Type::arrow(std::move(dom), std::move(cod));
    }
    case Type::Kind::kForall: {
      TyVarName z = pick_name(q.name(), binder_avoid_set(env, q, q));
      Type bound = gen_supertype(rng, env, q.bound(), depth - 1);
      Type body = gen_subtype(rng, env.extended(Binding{z, q.bound()}),
                              open_body(q, z), depth - 1);
      return Type::forall(z, std::move(bound), std::move(body));
    }
  }
  return q;
}

std::optional<Derivation> gen_derivation(Rng& rng, SystemId system,
                                         ScopeMode mode, const TypeEnv& env,
                                         const Type& s, const Type& t,
                                         Fuel fuel) {
  RandomProver prover(rng, system, mode, fuel.remaining);
  Attempt a = prover.solve(env, s, t);
  if (a.verdict != Verdict::kFound) return std::nullopt;
  return std::move(a.derivation);
}

Instance gen_instance(Rng& rng, const GenConfig& cfg) {
  TypeEnv env = gen_env(rng, cfg);
  switch (rng.below(3)) {
    case 0: {
      Type s = gen_type(rng, env, cfg.max_type_size);
      Type t = gen_type(rng, env, cfg.max_type_size);
      return Instance{env, std::move(s), std::move(t)};
    }
    case 1: {
      Type s = gen_type(rng, env, cfg.max_type_size);
      Type t = gen_supertype(rng, env, s);
      return Instance{env, std::move(s), std::move(t)};
    }
    default: {
      Type t = gen_type(rng, env, cfg.max_type_size);
      Type s = gen_subtype(rng, env, t);
      return Instance{env, std::move(s), std::move(t)};
    }
  }
}

std::optional<TransitivityCase> gen_transitivity_case(Rng& rng,
                                                      const GenConfig& cfg,
                                                      SystemId system) {
  TypeEnv env = gen_env(rng, cfg);
  Type q = gen_type(rng, env, cfg.max_type_size);
  Type s = gen_subtype(rng, env, q);
  Type t = gen_supertype(rng, env, q);
  auto d1 = gen_derivation(rng, system, cfg.mode, env, s, q);
  if (!d1) return std::nullopt;
  auto d2 = gen_derivation(rng, system, cfg.mode, env, q, t);
  if (!d2) return std::nullopt;
  return TransitivityCase{std::move(*d1), std::move(*d2)};
}

std::optional<NarrowingCase> gen_narrowing_case(Rng& rng, const GenConfig& cfg,
                                                SystemId system) {
  TypeEnv prefix = gen_env(rng, cfg);
  Type q = gen_type(rng, prefix, cfg.max_type_size);
  Type p = gen_subtype(rng, prefix, q);
  TyVarName x = fresh_name(prefix.names());
  TypeEnv with_pivot = prefix.extended(Binding{x, q});
  TypeEnv full = extend_fresh(rng, with_pivot, rng.below(3), cfg);
  Type m =
      rng.percent(60) ? Type::var(x) : gen_type(rng, full, cfg.max_type_size);
  Type n = gen_supertype(rng, full, m);
  auto d = gen_derivation(rng, system, cfg.mode, full, m, n);
  if (!d) return std::nullopt;
  auto d_p = gen_derivation(rng, system, cfg.mode, prefix, p, q);
  if (!d_p) return std::nullopt;
  return NarrowingCase{EnvSplit::at(full, x), std::move(*d), std::move(*d_p)};
}

std::optional<ExtraRuleCase> gen_extra_rule_case(Rng& rng,
                                                 const GenConfig& cfg) {
  TypeEnv prefix = gen_env(rng, cfg);
  Type u = gen_type(rng, prefix, cfg.max_type_size);
  Type v = gen_supertype(rng, prefix, u);
  TyVarName x = fresh_name(prefix.names());
  TypeEnv env_u =
      extend_fresh(rng, prefix.extended(Binding{x, u}), rng.below(3), cfg);
  TypeEnv env_v = env_u.with_bound(x, v);
  if (!env_well_formed(env_v, cfg.mode)) return std::nullopt;
  auto d_xv =
      gen_derivation(rng, SystemId::kVariant, cfg.mode, env_u, Type::var(x), v);
  if (!d_xv) return std::nullopt;
  Type m =
      rng.percent(60) ? Type::var(x) : gen_type(rng, env_v, cfg.max_type_size);
  Type n = gen_supertype(rng, env_v, m);
  auto d_mn = gen_derivation(rng, SystemId::kVariant, cfg.mode, env_v, m, n);
  if (!d_mn) return std::nullopt;
  return ExtraRuleCase{std::move(*d_xv), std::move(*d_mn)};
}

}  // namespace fsk
