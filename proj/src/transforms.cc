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

#include "fsub/transforms.h"

#include <string>
#include <utility>

#include "fsub/errors.h"

namespace fsk {

EnvSplit EnvSplit::at(const TypeEnv& env, const TyVarName& name) {
  std::optional<std::size_t> i = env.index_of(name);
  if (!i) throw InvalidInput("'" + name.text() + "' is not bound");
  std::vector<Binding> suffix(env.entries().begin() + *i + 1,
                              env.entries().end());
  return EnvSplit{env.prefix(*i), env.entries()[*i], TypeEnv(suffix)};
}

TypeEnv EnvSplit::joined() const {
  return prefix.extended(pivot).concat(suffix);
}

namespace {

constexpr std::string_view kTransOriginal = "transitivity_original";
constexpr std::string_view kNarrowOriginal = "narrowing_original";
constexpr std::string_view kTransVariant = "transitivity_variant";
constexpr std::string_view kNarrowVariant = "narrowing_variant";
constexpr std::string_view kExtraRule = "extra_rule_admissible";

// Calls in one family share a termination measure.
enum class Family { kOriginal, kVariantTrans, kExtra };

// Per-invocation state: the active call stack feeding the trace.
class Context {
 public:
  Context(ScopeMode mode, TransformTrace* trace) : mode(mode), trace_(trace) {}

  class Frame {
   public:
    Frame(Context& ctx, std::string_view op, Family family, Measure measure,
          bool variable_headed = false)
        : ctx_(ctx) {
      ctx_.enter(op, family, measure, variable_headed);
    }
    ~Frame() { ctx_.leave(); }
    Frame(const Frame&) = delete;
    Frame& operator=(const Frame&) = delete;

   private:
    Context& ctx_;
  };

  const ScopeMode mode;

 private:
  struct Active {
    std::string_view op;
    Family family;
    Measure measure;
    bool variable_headed;
    std::size_t index;
  };

  void enter(std::string_view op, Family family, Measure measure,
             bool variable_headed) {
    if (trace_ == nullptr) return;
    std::optional<std::size_t> parent;
    if (!stack_.empty()) {
      const Active& top = stack_.back();
      parent = top.index;
      if (top.op == kTransVariant && top.variable_headed) {
        ++trace_->variable_headed_descents;
      }
      if (top.family == family && !(measure < top.measure)) {
        ++trace_->measure_violations;
      }
    }
    if (op == kTransVariant) ++trace_->transitivity_variant_calls;
    trace_->calls.push_back({op, measure, parent, variable_headed});
    stack_.push_back(
        {op, family, measure, variable_headed, trace_->calls.size() - 1});
  }

  void leave() {
    if (trace_ != nullptr) stack_.pop_back();
  }

  TransformTrace* trace_;
  std::vector<Active> stack_;
};

Derivation with_conclusion(const Derivation& d, Judgment j) {
  return Derivation(
      d.rule(), std::move(j),
      std::vector<Derivation>(d.premises().begin(), d.premises().end()));
}

TyVarName image(const Renaming& renaming, const TyVarName& name) {
  auto it = renaming.find(name);
  return it == renaming.end() ? name : it->second;
}

// Rebuilds `d` over `env`, renaming free names by `renaming`. `env` must be
// d's environment with its names renamed, possibly with extra entries.
// Binders opened by SA-All nodes are re-freshened when they would clash.
Derivation transport(const Derivation& d, const TypeEnv& env,
                     const Renaming& renaming) {
  Judgment j{env, rename_free(d.left(), renaming),
             rename_free(d.right(), renaming)};
  switch (d.rule()) {
    case Rule::kTop:
    case Rule::kReflTVar:
    case Rule::kHyp:
      return Derivation(d.rule(), std::move(j));
    case Rule::kTransTVar:
    case Rule::kArrow:
    case Rule::kTrTVar: {
      std::vector<Derivation> premises;
      for (const Derivation& p : d.premises()) {
        premises.push_back(transport(p, env, renaming));
      }
      return Derivation(d.rule(), std::move(j), std::move(premises));
    }
    case Rule::kAll: {
      Derivation bounds = transport(d.premise(0), env, renaming);
      const Derivation& body = d.premise(1);
      const Binding& opened = body.env().entries().back();
      NameSet avoid = binder_avoid_set(env, j.left, j.right);
      NameSet inner = derivation_names(body);
      inner.erase(opened.name);
      for (const TyVarName& v : inner) avoid.insert(image(renaming, v));
      TyVarName z = pick_name(opened.name, avoid);
      Renaming extended = renaming;
      extended.insert_or_assign(opened.name, z);
      Derivation new_body = transport(
          body, env.extended(Binding{z, rename_free(opened.bound, renaming)}),
          extended);
      return Derivation(Rule::kAll, std::move(j),
                        {std::move(bounds), std::move(new_body)});
    }
    case Rule::kExtra: {
      Derivation hyp = transport(d.premise(0), env, renaming);
      TypeEnv narrowed = env.with_bound(hyp.left().name(), hyp.right());
      Derivation rest = transport(d.premise(1), narrowed, renaming);
      return Derivation(Rule::kExtra, std::move(j),
                        {std::move(hyp), std::move(rest)});
    }
  }
  throw InvalidInput("unknown rule");
}

// Renames the binder opened by the last entry of d's environment.
Derivation rebind(const Derivation& d, const TyVarName& name) {
  const TypeEnv& env = d.env();
  const Binding& last = env.entries().back();
  if (last.name == name) return d;
  TypeEnv renamed =
      env.prefix(env.size() - 1).extended(Binding{name, last.bound});
  return transport(d, renamed, Renaming{{last.name, name}});
}

// Binder for an SA-All node rebuilt over `new_env` from `node` (over its own
// environment): legal in both environments and clear of every name in
// `body` other than the binder itself and of `extra`.
TyVarName realign_binder(const Derivation& node, const TypeEnv& new_env,
                         const NameSet& extra) {
  const Derivation& body = node.premise(1);
  const TyVarName& opened = body.env().entries().back().name;
  NameSet avoid = binder_avoid_set(new_env, node.left(), node.right());
  avoid.merge(binder_avoid_set(node.env(), node.left(), node.right()));
  NameSet inner = derivation_names(body);
  inner.erase(opened);
  avoid.merge(inner);
  avoid.insert(extra.begin(), extra.end());
  return pick_name(opened, avoid);
}

void require_valid(const Derivation& d, SystemId system, ScopeMode mode,
                   std::string_view what) {
  ValidationReport report = validate_derivation(d, system, mode);
  if (!report.ok) {
    throw InvalidInput(std::string(what) + " is not a valid " +
                       std::string(system_name(system)) + " derivation: " +
                       render_failure(report.failures.front()));
  }
}

void ensure_output(const Derivation& out, SystemId system, ScopeMode mode,
                   const Judgment& expected, std::string_view op) {
  ValidationReport report = validate_derivation(out, system, mode);
  if (!report.ok) {
    throw Error(std::string(op) + " produced an invalid derivation: " +
                render_failure(report.failures.front()));
  }
  if (!judgment_alpha_eq(out.conclusion(), expected)) {
    throw Error(std::string(op) + " produced the wrong conclusion");
  }
}

void require_cut(const Derivation& d1, const Derivation& d2) {
  if (!env_alpha_eq(d1.env(), d2.env())) {
    throw JudgmentMismatch("transitivity inputs have different environments");
  }
  if (!alpha_eq(d1.right(), d2.left())) {
    throw JudgmentMismatch("cut types differ: " + render_type(d1.right()) +
                           " vs " + render_type(d2.left()));
  }
}

Derivation reflexivity_unchecked(const TypeEnv& env, const Type& t) {
  Judgment j{env, t, t};
  switch (t.kind()) {
    case Type::Kind::kTop:
      return Derivation(Rule::kTop, std::move(j));
    case Type::Kind::kVar:
      return Derivation(Rule::kReflTVar, std::move(j));
    case Type::Kind::kArrow:
      return Derivation(Rule::kArrow, std::move(j),
                        {reflexivity_unchecked(env, t.dom()),
                         reflexivity_unchecked(env, t.cod())});
    case Type::Kind::kForall: {
      TyVarName z = choose_binder(env, t, t);
      Type body = open_body(t, z);
      return Derivation(
          Rule::kAll, std::move(j),
          {reflexivity_unchecked(env, t.bound()),
           reflexivity_unchecked(env.extended(Binding{z, t.bound()}), body)});
    }
  }
  throw InvalidInput("unknown type");
}

// ---------------------------------------------------------------------------
// Original system: transitivity and narrowing by mutual recursion.

Derivation trans_original(Context& ctx, const Derivation& d1,
                          const Derivation& d2);

Derivation narrow_original(Context& ctx, const TyVarName& pivot,
                           const Type& cut, const Derivation& d,
                           const TypeEnv& new_env, const Derivation& d_p) {
  Context::Frame frame(ctx, kNarrowOriginal, Family::kOriginal,
                       Measure{cut.size(), 1, d.height()});
  Judgment j{new_env, d.left(), d.right()};
  auto narrow = [&](const Derivation& sub, const TypeEnv& env) {
    return narrow_original(ctx, pivot, cut, sub, env, d_p);
  };
  switch (d.rule()) {
    case Rule::kTop:
    case Rule::kReflTVar:
      return Derivation(d.rule(), std::move(j));
    case Rule::kTransTVar: {
      Derivation rest = narrow(d.premise(0), new_env);
      if (d.left().name() != pivot) {
        return Derivation(Rule::kTransTVar, std::move(j), {std::move(rest)});
      }
      // X <: Q <: N becomes X <: P <: Q <: N; the new bound P is composed
      // with the narrowed premise through the cut Q.
      Derivation p_below_q = transport(d_p, new_env, {});
      return Derivation(Rule::kTransTVar, std::move(j),
                        {trans_original(ctx, p_below_q, rest)});
    }
    case Rule::kArrow:
      return Derivation(
          Rule::kArrow, std::move(j),
          {narrow(d.premise(0), new_env), narrow(d.premise(1), new_env)});
    case Rule::kAll: {
      Derivation bounds = narrow(d.premise(0), new_env);
      TyVarName z = realign_binder(d, new_env, derivation_names(d_p));
      Derivation body = rebind(d.premise(1), z);
      const Type& opened_bound = body.env().entries().back().bound;
      Derivation new_body =
          narrow(body, new_env.extended(Binding{z, opened_bound}));
      return Derivation(Rule::kAll, std::move(j),
                        {std::move(bounds), std::move(new_body)});
    }
    default:
      throw InvalidInput(std::string(rule_tag(d.rule())) +
                         " is not an Original rule");
  }
}

// Shared SA-All/SA-All cut for both systems: aligns the two opened binders
// on a common name, narrows the left body to the right bound, and cuts the
// bodies.
template <typename Narrow, typename Trans>
Derivation cut_quantifiers(const Derivation& d1, const Derivation& d2,
                           Judgment goal, Narrow narrow, Trans trans) {
  const Derivation& a1 = d1.premise(0);  // Q1 <: S1
  const Derivation& a2 = d1.premise(1);  // Z <: Q1 |- S2 <: Q2
  const Derivation& b1 = d2.premise(0);  // T1 <: Q1
  const Derivation& b2 = d2.premise(1);  // Z' <: T1 |- Q2 <: T2
  const TyVarName& za = a2.env().entries().back().name;
  const TyVarName& zb = b2.env().entries().back().name;
  NameSet avoid = binder_avoid_set(goal.env, goal.left, goal.right);
  NameSet inner_a = derivation_names(a2);
  inner_a.erase(za);
  NameSet inner_b = derivation_names(b2);
  inner_b.erase(zb);
  avoid.merge(inner_a);
  avoid.merge(inner_b);
  avoid.merge(derivation_names(b1));
  TyVarName w = pick_name(za, avoid);
  Derivation left_body = rebind(a2, w);
  Derivation right_body = rebind(b2, w);
  const Type& cut_bound = left_body.env().entries().back().bound;
  EnvSplit split{goal.env, Binding{w, cut_bound}, TypeEnv()};
  Derivation narrowed = narrow(split, left_body, b1);
  Derivation bounds = trans(b1, a1);
  Derivation body = trans(narrowed, right_body);
  return Derivation(Rule::kAll, std::move(goal),
                    {std::move(bounds), std::move(body)});
}

Derivation trans_original(Context& ctx, const Derivation& d1,
                          const Derivation& d2) {
  Context::Frame frame(ctx, kTransOriginal, Family::kOriginal,
                       Measure{d1.right().size(), 0, d1.height()},
                       d1.left().is_var());
  Judgment goal{d1.env(), d1.left(), d2.right()};
  switch (d1.rule()) {
    case Rule::kTop:
      // Q is Top, and only SA-Top concludes Top <: T.
      if (d2.rule() != Rule::kTop) {
        throw InvalidInput("Top <: T must end in SA-Top");
      }
      return Derivation(Rule::kTop, std::move(goal));
    case Rule::kReflTVar:
      return d2;
    case Rule::kTransTVar:
      return Derivation(Rule::kTransTVar, std::move(goal),
                        {trans_original(ctx, d1.premise(0), d2)});
    case Rule::kArrow:
      if (d2.rule() == Rule::kTop)
        return Derivation(Rule::kTop, std::move(goal));
      if (d2.rule() != Rule::kArrow) {
        throw InvalidInput("arrow cut must end in SA-Top or SA-Arrow");
      }
      return Derivation(Rule::kArrow, std::move(goal),
                        {trans_original(ctx, d2.premise(0), d1.premise(0)),
                         trans_original(ctx, d1.premise(1), d2.premise(1))});
    case Rule::kAll:
      if (d2.rule() == Rule::kTop)
        return Derivation(Rule::kTop, std::move(goal));
      if (d2.rule() != Rule::kAll) {
        throw InvalidInput("quantifier cut must end in SA-Top or SA-All");
      }
      return cut_quantifiers(
          d1, d2, std::move(goal),
          [&](const EnvSplit& split, const Derivation& d,
              const Derivation& d_p) {
            return narrow_original(
                ctx, split.pivot.name, split.pivot.bound, d,
                d.env().with_bound(split.pivot.name, d_p.left()), d_p);
          },
          [&](const Derivation& x, const Derivation& y) {
            return trans_original(ctx, x, y);
          });
    default:
      throw InvalidInput(std::string(rule_tag(d1.rule())) +
                         " is not an Original rule");
  }
}

// ---------------------------------------------------------------------------
// Variant system.

Derivation extra_rule(Context& ctx, const TyVarName& pivot,
                      const Derivation& d_xv, const Derivation& d,
                      const TypeEnv& new_env) {
  Context::Frame frame(ctx, kExtraRule, Family::kExtra,
                       Measure{0, 0, d.height()});
  Judgment j{new_env, d.left(), d.right()};
  auto recur = [&](const Derivation& sub, const TypeEnv& env) {
    return extra_rule(ctx, pivot, d_xv, sub, env);
  };
  switch (d.rule()) {
    case Rule::kHyp:
      if (d.left().name() == pivot) {
        return with_conclusion(transport(d_xv, new_env, {}), std::move(j));
      }
      return Derivation(Rule::kHyp, std::move(j));
    case Rule::kTop:
    case Rule::kReflTVar:
      return Derivation(d.rule(), std::move(j));
    case Rule::kArrow:
    case Rule::kTrTVar:
      return Derivation(
          d.rule(), std::move(j),
          {recur(d.premise(0), new_env), recur(d.premise(1), new_env)});
    case Rule::kAll: {
      Derivation bounds = recur(d.premise(0), new_env);
      TyVarName z = realign_binder(d, new_env, derivation_names(d_xv));
      Derivation body = rebind(d.premise(1), z);
      const Type& opened_bound = body.env().entries().back().bound;
      Derivation new_body =
          recur(body, new_env.extended(Binding{z, opened_bound}));
      return Derivation(Rule::kAll, std::move(j),
                        {std::move(bounds), std::move(new_body)});
    }
    default:
      throw InvalidInput(std::string(rule_tag(d.rule())) +
                         " is not a Variant rule");
  }
}

Derivation narrow_variant(Context& ctx, const TyVarName& pivot,
                          const Derivation& d, const Derivation& d_p) {
  Context::Frame frame(ctx, kNarrowVariant, Family::kExtra,
                       Measure{0, 1, d.height()});
  TypeEnv new_env = d.env().with_bound(pivot, d_p.left());
  // X <: P by hypothesis, then P <: Q: the first premise of the extra rule.
  Derivation hyp(Rule::kHyp, Judgment{new_env, Type::var(pivot), d_p.left()});
  Derivation x_below_q(Rule::kTrTVar,
                       Judgment{new_env, Type::var(pivot), d_p.right()},
                       {std::move(hyp), transport(d_p, new_env, {})});
  return extra_rule(ctx, pivot, x_below_q, d, new_env);
}

Derivation trans_variant(Context& ctx, const Derivation& d1,
                         const Derivation& d2) {
  Context::Frame frame(ctx, kTransVariant, Family::kVariantTrans,
                       Measure{d1.right().size(), 0, 0}, d1.left().is_var());
  Judgment goal{d1.env(), d1.left(), d2.right()};
  switch (d1.rule()) {
    case Rule::kTop:
      if (d2.rule() != Rule::kTop) {
        throw InvalidInput("Top <: T must end in SA-Top");
      }
      return Derivation(Rule::kTop, std::move(goal));
    case Rule::kReflTVar:
      return d2;
    case Rule::kHyp:
    case Rule::kTrTVar:
      return Derivation(Rule::kTrTVar, std::move(goal), {d1, d2});
    case Rule::kArrow:
      if (d2.rule() == Rule::kTop)
        return Derivation(Rule::kTop, std::move(goal));
      if (d2.rule() != Rule::kArrow) {
        throw InvalidInput("arrow cut must end in SA-Top or SA-Arrow");
      }
      return Derivation(Rule::kArrow, std::move(goal),
                        {trans_variant(ctx, d2.premise(0), d1.premise(0)),
                         trans_variant(ctx, d1.premise(1), d2.premise(1))});
    case Rule::kAll:
      if (d2.rule() == Rule::kTop)
        return Derivation(Rule::kTop, std::move(goal));
      if (d2.rule() != Rule::kAll) {
        throw InvalidInput("quantifier cut must end in SA-Top or SA-All");
      }
      return cut_quantifiers(
          d1, d2, std::move(goal),
          [&](const EnvSplit& split, const Derivation& d,
              const Derivation& d_p) {
            return narrow_variant(ctx, split.pivot.name, d, d_p);
          },
          [&](const Derivation& x, const Derivation& y) {
            return trans_variant(ctx, x, y);
          });
    default:
      throw InvalidInput(std::string(rule_tag(d1.rule())) +
                         " is not a Variant rule");
  }
}

// ---------------------------------------------------------------------------
// Translations.

Derivation to_variant(const Derivation& d) {
  if (d.rule() == Rule::kTransTVar) {
    const Type& bound = *d.env().lookup(d.left().name());
    Derivation hyp(Rule::kHyp, Judgment{d.env(), d.left(), bound});
    return Derivation(Rule::kTrTVar, d.conclusion(),
                      {std::move(hyp), to_variant(d.premise(0))});
  }
  if (!system_admits(SystemId::kOriginal, d.rule())) {
    throw InvalidInput(std::string(rule_tag(d.rule())) +
                       " is not an Original rule");
  }
  std::vector<Derivation> premises;
  for (const Derivation& p : d.premises()) premises.push_back(to_variant(p));
  return Derivation(d.rule(), d.conclusion(), std::move(premises));
}

Derivation to_original(Context& ctx, const Derivation& d) {
  switch (d.rule()) {
    case Rule::kHyp: {
      // X <: T in Gamma: SA-Trans-TVar through the bound, closed by T <: T.
      return Derivation(Rule::kTransTVar, d.conclusion(),
                        {reflexivity_unchecked(d.env(), d.right())});
    }
    case Rule::kTrTVar:
      return with_conclusion(trans_original(ctx, to_original(ctx, d.premise(0)),
                                            to_original(ctx, d.premise(1))),
                             d.conclusion());
    case Rule::kTop:
    case Rule::kReflTVar:
    case Rule::kArrow:
    case Rule::kAll: {
      std::vector<Derivation> premises;
      for (const Derivation& p : d.premises()) {
        premises.push_back(to_original(ctx, p));
      }
      return Derivation(d.rule(), d.conclusion(), std::move(premises));
    }
    default:
      throw InvalidInput(std::string(rule_tag(d.rule())) +
                         " is not a Variant rule");
  }
}

void require_split(const EnvSplit& split, const Derivation& d,
                   const Derivation& d_p) {
  TypeEnv joined = split.joined();
  if (!env_alpha_eq(d.env(), joined)) {
    throw JudgmentMismatch("derivation environment is not the split " +
                           render_env(joined));
  }
  if (!env_alpha_eq(d_p.env(), split.prefix)) {
    throw JudgmentMismatch("bound derivation must be over the prefix " +
                           render_env(split.prefix));
  }
  if (!alpha_eq(d_p.right(), split.pivot.bound)) {
    throw JudgmentMismatch("bound derivation must conclude P <: " +
                           render_type(split.pivot.bound));
  }
}

}  // namespace

Derivation reflexivity(const TypeEnv& env, const Type& t, ScopeMode mode) {
  if (!env_well_formed(env, mode)) {
    throw IllFormedEnv("environment is not well-formed: " + render_env(env));
  }
  if (mode == ScopeMode::kStrict && !well_scoped_type(t, env)) {
    throw NotWellScoped(render_type(t) + " is not well-scoped in [" +
                        render_env(env) + "]");
  }
  return reflexivity_unchecked(env, t);
}

Derivation weakening(const Derivation& d, const TypeEnv& wider, SystemId system,
                     ScopeMode mode, const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d, system, mode, "weakening input");
    if (!env_well_formed(wider, mode)) {
      throw IllFormedEnv("wider environment is not well-formed");
    }
    std::size_t next = 0;
    for (const Binding& b : d.env().entries()) {
      while (next < wider.size() &&
             !(wider.entries()[next].name == b.name &&
               alpha_eq(wider.entries()[next].bound, b.bound))) {
        ++next;
      }
      if (next == wider.size()) {
        throw InvalidInput("environment is not a subsequence of the wider one");
      }
      ++next;
    }
  }
  Derivation out = transport(d, wider, {});
  if (options.check_contracts && !validate_derivation(out, system, mode).ok) {
    throw NameClash("weakened derivation does not validate");
  }
  return out;
}

Derivation transitivity_original(const Derivation& d1, const Derivation& d2,
                                 ScopeMode mode,
                                 const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d1, SystemId::kOriginal, mode, "left derivation");
    require_valid(d2, SystemId::kOriginal, mode, "right derivation");
  }
  require_cut(d1, d2);
  Context ctx(mode, options.trace);
  Derivation out = trans_original(ctx, d1, d2);
  if (options.check_contracts) {
    ensure_output(out, SystemId::kOriginal, mode,
                  Judgment{d1.env(), d1.left(), d2.right()}, kTransOriginal);
  }
  return out;
}

Derivation narrowing_original(const EnvSplit& split, const Derivation& d,
                              const Derivation& d_p, ScopeMode mode,
                              const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d, SystemId::kOriginal, mode, "narrowed derivation");
    require_valid(d_p, SystemId::kOriginal, mode, "bound derivation");
  }
  require_split(split, d, d_p);
  Context ctx(mode, options.trace);
  TypeEnv new_env = d.env().with_bound(split.pivot.name, d_p.left());
  Derivation out = narrow_original(ctx, split.pivot.name, split.pivot.bound, d,
                                   new_env, d_p);
  if (options.check_contracts) {
    ensure_output(out, SystemId::kOriginal, mode,
                  Judgment{new_env, d.left(), d.right()}, kNarrowOriginal);
  }
  return out;
}

Derivation transitivity_variant(const Derivation& d1, const Derivation& d2,
                                ScopeMode mode,
                                const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d1, SystemId::kVariant, mode, "left derivation");
    require_valid(d2, SystemId::kVariant, mode, "right derivation");
  }
  require_cut(d1, d2);
  Context ctx(mode, options.trace);
  Derivation out = trans_variant(ctx, d1, d2);
  if (options.check_contracts) {
    ensure_output(out, SystemId::kVariant, mode,
                  Judgment{d1.env(), d1.left(), d2.right()}, kTransVariant);
  }
  return out;
}

Derivation narrowing_variant(const EnvSplit& split, const Derivation& d,
                             const Derivation& d_p, ScopeMode mode,
                             const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d, SystemId::kVariant, mode, "narrowed derivation");
    require_valid(d_p, SystemId::kVariant, mode, "bound derivation");
  }
  require_split(split, d, d_p);
  Context ctx(mode, options.trace);
  Derivation out = narrow_variant(ctx, split.pivot.name, d, d_p);
  if (options.check_contracts) {
    ensure_output(out, SystemId::kVariant, mode,
                  Judgment{d.env().with_bound(split.pivot.name, d_p.left()),
                           d.left(), d.right()},
                  kNarrowVariant);
  }
  return out;
}

Derivation extra_rule_admissible(const Derivation& d_xv, const Derivation& d_mn,
                                 ScopeMode mode,
                                 const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d_xv, SystemId::kVariant, mode, "X <: V derivation");
    require_valid(d_mn, SystemId::kVariant, mode, "M <: N derivation");
  }
  if (!d_xv.left().is_var() || !d_xv.env().contains(d_xv.left().name())) {
    throw JudgmentMismatch(
        "first derivation must conclude X <: V for a bound X");
  }
  const TyVarName& pivot = d_xv.left().name();
  if (!env_alpha_eq(d_mn.env(), d_xv.env().with_bound(pivot, d_xv.right()))) {
    throw JudgmentMismatch(
        "second derivation must be over the environment "
        "with " +
        pivot.text() + " <: " + render_type(d_xv.right()));
  }
  Context ctx(mode, options.trace);
  Derivation out = extra_rule(ctx, pivot, d_xv, d_mn, d_xv.env());
  if (options.check_contracts) {
    ensure_output(out, SystemId::kVariant, mode,
                  Judgment{d_xv.env(), d_mn.left(), d_mn.right()}, kExtraRule);
  }
  return out;
}

Derivation orig_to_variant(const Derivation& d, ScopeMode mode,
                           const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d, SystemId::kOriginal, mode, "input");
  }
  Derivation out = to_variant(d);
  if (options.check_contracts) {
    ensure_output(out, SystemId::kVariant, mode, d.conclusion(),
                  "orig_to_variant");
  }
  return out;
}

Derivation variant_to_orig(const Derivation& d, ScopeMode mode,
                           const TransformOptions& options) {
  if (options.check_contracts) {
    require_valid(d, SystemId::kVariant, mode, "input");
  }
  Context ctx(mode, options.trace);
  Derivation out = to_original(ctx, d);
  if (options.check_contracts) {
    ensure_output(out, SystemId::kOriginal, mode, d.conclusion(),
                  "variant_to_orig");
  }
  return out;
}

Derivation lax_to_strict(const Derivation& d, SystemId system) {
  require_valid(d, system, ScopeMode::kLax, "input");
  if (!env_well_formed(d.env(), ScopeMode::kStrict)) {
    throw IllFormedEnv("environment is not Strict-well-formed: " +
                       render_env(d.env()));
  }
  if (!well_scoped_type(d.left(), d.env()) ||
      !well_scoped_type(d.right(), d.env())) {
    throw NotWellScoped("endpoints are not well-scoped");
  }
  ValidationReport report = validate_derivation(d, system, ScopeMode::kStrict);
  if (!report.ok) {
    const ValidationFailure& first = report.failures.front();
    throw ScopeViolation("Strict proviso fails " + render_failure(first),
                         first.path);
  }
  return d;
}

}  // namespace fsk
