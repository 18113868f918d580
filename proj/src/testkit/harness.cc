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

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fsub/errors.h"
#include "fsub/testkit.h"

namespace fsk {

namespace {

// Every type obtained from t by replacing one non-Top subterm with Top, in
// preorder.
std::vector<Type> topped_variants(const Type& t) {
  std::vector<Type> out;
  if (t.is_top()) return out;
  out.push_back(Type::top());
  switch (t.kind()) {
    case Type::Kind::kTop:
    case Type::Kind::kVar:
      break;
    case Type::Kind::kArrow:
      for (const Type& d : topped_variants(t.dom())) {
        out.push_back(Type::arrow(d, t.cod()));
      }
      for (const Type& c : topped_variants(t.cod())) {
        out.push_back(Type::arrow(t.dom(), c));
      }
      break;
    case Type::Kind::kForall: {
      TyVarName x = t.name();
      for (const Type& b : topped_variants(t.bound())) {
        out.push_back(Type::forall(x, b, t.body()));
      }
      for (const Type& b : topped_variants(t.body())) {
        out.push_back(Type::forall(x, t.bound(), b));
      }
      break;
    }
  }
  return out;
}

std::vector<TypeEnv> shrunk_envs(const TypeEnv& env) {
  std::vector<TypeEnv> out;
  const std::vector<Binding> entries(env.entries().begin(),
                                     env.entries().end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    std::vector<Binding> fewer = entries;
    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
    out.emplace_back(std::move(fewer));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (const Type& b : topped_variants(entries[i].bound)) {
      std::vector<Binding> smaller = entries;
      smaller[i].bound = b;
      out.emplace_back(std::move(smaller));
    }
  }
  return out;
}

bool disagree(const CheckOutcome& a, const CheckOutcome& b) {
  return (a.is_derivable() && b.is_not_derivable()) ||
         (a.is_not_derivable() && b.is_derivable());
}

std::optional<std::pair<CheckOutcome, CheckOutcome>> compare(
    std::pair<SystemId, SystemId> systems, ScopeMode mode, Fuel fuel,
    const TypeEnv& env, const Type& s, const Type& t) {
  auto outcomes = std::make_pair(check(systems.first, mode, env, s, t, fuel),
                                 check(systems.second, mode, env, s, t, fuel));
  if (!disagree(outcomes.first, outcomes.second)) return std::nullopt;
  return outcomes;
}

std::vector<Binding> permuted_entries(Rng& rng, std::vector<Binding> entries) {
  for (std::size_t i = entries.size(); i > 1; --i) {
    std::swap(entries[i - 1], entries[rng.below(i)]);
  }
  return entries;
}

std::string outcome_text(const CheckOutcome& o) {
  return std::string(outcome_name(o.status()));
}

}  // namespace

Counterexample shrink_instance(Counterexample c, const Recheck& recheck) {
  auto attempt = [&](const TypeEnv& env, const Type& s, const Type& t) {
    std::optional<std::pair<CheckOutcome, CheckOutcome>> still;
    try {
      still = recheck(env, s, t);
    } catch (const Error&) {
      return false;
    }
    if (!still) return false;
    c.env = env;
    c.left = s;
    c.right = t;
    c.outcomes = std::move(*still);
    return true;
  };

  bool progress = true;
  while (progress) {
    progress = false;
    for (const TypeEnv& env : shrunk_envs(c.env)) {
      if (attempt(env, c.left, c.right)) {
        progress = true;
        break;
      }
    }
    if (progress) continue;
    for (const Type& s : topped_variants(c.left)) {
      if (attempt(c.env, s, c.right)) {
        progress = true;
        break;
      }
    }
    if (progress) continue;
    for (const Type& t : topped_variants(c.right)) {
      if (attempt(c.env, c.left, t)) {
        progress = true;
        break;
      }
    }
  }
  c.shrunk = true;
  return c;
}

DiffReport differential_run(const GenConfig& cfg,
                            std::pair<SystemId, SystemId> systems, Fuel fuel,
                            std::size_t trials) {
  DiffReport report;
  Recheck recheck = [&](const TypeEnv& env, const Type& s, const Type& t) {
    return compare(systems, cfg.mode, fuel, env, s, t);
  };
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(mix_seed(cfg.seed, i));
    Instance inst = gen_instance(rng, cfg);
    ++report.trials;
    CheckOutcome a =
        check(systems.first, cfg.mode, inst.env, inst.left, inst.right, fuel);
    CheckOutcome b =
        check(systems.second, cfg.mode, inst.env, inst.left, inst.right, fuel);
    if (a.is_fuel_exhausted() || b.is_fuel_exhausted()) {
      ++report.fuel_exhausted;
    } else if (a.status() == b.status()) {
      ++report.agree;
    } else {
      Counterexample c{inst.env,   inst.left,
                       inst.right, {std::move(a), std::move(b)},
                       false,      std::nullopt};
      report.disagree.push_back(shrink_instance(std::move(c), recheck));
    }
  }
  return report;
}

DiffReport permutation_run(const GenConfig& cfg, std::size_t trials,
                           Fuel fuel) {
  if (cfg.mode != ScopeMode::kLax) {
    throw ModeError("permutation_run requires Lax scoping");
  }
  DiffReport report;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(mix_seed(cfg.seed, i));
    Instance inst = gen_instance(rng, cfg);
    TypeEnv permuted(permuted_entries(
        rng, {inst.env.entries().begin(), inst.env.entries().end()}));
    ++report.trials;
    CheckOutcome a = check(SystemId::kOriginal, ScopeMode::kLax, inst.env,
                           inst.left, inst.right, fuel);
    CheckOutcome b = check(SystemId::kOriginal, ScopeMode::kLax, permuted,
                           inst.left, inst.right, fuel);
    if (a.is_fuel_exhausted() || b.is_fuel_exhausted()) {
      ++report.fuel_exhausted;
    } else if (a.status() == b.status()) {
      ++report.agree;
    } else {
      report.disagree.push_back(Counterexample{inst.env,
                                               inst.left,
                                               inst.right,
                                               {std::move(a), std::move(b)},
                                               false,
                                               std::move(permuted)});
    }
  }
  return report;
}

std::string render_report_text(const DiffReport& report) {
  std::ostringstream out;
  out << "trials: " << report.trials << "\n"
      << "agree: " << report.agree << "\n"
      << "fuel-exhausted: " << report.fuel_exhausted << "\n"
      << "disagreements: " << report.disagree.size() << "\n";
  for (const Counterexample& c : report.disagree) {
    out << "  " << render_env(c.env) << " |- " << render_type(c.left)
        << " <: " << render_type(c.right) << " : "
        << outcome_text(c.outcomes.first) << " vs "
        << outcome_text(c.outcomes.second) << (c.shrunk ? " (shrunk)" : "");
    if (c.permuted) out << " permuted " << render_env(*c.permuted);
    out << "\n";
  }
  return out.str();
}

std::string render_report_sexp(const DiffReport& report) {
  std::ostringstream out;
  out << "(diff-report (trials " << report.trials << ") (agree " << report.agree
      << ") (fuel-exhausted " << report.fuel_exhausted << ") (disagreements";
  for (const Counterexample& c : report.disagree) {
    out << " (counterexample "
        << serialize_judgment(Judgment{c.env, c.left, c.right}) << " (outcomes "
        << outcome_text(c.outcomes.first) << " "
        << outcome_text(c.outcomes.second) << ") (shrunk "
        << (c.shrunk ? "true" : "false") << ")";
    if (c.permuted) out << " (permuted " << serialize_env(*c.permuted) << ")";
    out << ")";
  }
  out << "))\n";
  return out.str();
}

}  // namespace fsk
