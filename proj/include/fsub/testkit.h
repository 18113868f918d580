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

// Brute-force derivation oracle, seeded generators with shrinking, and the
// differential and permutation harnesses.

#ifndef FSUB_TESTKIT_H_
#define FSUB_TESTKIT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fsub/checker.h"
#include "fsub/rules.h"
#include "fsub/syntax.h"
#include "fsub/transforms.h"

namespace fsk {

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t max_type_size = 7;
  std::size_t max_env_len = 3;
  ScopeMode mode = ScopeMode::kStrict;
};

// splitmix64 finalizer of (seed ^ index); per-trial seeds are independent of
// scheduling.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Portable draws over std::mt19937_64. Reduction is by modulo so streams are
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform-ish in [0, n); n must be positive.
  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(next() % n);
  }
  bool percent(unsigned p) { return below(100) < p; }

 private:
  std::mt19937_64 engine_;
};

// Names X, X1, X2, ...; Strict draws each bound over its prefix, Lax over
// every name of the environment. Bounds use half the type-size budget.
TypeEnv gen_env(const GenConfig& cfg);
TypeEnv gen_env(Rng& rng, const GenConfig& cfg);

// At most cfg.max_type_size nodes, over env's names (and enclosing binders).
// Each node is a leaf with probability 40%, an arrow 30%, a quantifier 30%,
// until the budget forces a leaf.
Type gen_type(const GenConfig& cfg, const TypeEnv& env);
Type gen_type(Rng& rng, const TypeEnv& env, std::size_t max_size);

// Types related to `q` by construction: env |- q <: gen_supertype(...) and
// env |- gen_subtype(...) <: q are derivable. `depth` bounds nesting.
Type gen_supertype(Rng& rng, const TypeEnv& env, const Type& q,
                   std::size_t depth = 3);
Type gen_subtype(Rng& rng, const TypeEnv& env, const Type& q,
                 std::size_t depth = 3);

// A random valid derivation of env |- s <: t: the checker's search with the
// applicable rules tried in random order. nullopt when none is found within
// `fuel`.
std::optional<Derivation> gen_derivation(Rng& rng, SystemId system,
                                         ScopeMode mode, const TypeEnv& env,
                                         const Type& s, const Type& t,
                                         Fuel fuel = Fuel{300});

struct Instance {
  TypeEnv env;
  Type left;
  Type right;
};

// A third of instances are unrelated pairs, a third (s, supertype of s), a
// third (subtype of t, t).
Instance gen_instance(Rng& rng, const GenConfig& cfg);

struct TransitivityCase {
  Derivation left;   // Gamma |- S <: Q
  Derivation right;  // Gamma |- Q <: T
};

struct NarrowingCase {
  EnvSplit split;
  Derivation derivation;  // Gamma1, X <: Q, Gamma2 |- M <: N
  Derivation bound;       // Gamma1 |- P <: Q
};

struct ExtraRuleCase {
  Derivation x_below_v;  // Gamma1, X <: U, Gamma2 |- X <: V
  Derivation body;       // Gamma1, X <: V, Gamma2 |- M <: N
};

// Each returns nullopt when the drawn instance could not be derived.
std::optional<TransitivityCase> gen_transitivity_case(Rng& rng,
                                                      const GenConfig& cfg,
                                                      SystemId system);
std::optional<NarrowingCase> gen_narrowing_case(Rng& rng, const GenConfig& cfg,
                                                SystemId system);
std::optional<ExtraRuleCase> gen_extra_rule_case(Rng& rng,
                                                 const GenConfig& cfg);

// Every type over `scope` with at most `max_size` nodes. Quantifier binders
// are the least fresh name for the enclosing scope.
std::vector<Type> enumerate_types(const std::vector<TyVarName>& scope,
                                  std::size_t max_size);
// Every Strict environment over the names A, B, ... with at most `max_len`
// entries and bounds of at most `max_bound_size` nodes.
std::vector<TypeEnv> enumerate_envs(std::size_t max_len,
                                    std::size_t max_bound_size);

inline constexpr std::size_t kOracleDepthGuard = 12;

// All valid derivations of env |- s <: t of height at most `depth`, in rule
// order and then premise-recursively. Variant SA-Tr-TVar ranges over the
// subterms of the goal's environment bounds and endpoints. SA-Extra is never
// enumerated. Throws DepthGuard when depth exceeds kOracleDepthGuard.
std::vector<Derivation> enumerate_oracle(SystemId system, ScopeMode mode,
                                         const TypeEnv& env, const Type& s,
                                         const Type& t, std::size_t depth);

// Whether enumerate_oracle would return a nonempty sequence, memoized.
bool oracle_derivable(SystemId system, ScopeMode mode, const TypeEnv& env,
                      const Type& s, const Type& t, std::size_t depth);

struct Counterexample {
  TypeEnv env;
  Type left;
  Type right;
  std::pair<CheckOutcome, CheckOutcome> outcomes;
  bool shrunk = false;
  // Set by permutation_run: the permuted environment checked second.
  std::optional<TypeEnv> permuted;
};

struct DiffReport {
  std::size_t trials = 0;
  std::size_t agree = 0;
  std::vector<Counterexample> disagree;
  std::size_t fuel_exhausted = 0;
};

// Outcomes for an instance if it still disagrees, else nullopt.
using Recheck =
    std::function<std::optional<std::pair<CheckOutcome, CheckOutcome>>(
        const TypeEnv&, const Type&, const Type&)>;

// Greedy shrinking to a local minimum: drop environment entries, replace
// endpoint subterms by Top, replace bound subterms by Top.
Counterexample shrink_instance(Counterexample c, const Recheck& recheck);

DiffReport differential_run(const GenConfig& cfg,
                            std::pair<SystemId, SystemId> systems, Fuel fuel,
                            std::size_t trials);

// Lax only; throws ModeError for Strict configurations.
DiffReport permutation_run(const GenConfig& cfg, std::size_t trials, Fuel fuel);

std::string render_report_text(const DiffReport& report);
std::string render_report_sexp(const DiffReport& report);

}  // namespace fsk

#endif  // FSUB_TESTKIT_H_
