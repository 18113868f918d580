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

// Metatheory as derivation-to-derivation constructions: reflexivity,
// weakening, transitivity and narrowing in both systems, admissibility of the
// extra rule, translations between the systems, and lax-to-strict transfer.
//
// Every operation is deterministic. With TransformOptions::check_contracts
// set (the default), inputs are validated before the construction runs and
// the output is re-validated against its advertised system and mode.

#ifndef FSUB_TRANSFORMS_H_
#define FSUB_TRANSFORMS_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "fsub/rules.h"
#include "fsub/syntax.h"

namespace fsk {

// Gamma1, X <: Q, Gamma2.
struct EnvSplit {
  TypeEnv prefix;
  Binding pivot;
  TypeEnv suffix;

  // Throws InvalidInput when `name` is not bound in `env`.
  static EnvSplit at(const TypeEnv& env, const TyVarName& name);
  // Throws DuplicateNameError.
  TypeEnv joined() const;
};

// Termination measure of the mutually recursive Original constructions:
// size of the cut type, then transitivity (0) below narrowing (1), then the
// height of the derivation being recursed on.
struct Measure {
  std::size_t cut_size = 0;
  int phase = 0;
  std::size_t height = 0;

  friend auto operator<=>(const Measure&, const Measure&) = default;
};

// Call-trace sink for audits. Each recursive construction step appends one
// Call; the counters summarise the properties the audits look for.
struct TransformTrace {
  struct Call {
    std::string_view op;
    Measure measure;
    std::optional<std::size_t> parent;
    bool variable_headed = false;
  };

  std::vector<Call> calls;
  // Calls whose measure is not strictly below the measure of a parent call in
  // the same recursion family.
  std::size_t measure_violations = 0;
  // Calls issued from a transitivity_variant frame whose left derivation
  // concludes a variable on the left.
  std::size_t variable_headed_descents = 0;
  std::size_t transitivity_variant_calls = 0;
};

struct TransformOptions {
  bool check_contracts = true;
  TransformTrace* trace = nullptr;
};

// env |- t <: t in the Original system. Throws NotWellScoped in Strict mode
// when t is not well-scoped in env.
Derivation reflexivity(const TypeEnv& env, const Type& t, ScopeMode mode);

// Transports `d` to `wider`, which must contain d's environment as a
// subsequence. SA-All binders that clash with `wider` are re-freshened.
Derivation weakening(const Derivation& d, const TypeEnv& wider, SystemId system,
                     ScopeMode mode, const TransformOptions& options = {});

// From Gamma |- S <: Q and Gamma |- Q <: T, a derivation of Gamma |- S <: T.
Derivation transitivity_original(const Derivation& d1, const Derivation& d2,
                                 ScopeMode mode,
                                 const TransformOptions& options = {});

// From Gamma1, X <: Q, Gamma2 |- M <: N and Gamma1 |- P <: Q, a derivation of
// Gamma1, X <: P, Gamma2 |- M <: N.
Derivation narrowing_original(const EnvSplit& split, const Derivation& d,
                              const Derivation& d_p, ScopeMode mode,
                              const TransformOptions& options = {});

// Variant-system transitivity. A variable-headed left derivation is composed
// with a single SA-Tr-TVar node without being inspected.
Derivation transitivity_variant(const Derivation& d1, const Derivation& d2,
                                ScopeMode mode,
                                const TransformOptions& options = {});

// Variant-system narrowing, routed through extra_rule_admissible and never
// through transitivity.
Derivation narrowing_variant(const EnvSplit& split, const Derivation& d,
                             const Derivation& d_p, ScopeMode mode,
                             const TransformOptions& options = {});

// From Gamma1, X <: U, Gamma2 |- X <: V and Gamma1, X <: V, Gamma2 |- M <: N,
// an SA-Extra-free Variant derivation of Gamma1, X <: U, Gamma2 |- M <: N.
Derivation extra_rule_admissible(const Derivation& d_xv, const Derivation& d_mn,
                                 ScopeMode mode,
                                 const TransformOptions& options = {});

Derivation orig_to_variant(const Derivation& d, ScopeMode mode,
                           const TransformOptions& options = {});
Derivation variant_to_orig(const Derivation& d, ScopeMode mode,
                           const TransformOptions& options = {});

// Re-validates a Lax derivation of a Strict-scoped judgment under Strict
// rules. Throws ScopeViolation naming the first offending node.
Derivation lax_to_strict(const Derivation& d, SystemId system);

}  // namespace fsk

#endif  // FSUB_TRANSFORMS_H_
