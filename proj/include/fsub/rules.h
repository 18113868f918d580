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

// Judgments, the rule systems, derivation trees, node-level rule checking and
// the canonical derivation s-expression format.

#ifndef FSUB_RULES_H_
#define FSUB_RULES_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsub/syntax.h"

namespace fsk {

// Declaration order is the canonical rule order used for enumeration.
enum class Rule {
  kTop,        // SA-Top
  kReflTVar,   // SA-Refl-TVar
  kTransTVar,  // SA-Trans-TVar
  kArrow,      // SA-Arrow
  kAll,        // SA-All
  kHyp,        // SA-Hyp
  kTrTVar,     // SA-Tr-TVar
  kExtra,      // SA-Extra
};

inline constexpr Rule kAllRules[] = {
    Rule::kTop, Rule::kReflTVar, Rule::kTransTVar, Rule::kArrow,
    Rule::kAll, Rule::kHyp,      Rule::kTrTVar,    Rule::kExtra};

std::string_view rule_tag(Rule rule);
std::optional<Rule> rule_from_tag(std::string_view tag);
std::size_t rule_arity(Rule rule);

enum class SystemId { kOriginal, kVariant, kVariantPlus };

std::string_view system_name(SystemId system);
bool system_admits(SystemId system, Rule rule);

// env |- left <: right
struct Judgment {
  TypeEnv env;
  Type left;
  Type right;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

// Same environment names, alpha-equal bounds and endpoints.
bool judgment_alpha_eq(const Judgment& a, const Judgment& b);

// Immutable rule-labelled tree. Arity is not enforced on construction; an
// ill-formed node is reported by validate_derivation.
class Derivation {
 public:
  Derivation(Rule rule, Judgment conclusion,
             std::vector<Derivation> premises = {});

  Rule rule() const;
  const Judgment& conclusion() const;
  std::span<const Derivation> premises() const;
  const Derivation& premise(std::size_t i) const { return premises()[i]; }

  const TypeEnv& env() const { return conclusion().env; }
  const Type& left() const { return conclusion().left; }
  const Type& right() const { return conclusion().right; }

  std::size_t height() const;
  std::size_t node_count() const;

  friend bool operator==(const Derivation& a, const Derivation& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

// Every environment name, free variable of an environment bound and free
// variable of an endpoint, over all nodes.
NameSet derivation_names(const Derivation& d);
// True iff some node carries `rule`.
bool uses_rule(const Derivation& d, Rule rule);
// Rule tags in preorder; compares derivations up to binder names.
std::vector<Rule> rule_shape(const Derivation& d);

struct ValidationFailure {
  std::vector<std::size_t> path;
  std::string reason;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationFailure> failures;
};

// Checks every node instance against `system` under `mode` and reports all
// failures, each located by its premise-index path from the root.
ValidationReport validate_derivation(const Derivation& d, SystemId system,
                                     ScopeMode mode);

std::string render_failure(const ValidationFailure& failure);

// S-expression forms.
std::string serialize_type(const Type& t);
std::string serialize_env(const TypeEnv& env);
std::string serialize_judgment(const Judgment& j);
std::string serialize_derivation(const Derivation& d);

// Throws ParseError, or ArityError when a premise count mismatches its tag.
Derivation parse_derivation(std::string_view text);

}  // namespace fsk

#endif  // FSUB_RULES_H_
