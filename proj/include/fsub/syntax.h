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

// Types and type environments of the F<: subtyping fragment: construction,
// concrete syntax, scoping, alpha-equivalence and fresh names.

#ifndef FSUB_SYNTAX_H_
#define FSUB_SYNTAX_H_

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fsk {

// A type variable name. Construction validates the identifier: letters,
// digits and underscores, not starting with a digit, and neither `Top` nor
// `All`.
class TyVarName {
 public:
  explicit TyVarName(std::string text);

  const std::string& text() const { return text_; }

  friend bool operator==(const TyVarName&, const TyVarName&) = default;
  friend std::strong_ordering operator<=>(const TyVarName& a,
                                          const TyVarName& b) {
    return a.text_ <=> b.text_;
  }

 private:
  std::string text_;
};

// True iff `text` is a legal, non-reserved variable name.
bool is_valid_name(std::string_view text);

using NameSet = std::set<TyVarName>;
using Renaming = std::map<TyVarName, TyVarName>;

// Immutable F<: type. Copies share structure.
class Type {
 public:
  enum class Kind { kVar, kTop, kArrow, kForall };

  static Type var(TyVarName name);
  static Type var(std::string name) { return var(TyVarName(std::move(name))); }
  static Type top();
  static Type arrow(Type dom, Type cod);
  static Type forall(TyVarName binder, Type bound, Type body);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::kVar; }
  bool is_top() const { return kind() == Kind::kTop; }
  bool is_arrow() const { return kind() == Kind::kArrow; }
  bool is_forall() const { return kind() == Kind::kForall; }

  // Variable name for kVar, binder for kForall.
  const TyVarName& name() const;
  const Type& dom() const;
  const Type& cod() const;
  const Type& bound() const;
  const Type& body() const;

  // Number of nodes.
  std::size_t size() const;

  // Structural equality; binders must match by name.
  friend bool operator==(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Binding {
  TyVarName name;
  Type bound;

  friend bool operator==(const Binding&, const Binding&) = default;
};

enum class ScopeMode { kStrict, kLax };

// Ordered environment with pairwise distinct names. Prefix scoping is not an
// invariant of the class; see env_well_formed.
class TypeEnv {
 public:
  TypeEnv() = default;
  // Throws DuplicateNameError.
  explicit TypeEnv(std::vector<Binding> entries);

  std::span<const Binding> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool contains(const TyVarName& name) const;
  std::optional<std::size_t> index_of(const TyVarName& name) const;
  // Declared bound of `name`, or nullptr when unbound.
  const Type* lookup(const TyVarName& name) const;

  NameSet names() const;
  // Free variables of all bounds.
  NameSet bound_free_vars() const;

  // Throws DuplicateNameError.
  TypeEnv extended(Binding binding) const;
  TypeEnv concat(const TypeEnv& suffix) const;
  // Same names in the same order, with the bound of `name` replaced.
  TypeEnv with_bound(const TyVarName& name, Type bound) const;
  TypeEnv prefix(std::size_t length) const;

  friend bool operator==(const TypeEnv&, const TypeEnv&) = default;

 private:
  std::vector<Binding> entries_;
};

// Concrete syntax.
Type parse_type(std::string_view text);
std::string render_type(const Type& t);
TypeEnv parse_env(std::string_view text);
std::string render_env(const TypeEnv& env);

NameSet free_vars(const Type& t);
bool well_scoped_type(const Type& t, const TypeEnv& env);
bool env_well_formed(const TypeEnv& env, ScopeMode mode);

bool alpha_eq(const Type& a, const Type& b);
// Same names in the same order and alpha-equal bounds.
bool env_alpha_eq(const TypeEnv& a, const TypeEnv& b);

// Least of X, X1, X2, ... not in `avoid`.
TyVarName fresh_name(const NameSet& avoid);
// `preferred` when it is not in `avoid`, otherwise fresh_name(avoid).
TyVarName pick_name(const TyVarName& preferred, const NameSet& avoid);

// Capture-avoiding renaming of free variables. Inner binders that would
// capture an image name are renamed deterministically.
Type rename_free(const Type& t, const Renaming& renaming);
Type rename_free(const Type& t, const TyVarName& from, const TyVarName& to);

// Names a new environment entry must avoid when it opens the binders of a
// pair of endpoint types under `env`: env names, free variables of env
// bounds, and free variables of both endpoints.
NameSet binder_avoid_set(const TypeEnv& env, const Type& left,
                         const Type& right);

// Common name for the binders of two Forall types under `env`: the left
// binder if legal, else the right binder, else a fresh name.
TyVarName choose_binder(const TypeEnv& env, const Type& left, const Type& right,
                        const NameSet& extra_avoid = {});

// Body of Forall `t` with its binder renamed to `name`.
Type open_body(const Type& t, const TyVarName& name);

}  // namespace fsk

#endif  // FSUB_SYNTAX_H_
