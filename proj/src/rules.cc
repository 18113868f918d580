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

#include <algorithm>
#include <cctype>
#include <utility>

#include "fsub/errors.h"

namespace fsk {

std::string_view rule_tag(Rule rule) {
  switch (rule) {
    case Rule::kTop:
      return "SA-Top";
    case Rule::kReflTVar:
      return "SA-Refl-TVar";
    case Rule::kTransTVar:
      return "SA-Trans-TVar";
    case Rule::kArrow:
      return "SA-Arrow";
    case Rule::kAll:
      return "SA-All";
    case Rule::kHyp:
      return "SA-Hyp";
    case Rule::kTrTVar:
      return "SA-Tr-TVar";
    case Rule::kExtra:
      return "SA-Extra";
  }
  return "?";
}

std::optional<Rule> rule_from_tag(std::string_view tag) {
  for (Rule r : kAllRules) {
    if (rule_tag(r) == tag) return r;
  }
  return std::nullopt;
}

std::size_t rule_arity(Rule rule) {
  switch (rule) {
    case Rule::kTop:
    case Rule::kReflTVar:
    case Rule::kHyp:
      return 0;
    case Rule::kTransTVar:
      return 1;
    case Rule::kArrow:
    case Rule::kAll:
    case Rule::kTrTVar:
    case Rule::kExtra:
      return 2;
  }
  return 0;
}

std::string_view system_name(SystemId system) {
  switch (system) {
    case SystemId::kOriginal:
      return "original";
    case SystemId::kVariant:
      return "variant";
    case SystemId::kVariantPlus:
      return "variant-plus";
  }
  return "?";
}

bool system_admits(SystemId system, Rule rule) {
  switch (rule) {
    case Rule::kTop:
    case Rule::kReflTVar:
    case Rule::kArrow:
    case Rule::kAll:
      return true;
    case Rule::kTransTVar:
      return system == SystemId::kOriginal;
    case Rule::kHyp:
    case Rule::kTrTVar:
      return system != SystemId::kOriginal;
    case Rule::kExtra:
      return system == SystemId::kVariantPlus;
  }
  return false;
}

bool judgment_alpha_eq(const Judgment& a, const Judgment& b) {
  return env_alpha_eq(a.env, b.env) && alpha_eq(a.left, b.left) &&
         alpha_eq(a.right, b.right);
}

struct Derivation::Node {
  Rule rule;
  Judgment conclusion;
  std::vector<Derivation> premises;
  std::size_t height;
  std::size_t count;
};

Derivation::Derivation(Rule rule, Judgment conclusion,
                       std::vector<Derivation> premises) {
  std::size_t height = 0;
  std::size_t count = 1;
  for (const Derivation& p : premises) {
    height = std::max(height, p.height());
    count += p.node_count();
  }
  node_ = std::make_shared<const Node>(Node{
      rule, std::move(conclusion), std::move(premises), height + 1, count});
}

Rule Derivation::rule() const { return node_->rule; }
const Judgment& Derivation::conclusion() const { return node_->conclusion; }
std::span<const Derivation> Derivation::premises() const {
  return node_->premises;
}
std::size_t Derivation::height() const { return node_->height; }
std::size_t Derivation::node_count() const { return node_->count; }

bool operator==(const Derivation& a, const Derivation& b) {
  if (a.node_ == b.node_) return true;
  if (a.rule() != b.rule() || a.node_count() != b.node_count() ||
      !(a.conclusion() == b.conclusion())) {
    return false;
  }
  auto pa = a.premises();
  auto pb = b.premises();
  return std::equal(pa.begin(), pa.end(), pb.begin(), pb.end());
}

NameSet derivation_names(const Derivation& d) {
  NameSet out = d.env().names();
  out.merge(d.env().bound_free_vars());
  out.merge(free_vars(d.left()));
  out.merge(free_vars(d.right()));
  for (const Derivation& p : d.premises()) out.merge(derivation_names(p));
  return out;
}

bool uses_rule(const Derivation& d, Rule rule) {
  if (d.rule() == rule) return true;
  return std::any_of(
      d.premises().begin(), d.premises().end(),
      [rule](const Derivation& p) { return uses_rule(p, rule); });
}

namespace {

void shape_into(const Derivation& d, std::vector<Rule>& out) {
  out.push_back(d.rule());
  for (const Derivation& p : d.premises()) shape_into(p, out);
}

}  // namespace

std::vector<Rule> rule_shape(const Derivation& d) {
  std::vector<Rule> out;
  shape_into(d, out);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

using Reason = std::optional<std::string>;

Reason expect_premise(const Derivation& premise, const TypeEnv& env,
                      const Type& left, const Type& right,
                      std::string_view which) {
  const Judgment& j = premise.conclusion();
  std::string w(which);
  if (!env_alpha_eq(j.env, env)) return w + " premise environment differs";
  if (!alpha_eq(j.left, left)) return w + " premise left type differs";
  if (!alpha_eq(j.right, right)) return w + " premise right type differs";
  return std::nullopt;
}

Reason check_top(const Derivation& d, ScopeMode mode) {
  if (!d.right().is_top()) return "right is not Top";
  if (mode == ScopeMode::kStrict && !well_scoped_type(d.left(), d.env())) {
    return "left not well-scoped";
  }
  return std::nullopt;
}

Reason check_refl(const Derivation& d, ScopeMode mode) {
  if (!d.left().is_var() || !d.right().is_var() ||
      d.left().name() != d.right().name()) {
    return "endpoints are not the same variable";
  }
  if (mode == ScopeMode::kStrict && !d.env().contains(d.left().name())) {
    return "variable not bound";
  }
  return std::nullopt;
}

Reason check_trans(const Derivation& d) {
  if (!d.left().is_var()) return "left is not a variable";
  const Type* bound = d.env().lookup(d.left().name());
  if (bound == nullptr) return "variable not bound";
  return expect_premise(d.premise(0), d.env(), *bound, d.right(), "first");
}

Reason check_arrow(const Derivation& d) {
  if (!d.left().is_arrow() || !d.right().is_arrow()) {
    return "endpoints are not both arrows";
  }
  if (Reason r = expect_premise(d.premise(0), d.env(), d.right().dom(),
                                d.left().dom(), "first")) {
    return r;
  }
  return expect_premise(d.premise(1), d.env(), d.left().cod(), d.right().cod(),
                        "second");
}

Reason check_all(const Derivation& d) {
  const Type& left = d.left();
  const Type& right = d.right();
  if (!left.is_forall() || !right.is_forall()) {
    return "endpoints are not both quantified";
  }
  if (Reason r = expect_premise(d.premise(0), d.env(), right.bound(),
                                left.bound(), "first")) {
    return r;
  }
  const Judgment& body = d.premise(1).conclusion();
  if (body.env.size() != d.env().size() + 1 ||
      !env_alpha_eq(body.env.prefix(d.env().size()), d.env())) {
    return "second premise environment does not extend the conclusion's";
  }
  const Binding& opened = body.env.entries().back();
  if (!alpha_eq(opened.bound, right.bound())) {
    return "second premise binds the wrong bound";
  }
  if (binder_avoid_set(d.env(), left, right).count(opened.name)) {
    return "binder '" + opened.name.text() + "' not fresh";
  }
  if (!alpha_eq(body.left, open_body(left, opened.name))) {
    return "second premise left type differs";
  }
  if (!alpha_eq(body.right, open_body(right, opened.name))) {
    return "second premise right type differs";
  }
  return std::nullopt;
}

Reason check_hyp(const Derivation& d) {
  if (!d.left().is_var()) return "left is not a variable";
  const Type* bound = d.env().lookup(d.left().name());
  if (bound == nullptr) return "variable not bound";
  if (!alpha_eq(*bound, d.right())) return "no matching hypothesis";
  return std::nullopt;
}

Reason check_tr(const Derivation& d) {
  if (!d.left().is_var()) return "left is not a variable";
  const Type& middle = d.premise(0).right();
  if (Reason r =
          expect_premise(d.premise(0), d.env(), d.left(), middle, "first")) {
    return r;
  }
  return expect_premise(d.premise(1), d.env(), middle, d.right(), "second");
}

Reason check_extra(const Derivation& d) {
  const Judgment& hyp = d.premise(0).conclusion();
  if (!env_alpha_eq(hyp.env, d.env())) {
    return "first premise environment differs";
  }
  if (!hyp.left.is_var() || !d.env().contains(hyp.left.name())) {
    return "first premise left is not a bound variable";
  }
  TypeEnv narrowed = d.env().with_bound(hyp.left.name(), hyp.right);
  return expect_premise(d.premise(1), narrowed, d.left(), d.right(), "second");
}

Reason check_node(const Derivation& d, SystemId system, ScopeMode mode) {
  std::size_t arity = rule_arity(d.rule());
  if (d.premises().size() != arity) {
    return "expected " + std::to_string(arity) + " premises, found " +
           std::to_string(d.premises().size());
  }
  if (!system_admits(system, d.rule())) return "rule not in system";
  if (!env_well_formed(d.env(), mode)) return "environment not well-formed";
  switch (d.rule()) {
    case Rule::kTop:
      return check_top(d, mode);
    case Rule::kReflTVar:
      return check_refl(d, mode);
    case Rule::kTransTVar:
      return check_trans(d);
    case Rule::kArrow:
      return check_arrow(d);
    case Rule::kAll:
      return check_all(d);
    case Rule::kHyp:
      return check_hyp(d);
    case Rule::kTrTVar:
      return check_tr(d);
    case Rule::kExtra:
      return check_extra(d);
  }
  return "unknown rule";
}

void validate_into(const Derivation& d, SystemId system, ScopeMode mode,
                   std::vector<std::size_t>& path,
                   std::vector<ValidationFailure>& out) {
  if (Reason r = check_node(d, system, mode)) {
    out.push_back({path, std::string(rule_tag(d.rule())) + ": " + *r});
  }
  for (std::size_t i = 0; i < d.premises().size(); ++i) {
    path.push_back(i);
    validate_into(d.premise(i), system, mode, path, out);
    path.pop_back();
  }
}

}  // namespace

ValidationReport validate_derivation(const Derivation& d, SystemId system,
                                     ScopeMode mode) {
  ValidationReport report;
  std::vector<std::size_t> path;
  validate_into(d, system, mode, path, report.failures);
  report.ok = report.failures.empty();
  return report;
}

std::string render_failure(const ValidationFailure& failure) {
  std::string out = "at [";
  for (std::size_t i = 0; i < failure.path.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(failure.path[i]);
  }
  out += "] ";
  out += failure.reason;
  return out;
}

// ---------------------------------------------------------------------------
// S-expressions

std::string serialize_type(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::kTop:
      return "Top";
    case Type::Kind::kVar:
      return "(var " + t.name().text() + ")";
    case Type::Kind::kArrow:
      return "(arrow " + serialize_type(t.dom()) + " " +
             serialize_type(t.cod()) + ")";
    case Type::Kind::kForall:
      return "(all " + t.name().text() + " " + serialize_type(t.bound()) + " " +
             serialize_type(t.body()) + ")";
  }
  return "";
}

std::string serialize_env(const TypeEnv& env) {
  std::string out = "(";
  bool first = true;
  for (const Binding& b : env.entries()) {
    if (!first) out += ' ';
    first = false;
    out += "(" + b.name.text() + " " + serialize_type(b.bound) + ")";
  }
  out += ")";
  return out;
}

std::string serialize_judgment(const Judgment& j) {
  return "(judgment " + serialize_env(j.env) + " " + serialize_type(j.left) +
         " " + serialize_type(j.right) + ")";
}

namespace {

void serialize_into(const Derivation& d, std::string& out) {
  out += '(';
  out += rule_tag(d.rule());
  out += ' ';
  out += serialize_judgment(d.conclusion());
  for (const Derivation& p : d.premises()) {
    out += ' ';
    serialize_into(p, out);
  }
  out += ')';
}

struct SExp {
  bool is_list = false;
  std::string atom;
  std::vector<SExp> items;
  std::size_t pos = 0;
};

class SExpReader {
 public:
  explicit SExpReader(std::string_view src) : src_(src) {}

  SExp read_top() {
    SExp e = read();
    skip_space();
    if (i_ != src_.size()) throw ParseError("trailing input", i_);
    return e;
  }

 private:
  SExp read() {
    skip_space();
    if (i_ >= src_.size()) throw ParseError("unexpected end of input", i_);
    SExp e;
    e.pos = i_;
    if (src_[i_] == '(') {
      e.is_list = true;
      ++i_;
      while (true) {
        skip_space();
        if (i_ >= src_.size()) throw ParseError("unbalanced '('", e.pos);
        if (src_[i_] == ')') {
          ++i_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (src_[i_] == ')') throw ParseError("unexpected ')'", i_);
    std::size_t start = i_;
    while (i_ < src_.size() && src_[i_] != '(' && src_[i_] != ')' &&
           !std::isspace(static_cast<unsigned char>(src_[i_]))) {
      ++i_;
    }
    e.atom = std::string(src_.substr(start, i_ - start));
    return e;
  }

  void skip_space() {
    while (i_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[i_]))) {
      ++i_;
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

TyVarName read_name(const SExp& e) {
  if (e.is_list) throw ParseError("expected a variable name", e.pos);
  if (e.atom == "Top" || e.atom == "All") {
    throw ReservedNameError("'" + e.atom + "' cannot be a variable");
  }
  if (!is_valid_name(e.atom)) {
    throw ParseError("malformed variable name '" + e.atom + "'", e.pos);
  }
  return TyVarName(e.atom);
}

bool headed(const SExp& e, std::string_view head, std::size_t count) {
  return e.is_list && e.items.size() == count && !e.items[0].is_list &&
         e.items[0].atom == head;
}

Type read_type(const SExp& e) {
  if (!e.is_list) {
    if (e.atom == "Top") return Type::top();
    throw ParseError("expected a type", e.pos);
  }
  if (headed(e, "var", 2)) return Type::var(read_name(e.items[1]));
  if (headed(e, "arrow", 3)) {
    return Type::arrow(read_type(e.items[1]), read_type(e.items[2]));
  }
  if (headed(e, "all", 4)) {
    return Type::forall(read_name(e.items[1]), read_type(e.items[2]),
                        read_type(e.items[3]));
  }
  throw ParseError("malformed type", e.pos);
}

TypeEnv read_env(const SExp& e) {
  if (!e.is_list) throw ParseError("expected an environment", e.pos);
  std::vector<Binding> entries;
  for (const SExp& b : e.items) {
    if (!b.is_list || b.items.size() != 2) {
      throw ParseError("malformed binding", b.pos);
    }
    entries.push_back(Binding{read_name(b.items[0]), read_type(b.items[1])});
  }
  return TypeEnv(std::move(entries));
}

Judgment read_judgment(const SExp& e) {
  if (!headed(e, "judgment", 4))
    throw ParseError("expected (judgment ...)", e.pos);
  return Judgment{read_env(e.items[1]), read_type(e.items[2]),
                  read_type(e.items[3])};
}

Derivation read_derivation(const SExp& e) {
  if (!e.is_list || e.items.size() < 2 || e.items[0].is_list) {
    throw ParseError("expected (TAG (judgment ...) ...)", e.pos);
  }
  std::optional<Rule> rule = rule_from_tag(e.items[0].atom);
  if (!rule) {
    throw ParseError("unknown rule tag '" + e.items[0].atom + "'", e.pos);
  }
  Judgment conclusion = read_judgment(e.items[1]);
  std::vector<Derivation> premises;
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    premises.push_back(read_derivation(e.items[i]));
  }
  if (premises.size() != rule_arity(*rule)) {
    throw ArityError(std::string(rule_tag(*rule)) + " takes " +
                     std::to_string(rule_arity(*rule)) + " premises, found " +
                     std::to_string(premises.size()) + " (offset " +
                     std::to_string(e.pos) + ")");
  }
  return Derivation(*rule, std::move(conclusion), std::move(premises));
}

}  // namespace

std::string serialize_derivation(const Derivation& d) {
  std::string out;
  serialize_into(d, out);
  return out;
}

Derivation parse_derivation(std::string_view text) {
  return read_derivation(SExpReader(text).read_top());
}

}  // namespace fsk
