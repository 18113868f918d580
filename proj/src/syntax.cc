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

#include "fsub/syntax.h"

#include <algorithm>
#include <cctype>
#include <utility>

#include "fsub/errors.h"

namespace fsk {

bool is_valid_name(std::string_view text) {
  if (text.empty() || text == "Top" || text == "All") return false;
  if (std::isdigit(static_cast<unsigned char>(text.front()))) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

TyVarName::TyVarName(std::string text) : text_(std::move(text)) {
  if (text_ == "Top" || text_ == "All") {
    throw ReservedNameError("'" + text_ + "' is reserved");
  }
  if (!is_valid_name(text_)) {
    throw ParseError("invalid variable name '" + text_ + "'", 0);
  }
}

struct Type::Node {
  Kind kind;
  std::optional<TyVarName> name;
  std::vector<Type> children;
  std::size_t size;
};

Type Type::var(TyVarName name) {
  return Type(
      std::make_shared<const Node>(Node{Kind::kVar, std::move(name), {}, 1}));
}

Type Type::top() {
  static const Type kTop(
      std::make_shared<const Node>(Node{Kind::kTop, std::nullopt, {}, 1}));
  return kTop;
}

Type Type::arrow(Type dom, Type cod) {
  std::size_t size = 1 + dom.size() + cod.size();
  return Type(std::make_shared<const Node>(Node{
      Kind::kArrow, std::nullopt, {std::move(dom), std::move(cod)}, size}));
}

Type Type::forall(TyVarName binder, Type bound, Type body) {
  std::size_t size = 1 + bound.size() + body.size();
  return Type(
      std::make_shared<const Node>(Node{Kind::kForall,
                                        std::move(binder),
                                        {std::move(bound), std::move(body)},
                                        size}));
}

Type::Kind Type::kind() const { return node_->kind; }
const TyVarName& Type::name() const { return *node_->name; }
const Type& Type::dom() const { return node_->children.at(0); }
const Type& Type::cod() const { return node_->children.at(1); }
const Type& Type::bound() const { return node_->children.at(0); }
const Type& Type::body() const { return node_->children.at(1); }
std::size_t Type::size() const { return node_->size; }

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Type::Kind::kTop:
      return true;
    case Type::Kind::kVar:
      return a.name() == b.name();
    case Type::Kind::kArrow:
      return a.dom() == b.dom() && a.cod() == b.cod();
    case Type::Kind::kForall:
      return a.name() == b.name() && a.bound() == b.bound() &&
             a.body() == b.body();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Environments

TypeEnv::TypeEnv(std::vector<Binding> entries) : entries_(std::move(entries)) {
  NameSet seen;
  for (const Binding& b : entries_) {
    if (!seen.insert(b.name).second) {
      throw DuplicateNameError("duplicate binding for '" + b.name.text() + "'");
    }
  }
}

bool TypeEnv::contains(const TyVarName& name) const {
  return index_of(name).has_value();
}

std::optional<std::size_t> TypeEnv::index_of(const TyVarName& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

const Type* TypeEnv::lookup(const TyVarName& name) const {
  auto i = index_of(name);
  return i ? &entries_[*i].bound : nullptr;
}

NameSet TypeEnv::names() const {
  NameSet out;
  for (const Binding& b : entries_) out.insert(b.name);
  return out;
}

NameSet TypeEnv::bound_free_vars() const {
  NameSet out;
  for (const Binding& b : entries_) out.merge(free_vars(b.bound));
  return out;
}

TypeEnv TypeEnv::extended(Binding binding) const {
  std::vector<Binding> entries = entries_;
  entries.push_back(std::move(binding));
  return TypeEnv(std::move(entries));
}

TypeEnv TypeEnv::concat(const TypeEnv& suffix) const {
  std::vector<Binding> entries = entries_;
  entries.insert(entries.end(), suffix.entries_.begin(), suffix.entries_.end());
  return TypeEnv(std::move(entries));
}

TypeEnv TypeEnv::with_bound(const TyVarName& name, Type bound) const {
  TypeEnv out = *this;
  for (Binding& b : out.entries_) {
    if (b.name == name) b.bound = bound;
  }
  return out;
}

TypeEnv TypeEnv::prefix(std::size_t length) const {
  TypeEnv out;
  out.entries_.assign(entries_.begin(),
                      entries_.begin() + std::min(length, entries_.size()));
  return out;
}

// ---------------------------------------------------------------------------
// Scoping, alpha-equivalence, freshness

namespace {

void collect_free(const Type& t, std::vector<TyVarName>& bound_stack,
                  NameSet& out) {
  switch (t.kind()) {
    case Type::Kind::kTop:
      return;
    case Type::Kind::kVar:
      if (std::find(bound_stack.begin(), bound_stack.end(), t.name()) ==
          bound_stack.end()) {
        out.insert(t.name());
      }
      return;
    case Type::Kind::kArrow:
      collect_free(t.dom(), bound_stack, out);
      collect_free(t.cod(), bound_stack, out);
      return;
    case Type::Kind::kForall:
      collect_free(t.bound(), bound_stack, out);
      bound_stack.push_back(t.name());
      collect_free(t.body(), bound_stack, out);
      bound_stack.pop_back();
      return;
  }
}

// Index of the innermost occurrence of `name` in `stack`, counted from the
// top; -1 when absent.
long binder_depth(const std::vector<TyVarName>& stack, const TyVarName& name) {
  for (std::size_t i = stack.size(); i-- > 0;) {
    if (stack[i] == name) return static_cast<long>(stack.size() - 1 - i);
  }
  return -1;
}

bool alpha_eq_under(const Type& a, const Type& b, std::vector<TyVarName>& sa,
                    std::vector<TyVarName>& sb) {
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case Type::Kind::kTop:
      return true;
    case Type::Kind::kVar: {
      long da = binder_depth(sa, a.name());
      long db = binder_depth(sb, b.name());
      if (da != db) return false;
      return da >= 0 || a.name() == b.name();
    }
    case Type::Kind::kArrow:
      return alpha_eq_under(a.dom(), b.dom(), sa, sb) &&
             alpha_eq_under(a.cod(), b.cod(), sa, sb);
    case Type::Kind::kForall: {
      if (!alpha_eq_under(a.bound(), b.bound(), sa, sb)) return false;
      sa.push_back(a.name());
      sb.push_back(b.name());
      bool eq = alpha_eq_under(a.body(), b.body(), sa, sb);
      sa.pop_back();
      sb.pop_back();
      return eq;
    }
  }
  return false;
}

}  // namespace

NameSet free_vars(const Type& t) {
  NameSet out;
  std::vector<TyVarName> stack;
  collect_free(t, stack, out);
  return out;
}

bool well_scoped_type(const Type& t, const TypeEnv& env) {
  for (const TyVarName& v : free_vars(t)) {
    if (!env.contains(v)) return false;
  }
  return true;
}

bool env_well_formed(const TypeEnv& env, ScopeMode mode) {
  // Name distinctness is a class invariant of TypeEnv.
  if (mode == ScopeMode::kLax) return true;
  NameSet seen;
  for (const Binding& b : env.entries()) {
    for (const TyVarName& v : free_vars(b.bound)) {
      if (!seen.count(v)) return false;
    }
    seen.insert(b.name);
  }
  return true;
}

bool alpha_eq(const Type& a, const Type& b) {
  std::vector<TyVarName> sa, sb;
  return alpha_eq_under(a, b, sa, sb);
}

bool env_alpha_eq(const TypeEnv& a, const TypeEnv& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.entries()[i].name != b.entries()[i].name ||
        !alpha_eq(a.entries()[i].bound, b.entries()[i].bound)) {
      return false;
    }
  }
  return true;
}

TyVarName fresh_name(const NameSet& avoid) {
  TyVarName candidate("X");
  for (std::size_t i = 1; avoid.count(candidate); ++i) {
    candidate = TyVarName("X" + std::to_string(i));
  }
  return candidate;
}

TyVarName pick_name(const TyVarName& preferred, const NameSet& avoid) {
  return avoid.count(preferred) ? fresh_name(avoid) : preferred;
}

Type rename_free(const Type& t, const Renaming& renaming) {
  if (renaming.empty()) return t;
  switch (t.kind()) {
    case Type::Kind::kTop:
      return t;
    case Type::Kind::kVar: {
      auto it = renaming.find(t.name());
      return it == renaming.end() ? t : Type::var(it->second);
    }
    case Type::Kind::kArrow:
      return Type::arrow(rename_free(t.dom(), renaming),
                         rename_free(t.cod(), renaming));
    case Type::Kind::kForall: {
      Type bound = rename_free(t.bound(), renaming);
      Renaming inner = renaming;
      inner.erase(t.name());
      NameSet body_free = free_vars(t.body());
      body_free.erase(t.name());
      NameSet images;
      bool capture = false;
      for (const TyVarName& v : body_free) {
        auto it = inner.find(v);
        const TyVarName& image = it == inner.end() ? v : it->second;
        capture = capture || image == t.name();
        images.insert(image);
      }
      TyVarName binder = t.name();
      if (capture) {
        NameSet avoid = images;
        avoid.insert(body_free.begin(), body_free.end());
        avoid.insert(t.name());
        binder = fresh_name(avoid);
        inner.insert_or_assign(t.name(), binder);
      }
      return Type::forall(binder, std::move(bound),
                          rename_free(t.body(), inner));
    }
  }
  return t;
}

Type rename_free(const Type& t, const TyVarName& from, const TyVarName& to) {
  if (from == to) return t;
  return rename_free(t, Renaming{{from, to}});
}

NameSet binder_avoid_set(const TypeEnv& env, const Type& left,
                         const Type& right) {
  NameSet avoid = env.names();
  avoid.merge(env.bound_free_vars());
  avoid.merge(free_vars(left));
  avoid.merge(free_vars(right));
  return avoid;
}

TyVarName choose_binder(const TypeEnv& env, const Type& left, const Type& right,
                        const NameSet& extra_avoid) {
  NameSet avoid = binder_avoid_set(env, left, right);
  avoid.insert(extra_avoid.begin(), extra_avoid.end());
  if (left.is_forall() && !avoid.count(left.name())) return left.name();
  if (right.is_forall() && !avoid.count(right.name())) return right.name();
  return fresh_name(avoid);
}

Type open_body(const Type& t, const TyVarName& name) {
  return rename_free(t.body(), t.name(), name);
}

// ---------------------------------------------------------------------------
// Concrete syntax

namespace {

enum class Tok {
  kName,
  kTop,
  kAll,
  kSub,
  kDot,
  kArrow,
  kLParen,
  kRParen,
  kComma,
  kEnd
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::kLParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::kRParen, ")", i++});
    } else if (c == '.') {
      out.push_back({Tok::kDot, ".", i++});
    } else if (c == ',') {
      out.push_back({Tok::kComma, ",", i++});
    } else if (src.substr(i, 2) == "<:") {
      out.push_back({Tok::kSub, "<:", i});
      i += 2;
    } else if (src.substr(i, 2) == "->") {
      out.push_back({Tok::kArrow, "->", i});
      i += 2;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (
          i < src.size() &&
          (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        ++i;
      }
      std::string word(src.substr(start, i - start));
      Tok kind = word == "Top"   ? Tok::kTop
                 : word == "All" ? Tok::kAll
                                 : Tok::kName;
      if (kind == Tok::kName && !is_valid_name(word)) {
        throw ParseError("malformed identifier '" + word + "'", start);
      }
      out.push_back({kind, std::move(word), start});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::kEnd, "", src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(lex(src)) {}

  Type type() {
    if (peek().kind == Tok::kAll) {
      advance();
      TyVarName binder = binder_name();
      expect(Tok::kSub, "'<:'");
      Type bound = type();
      expect(Tok::kDot, "'.'");
      Type body = type();
      return Type::forall(std::move(binder), std::move(bound), std::move(body));
    }
    Type dom = atom();
    if (peek().kind == Tok::kArrow) {
      advance();
      return Type::arrow(std::move(dom), type_no_forall());
    }
    return dom;
  }

  TypeEnv env() {
    std::vector<Binding> entries;
    if (peek().kind == Tok::kEnd) return TypeEnv();
    while (true) {
      TyVarName name = binder_name();
      expect(Tok::kSub, "'<:'");
      entries.push_back(Binding{std::move(name), type()});
      if (peek().kind != Tok::kComma) break;
      advance();
    }
    return TypeEnv(std::move(entries));
  }

  void finish() {
    if (peek().kind != Tok::kEnd) {
      throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    }
  }

 private:
  // The codomain of an arrow is `arr`, which cannot begin with `All`.
  Type type_no_forall() {
    if (peek().kind == Tok::kAll) {
      throw ParseError("'All' must be parenthesized here", peek().pos);
    }
    return type();
  }

  Type atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::kTop:
        advance();
        return Type::top();
      case Tok::kName: {
        Type t = Type::var(TyVarName(tok.text));
        advance();
        return t;
      }
      case Tok::kLParen: {
        advance();
        Type t = type();
        expect(Tok::kRParen, "')'");
        return t;
      }
      case Tok::kEnd:
        throw ParseError("unexpected end of input", tok.pos);
      default:
        throw ParseError("unexpected '" + tok.text + "'", tok.pos);
    }
  }

  TyVarName binder_name() {
    const Token& tok = peek();
    if (tok.kind == Tok::kTop || tok.kind == Tok::kAll) {
      throw ReservedNameError("'" + tok.text + "' cannot be bound (offset " +
                              std::to_string(tok.pos) + ")");
    }
    if (tok.kind != Tok::kName) {
      throw ParseError("expected a variable name", tok.pos);
    }
    TyVarName name(tok.text);
    advance();
    return name;
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      throw ParseError(std::string("expected ") + what, peek().pos);
    }
    advance();
  }

  const Token& peek() const { return tokens_[index_]; }
  void advance() {
    if (index_ + 1 < tokens_.size()) ++index_;
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

void render_into(const Type& t, std::string& out);

void render_atom(const Type& t, std::string& out) {
  if (t.is_arrow() || t.is_forall()) {
    out += '(';
    render_into(t, out);
    out += ')';
  } else {
    render_into(t, out);
  }
}

void render_into(const Type& t, std::string& out) {
  switch (t.kind()) {
    case Type::Kind::kTop:
      out += "Top";
      return;
    case Type::Kind::kVar:
      out += t.name().text();
      return;
    case Type::Kind::kArrow:
      render_atom(t.dom(), out);
      out += " -> ";
      if (t.cod().is_forall()) {
        render_atom(t.cod(), out);
      } else {
        render_into(t.cod(), out);
      }
      return;
    case Type::Kind::kForall:
      out += "All ";
      out += t.name().text();
      out += " <: ";
      render_into(t.bound(), out);
      out += " . ";
      render_into(t.body(), out);
      return;
  }
}

}  // namespace

Type parse_type(std::string_view text) {
  Parser parser(text);
  Type t = parser.type();
  parser.finish();
  return t;
}

std::string render_type(const Type& t) {
  std::string out;
  render_into(t, out);
  return out;
}

TypeEnv parse_env(std::string_view text) {
  Parser parser(text);
  TypeEnv env = parser.env();
  parser.finish();
  return env;
}

std::string render_env(const TypeEnv& env) {
  std::string out;
  for (const Binding& b : env.entries()) {
    if (!out.empty()) out += ", ";
    out += b.name.text();
    out += " <: ";
    out += render_type(b.bound);
  }
  return out;
}

}  // namespace fsk
