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

#include <map>
#include <set>
#include <string>
#include <utility>

#include "fsub/errors.h"
#include "fsub/testkit.h"

namespace fsk {

namespace {

using Scope = std::vector<TyVarName>;

class TypeUniverse {
 public:
  const std::vector<Type>& exact(const Scope& scope, std::size_t size) {
    auto key = std::make_pair(scope, size);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Type> out;
    if (size == 1) {
      out.push_back(Type::top());
      for (const TyVarName& v : scope) out.push_back(Type::var(v));
    } else if (size >= 3) {
      for (std::size_t first = 1; first + 1 < size; ++first) {
        std::size_t second = size - 1 - first;
        for (const Type& a : exact(scope, first)) {
          for (const Type& b : exact(scope, second)) {
            out.push_back(Type::arrow(a, b));
          }
        }
      }
      TyVarName binder = fresh_name(NameSet(scope.begin(), scope.end()));
      Scope inner = scope;
      inner.push_back(binder);
      for (std::size_t first = 1; first + 1 < size; ++first) {
        std::size_t second = size - 1 - first;
        for (const Type& bound : exact(scope, first)) {
          for (const Type& body : exact(inner, second)) {
            out.push_back(Type::forall(binder, bound, body));
          }
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  std::map<std::pair<Scope, std::size_t>, std::vector<Type>> memo_;
};

void collect_subterms(const Type& t, std::set<std::string>& seen,
                      std::vector<Type>& out) {
  if (seen.insert(serialize_type(t)).second) out.push_back(t);
  switch (t.kind()) {
    case Type::Kind::kTop:
    case Type::Kind::kVar:
      return;
    case Type::Kind::kArrow:
      collect_subterms(t.dom(), seen, out);
      collect_subterms(t.cod(), seen, out);
      return;
    case Type::Kind::kForall:
      collect_subterms(t.bound(), seen, out);
      collect_subterms(t.body(), seen, out);
      return;
  }
}

// Intermediate types the oracle offers SA-Tr-TVar.
std::vector<Type> middle_candidates(const TypeEnv& env, const Type& s,
                                    const Type& t) {
  std::set<std::string> seen;
  std::vector<Type> out;
  for (const Binding& b : env.entries()) collect_subterms(b.bound, seen, out);
  collect_subterms(s, seen, out);
  collect_subterms(t, seen, out);
  return out;
}

// Exhaustive application of the rules as stated, independent of the
// checker's dispatch.
class Oracle {
 public:
  Oracle(SystemId system, ScopeMode mode)
      : system_(system), strict_(mode == ScopeMode::kStrict) {}

  std::vector<Derivation> all(const TypeEnv& env, const Type& s, const Type& t,
                              std::size_t depth) {
    std::vector<Derivation> out;
    if (depth == 0) return out;
    Judgment goal{env, s, t};
    bool original = system_ == SystemId::kOriginal;

    if (t.is_top() && (!strict_ || well_scoped_type(s, env))) {
      out.emplace_back(Rule::kTop, goal);
    }
    if (s.is_var() && t.is_var() && s.name() == t.name() &&
        (!strict_ || env.contains(s.name()))) {
      out.emplace_back(Rule::kReflTVar, goal);
    }
    const Type* bound = s.is_var() ? env.lookup(s.name()) : nullptr;
    if (original && bound != nullptr) {
      for (Derivation& p : all(env, *bound, t, depth - 1)) {
        out.emplace_back(Rule::kTransTVar, goal, std::vector{std::move(p)});
      }
    }
    if (s.is_arrow() && t.is_arrow()) {
      auto doms = all(env, t.dom(), s.dom(), depth - 1);
      if (!doms.empty()) {
        auto cods = all(env, s.cod(), t.cod(), depth - 1);
        for (const Derivation& a : doms) {
          for (const Derivation& b : cods) {
            out.emplace_back(Rule::kArrow, goal, std::vector{a, b});
          }
        }
      }
    }
    if (s.is_forall() && t.is_forall() &&
        (!strict_ || well_scoped_type(t.bound(), env))) {
      auto bounds = all(env, t.bound(), s.bound(), depth - 1);
      if (!bounds.empty()) {
        TyVarName z = fresh_name(binder_avoid_set(env, s, t));
        auto bodies = all(env.extended(Binding{z, t.bound()}), open_body(s, z),
                          open_body(t, z), depth - 1);
        for (const Derivation& a : bounds) {
          for (const Derivation& b : bodies) {
            out.emplace_back(Rule::kAll, goal, std::vector{a, b});
          }
        }
      }
    }
    if (!original && bound != nullptr && alpha_eq(*bound, t)) {
      out.emplace_back(Rule::kHyp, goal);
    }
    if (!original && s.is_var()) {
      for (const Type& u : middle_candidates(env, s, t)) {
        auto heads = all(env, s, u, depth - 1);
        if (heads.empty()) continue;
        auto tails = all(env, u, t, depth - 1);
        for (const Derivation& a : heads) {
          for (const Derivation& b : tails) {
            out.emplace_back(Rule::kTrTVar, goal, std::vector{a, b});
          }
        }
      }
    }
    return out;
  }

  bool exists(const TypeEnv& env, const Type& s, const Type& t,
              std::size_t depth) {
    if (depth == 0) return false;
    std::string key = std::to_string(depth) + serialize_env(env) +
                      serialize_type(s) + "|" + serialize_type(t);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool found = exists_uncached(env, s, t, depth);
    memo_.emplace(std::move(key), found);
    return found;
  }

 private:
  bool exists_uncached(const TypeEnv& env, const Type& s, const Type& t,
                       std::size_t depth) {
    bool original = system_ == SystemId::kOriginal;
    if (t.is_top() && (!strict_ || well_scoped_type(s, env))) return true;
    if (s.is_var() && t.is_var() && s.name() == t.name() &&
        (!strict_ || env.contains(s.name()))) {
      return true;
    }
    const Type* bound = s.is_var() ? env.lookup(s.name()) : nullptr;
    if (original && bound != nullptr && exists(env, *bound, t, depth - 1)) {
      return true;
    }
    if (s.is_arrow() && t.is_arrow() &&
        exists(env, t.dom(), s.dom(), depth - 1) &&
        exists(env, s.cod(), t.cod(), depth - 1)) {
      return true;
    }
    if (s.is_forall() && t.is_forall() &&
        (!strict_ || well_scoped_type(t.bound(), env)) &&
        exists(env, t.bound(), s.bound(), depth - 1)) {
      TyVarName z = fresh_name(binder_avoid_set(env, s, t));
      if (exists(env.extended(Binding{z, t.bound()}), open_body(s, z),
                 open_body(t, z), depth - 1)) {
        return true;
      }
    }
    if (!original && bound != nullptr && alpha_eq(*bound, t)) return true;
    if (!original && s.is_var()) {
      for (const Type& u : middle_candidates(env, s, t)) {
        if (exists(env, s, u, depth - 1) && exists(env, u, t, depth - 1)) {
          return true;
        }
      }
    }
    return false;
  }

  SystemId system_;
  bool strict_;
  std::map<std::string, bool> memo_;
};

void require_depth(std::size_t depth) {
  if (depth > kOracleDepthGuard) {
    throw DepthGuard("oracle depth " + std::to_string(depth) +
                     " exceeds the guard of " +
                     std::to_string(kOracleDepthGuard));
  }
}

}  // namespace

std::vector<Type> enumerate_types(const std::vector<TyVarName>& scope,
                                  std::size_t max_size) {
  TypeUniverse universe;
  std::vector<Type> out;
  for (std::size_t size = 1; size <= max_size; ++size) {
    const auto& layer = universe.exact(scope, size);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::vector<TypeEnv> enumerate_envs(std::size_t max_len,
                                    std::size_t max_bound_size) {
  std::vector<TyVarName> names;
  for (std::size_t i = 0; i < max_len; ++i) {
    names.push_back(TyVarName(std::string(1, static_cast<char>('A' + i))));
  }
  std::vector<TypeEnv> out{TypeEnv()};
  std::vector<TypeEnv> layer{TypeEnv()};
  for (std::size_t i = 0; i < max_len; ++i) {
    std::vector<TyVarName> scope(names.begin(), names.begin() + i);
    std::vector<Type> bounds = enumerate_types(scope, max_bound_size);
    std::vector<TypeEnv> next;
    for (const TypeEnv& env : layer) {
      for (const Type& b : bounds) next.push_back(env.extended({names[i], b}));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<Derivation> enumerate_oracle(SystemId system, ScopeMode mode,
                                         const TypeEnv& env, const Type& s,
                                         const Type& t, std::size_t depth) {
  require_depth(depth);
  return Oracle(system, mode).all(env, s, t, depth);
}

bool oracle_derivable(SystemId system, ScopeMode mode, const TypeEnv& env,
                      const Type& s, const Type& t, std::size_t depth) {
  require_depth(depth);
  return Oracle(system, mode).exists(env, s, t, depth);
}

}  // namespace fsk
