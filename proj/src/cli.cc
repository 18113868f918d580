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

#include "fsub/cli.h"

#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsub/checker.h"
#include "fsub/errors.h"
#include "fsub/rules.h"
#include "fsub/syntax.h"
#include "fsub/testkit.h"
#include "fsub/transforms.h"

namespace fsk {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Config {
  std::string system = "original";
  std::string against = "variant";
  std::string scoping = "strict";
  std::uint64_t fuel = kDefaultFuel.remaining;
  std::uint64_t seed = 0;
  std::size_t trials = 10000;
  std::size_t max_type_size = GenConfig{}.max_type_size;
  std::size_t max_env_len = GenConfig{}.max_env_len;
  std::string format = "text";
  std::string report_path;
  std::vector<std::string> args;
};

SystemId system_from(const std::string& name) {
  if (name == "original") return SystemId::kOriginal;
  if (name == "variant") return SystemId::kVariant;
  return SystemId::kVariantPlus;
}

ScopeMode mode_from(const std::string& name) {
  return name == "lax" ? ScopeMode::kLax : ScopeMode::kStrict;
}

class Session {
 public:
  Session(const Config& cfg, std::istream& in, std::ostream& out)
      : cfg_(cfg), in_(in), out_(out) {}

  void arity(std::size_t lo, std::size_t hi) const {
    std::size_t n = cfg_.args.size();
    if (n < lo || n > hi) {
      std::string want = lo == hi
                             ? std::to_string(lo)
                             : std::to_string(lo) + " to " + std::to_string(hi);
      throw UsageError("expected " + want + " arguments, found " +
                       std::to_string(n));
    }
  }

  std::string file(const std::string& path) {
    if (path == "-") {
      return std::string(std::istreambuf_iterator<char>(in_), {});
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(f), {});
  }

  // Inline text, or the contents of FILE for `@FILE`.
  std::string inline_text(std::size_t i) {
    const std::string& a = cfg_.args.at(i);
    if (!a.empty() && a.front() == '@') {
      std::string text = file(a.substr(1));
      while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
        text.pop_back();
      }
      return text;
    }
    return a;
  }

  TypeEnv env(std::size_t i) { return parse_env(inline_text(i)); }
  Type type(std::size_t i) { return parse_type(inline_text(i)); }
  Derivation derivation(std::size_t i) {
    return parse_derivation(file(cfg_.args.at(i)));
  }

  SystemId system() const { return system_from(cfg_.system); }
  ScopeMode mode() const { return mode_from(cfg_.scoping); }
  bool sexp() const { return cfg_.format == "sexp"; }

  void emit(const Derivation& d) {
    if (sexp()) {
      out_ << serialize_derivation(d) << "\n";
    } else {
      render_tree(d, 0);
    }
  }

  static int outcome_code(const CheckOutcome& o) {
    if (o.is_derivable()) return kExitDerivable;
    if (o.is_not_derivable()) return kExitNotDerivable;
    return kExitFuelExhausted;
  }

  int check_cmd(bool derivation_only) {
    arity(3, 3);
    CheckOutcome o =
        check(system(), mode(), env(0), type(1), type(2), Fuel{cfg_.fuel});
    if (!derivation_only || !o.is_derivable()) {
      out_ << outcome_name(o.status()) << "\n";
    }
    if (o.is_derivable() && (derivation_only || sexp())) emit(o.derivation());
    return outcome_code(o);
  }

  int validate_cmd() {
    arity(1, 1);
    ValidationReport r = validate_derivation(derivation(0), system(), mode());
    out_ << (r.ok ? "valid" : "invalid") << "\n";
    for (const ValidationFailure& f : r.failures) {
      out_ << render_failure(f) << "\n";
    }
    return r.ok ? kExitDerivable : kExitInvalid;
  }

  int transit_cmd() {
    arity(2, 2);
    Derivation d1 = derivation(0);
    Derivation d2 = derivation(1);
    emit(system() == SystemId::kOriginal
             ? transitivity_original(d1, d2, mode())
             : transitivity_variant(d1, d2, mode()));
    return kExitDerivable;
  }

  int narrow_cmd() {
    arity(6, 6);
    EnvSplit split{env(0), Binding{TyVarName(inline_text(1)), type(2)}, env(3)};
    Derivation d = derivation(4);
    Derivation d_p = derivation(5);
    emit(system() == SystemId::kOriginal
             ? narrowing_original(split, d, d_p, mode())
             : narrowing_variant(split, d, d_p, mode()));
    return kExitDerivable;
  }

  int translate_cmd() {
    arity(2, 2);
    const std::string& direction = cfg_.args[0];
    if (direction != "to-variant" && direction != "to-original") {
      throw UsageError(
          "translate direction must be to-variant or "
          "to-original, found " +
          direction);
    }
    Derivation d = derivation(1);
    emit(direction == "to-variant" ? orig_to_variant(d, mode())
                                   : variant_to_orig(d, mode()));
    return kExitDerivable;
  }

  int reflexivity_cmd() {
    arity(2, 2);
    emit(reflexivity(env(0), type(1), mode()));
    return kExitDerivable;
  }

  int oracle_cmd() {
    arity(3, 4);
    std::size_t depth = 8;
    if (cfg_.args.size() == 4) {
      try {
        depth = std::stoul(cfg_.args[3]);
      } catch (const std::exception&) {
        throw UsageError("depth must be a nonnegative integer, found " +
                         cfg_.args[3]);
      }
    }
    std::vector<Derivation> all =
        enumerate_oracle(system(), mode(), env(0), type(1), type(2), depth);
    if (sexp()) {
      out_ << "(derivations";
      for (const Derivation& d : all) out_ << " " << serialize_derivation(d);
      out_ << ")\n";
    } else {
      out_ << "derivations: " << all.size() << "\n";
      for (const Derivation& d : all) out_ << serialize_derivation(d) << "\n";
    }
    return all.empty() ? kExitNotDerivable : kExitDerivable;
  }

  GenConfig gen_config(ScopeMode mode) const {
    GenConfig g;
    g.seed = cfg_.seed;
    g.max_type_size = cfg_.max_type_size;
    g.max_env_len = cfg_.max_env_len;
    g.mode = mode;
    return g;
  }

  int report(const DiffReport& r) {
    std::string text = sexp() ? render_report_sexp(r) : render_report_text(r);
    out_ << text;
    if (!cfg_.report_path.empty()) {
      std::ofstream f(cfg_.report_path, std::ios::binary);
      if (!f) throw InvalidInput("cannot write " + cfg_.report_path);
      f << render_report_sexp(r);
    }
    return r.disagree.empty() ? kExitDerivable : kExitNotDerivable;
  }

  int fuzz_cmd() {
    arity(0, 0);
    return report(differential_run(gen_config(mode()),
                                   {system(), system_from(cfg_.against)},
                                   Fuel{cfg_.fuel}, cfg_.trials));
  }

  int permute_cmd(bool scoping_given) {
    arity(0, 0);
    ScopeMode m = scoping_given ? mode() : ScopeMode::kLax;
    return report(permutation_run(gen_config(m), cfg_.trials, Fuel{cfg_.fuel}));
  }

 private:
  void render_tree(const Derivation& d, std::size_t depth) {
    out_ << std::string(2 * depth, ' ') << rule_tag(d.rule()) << "  "
         << render_env(d.env()) << " |- " << render_type(d.left())
         << " <: " << render_type(d.right()) << "\n";
    for (const Derivation& p : d.premises()) render_tree(p, depth + 1);
  }

  const Config& cfg_;
  std::istream& in_;
  std::ostream& out_;
};

}  // namespace

int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Config cfg;
  CLI::App app{"Subtyping kernel for F-sub with bounded quantification",
               "fsub"};
  app.require_subcommand(1);
  const std::vector<std::string> kSystems{"original", "variant",
                                          "variant-plus"};

  CLI::Option* scoping = nullptr;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--system", cfg.system, "Rule system")
        ->check(CLI::IsMember(kSystems));
    scoping = sub->add_option("--scoping", cfg.scoping, "Scoping discipline")
                  ->check(CLI::IsMember({"strict", "lax"}));
    sub->add_option("--fuel", cfg.fuel, "Search budget in goals")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "sexp"}));
    sub->add_option("args", cfg.args, "Command arguments");
  };
  auto harness = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Base seed");
    sub->add_option("--trials", cfg.trials, "Number of trials")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-type-size", cfg.max_type_size,
                    "Node budget per generated type")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-env-len", cfg.max_env_len,
                    "Entries per generated environment");
    sub->add_option("--report", cfg.report_path,
                    "Also write the s-expression report to this file");
  };

  struct Command {
    const char* name;
    const char* help;
    std::function<int(Session&)> action;
  };
  bool scoping_given = false;
  std::vector<Command> commands{
      {"check", "check ENV S T", [](Session& s) { return s.check_cmd(false); }},
      {"derive", "derive ENV S T: print the derivation found",
       [](Session& s) { return s.check_cmd(true); }},
      {"validate", "validate D", [](Session& s) { return s.validate_cmd(); }},
      {"transit", "transit D1 D2: compose by transitivity",
       [](Session& s) { return s.transit_cmd(); }},
      {"narrow", "narrow ENV1 X Q ENV2 D DP: narrow the bound of X",
       [](Session& s) { return s.narrow_cmd(); }},
      {"translate", "translate (to-variant|to-original) D",
       [](Session& s) { return s.translate_cmd(); }},
      {"reflexivity", "reflexivity ENV T",
       [](Session& s) { return s.reflexivity_cmd(); }},
      {"oracle", "oracle ENV S T [DEPTH]: enumerate derivations",
       [](Session& s) { return s.oracle_cmd(); }},
      {"fuzz", "fuzz: differential run of --system against --against",
       [](Session& s) { return s.fuzz_cmd(); }},
      {"permute", "permute: Lax permutation-invariance run",
       [&](Session& s) { return s.permute_cmd(scoping_given); }},
  };
  std::vector<std::pair<CLI::App*, CLI::Option*>> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    common(sub);
    if (std::string_view(c.name) == "fuzz" ||
        std::string_view(c.name) == "permute") {
      harness(sub);
    }
    if (std::string_view(c.name) == "fuzz") {
      sub->add_option("--against", cfg.against, "Second rule system")
          ->check(CLI::IsMember(kSystems));
    }
    subs.emplace_back(sub, scoping);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitDerivable;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitDerivable;
    }
    err << "fsub: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i].first->parsed()) continue;
      scoping_given = subs[i].second->count() > 0;
      Session session(cfg, in, out);
      return commands[i].action(session);
    }
    err << "fsub: no command\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "fsub: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ModeError& e) {
    err << "fsub: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "fsub: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace fsk
