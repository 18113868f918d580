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

// Fuel-bounded decision procedures for the Original and Variant systems.

#ifndef FSUB_CHECKER_H_
#define FSUB_CHECKER_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "fsub/rules.h"
#include "fsub/syntax.h"

namespace fsk {

// Budget of rule-node expansions; one unit is spent per goal attempted.
struct Fuel {
  std::uint64_t remaining = 1000;
};

inline constexpr Fuel kDefaultFuel{1000};

class CheckOutcome {
 public:
  enum class Status { kDerivable, kNotDerivable, kFuelExhausted };

  static CheckOutcome derivable(Derivation d) {
    return CheckOutcome(Status::kDerivable, std::move(d));
  }
  static CheckOutcome not_derivable() {
    return CheckOutcome(Status::kNotDerivable, std::nullopt);
  }
  static CheckOutcome fuel_exhausted() {
    return CheckOutcome(Status::kFuelExhausted, std::nullopt);
  }

  Status status() const { return status_; }
  bool is_derivable() const { return status_ == Status::kDerivable; }
  bool is_not_derivable() const { return status_ == Status::kNotDerivable; }
  bool is_fuel_exhausted() const { return status_ == Status::kFuelExhausted; }
  // Present iff is_derivable().
  const Derivation& derivation() const { return *derivation_; }

 private:
  CheckOutcome(Status status, std::optional<Derivation> d)
      : status_(status), derivation_(std::move(d)) {}

  Status status_;
  std::optional<Derivation> derivation_;
};

// "derivable", "not-derivable" or "fuel-exhausted".
std::string_view outcome_name(CheckOutcome::Status status);

// Searches for a derivation of env |- s <: t.
//
// Original: SA-Top, SA-Refl-TVar, SA-Trans-TVar (via the declared bound),
// then the structural rules, backtracking where rules overlap. Variant: the
// same with SA-Hyp before SA-Tr-TVar, whose intermediate type is the declared
// bound. VariantPlus is checked as Variant.
//
// Throws IllFormedEnv when `env` is not well-formed for `mode`, and
// UnknownVariable in Strict mode when s or t is not well-scoped.
CheckOutcome check(SystemId system, ScopeMode mode, const TypeEnv& env,
                   const Type& s, const Type& t, Fuel fuel = kDefaultFuel);

}  // namespace fsk

#endif  // FSUB_CHECKER_H_
