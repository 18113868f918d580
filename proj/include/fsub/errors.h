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

#ifndef FSUB_ERRORS_H_
#define FSUB_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsk {

// Base class of every error raised by the kernel.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ReservedNameError : public Error {
 public:
  using Error::Error;
};

class DuplicateNameError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class IllFormedEnv : public Error {
 public:
  using Error::Error;
};

class UnknownVariable : public Error {
 public:
  using Error::Error;
};

class NotWellScoped : public Error {
 public:
  using Error::Error;
};

class JudgmentMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NameClash : public Error {
 public:
  using Error::Error;
};

// Raised by lax_to_strict; carries the premise-index path of the first node
// whose Strict proviso fails.
class ScopeViolation : public Error {
 public:
  ScopeViolation(const std::string& message, std::vector<std::size_t> path)
      : Error(message), path_(std::move(path)) {}

  const std::vector<std::size_t>& path() const { return path_; }

 private:
  std::vector<std::size_t> path_;
};

class DepthGuard : public Error {
 public:
  using Error::Error;
};

class ModeError : public Error {
 public:
  using Error::Error;
};

}  // namespace fsk

#endif  // FSUB_ERRORS_H_
