// Copyright 2026 The blendsem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLENDSEM_ERROR_H_
#define BLENDSEM_ERROR_H_

#include <stdexcept>
#include <string>

namespace blendsem {

// Every failure raised by the library derives from Error. The kind decides
// the process exit code used by the CLI.
enum class ErrorKind {
  kStructural,     // shape / dimension mismatch
  kValidation,     // value-level invariant violated
  kParameter,      // caller-supplied parameter out of range
  kConfiguration,  // missing or inconsistent configuration
  kParse,          // text could not be parsed at all
  kInput,          // referenced input (file, image) is missing
  kService,        // remote service unreachable or failing
  kTraining,       // numerical failure during optimization
};

const char* ToString(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& m)
      : Error(ErrorKind::kStructural, m) {}
};

// Carries the offending key (action name, field) when there is one.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m, std::string key = {})
      : Error(ErrorKind::kValidation, m), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& m)
      : Error(ErrorKind::kParameter, m) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m)
      : Error(ErrorKind::kConfiguration, m) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error(ErrorKind::kParse, m) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& m) : Error(ErrorKind::kInput, m) {}
};

class ServiceError : public Error {
 public:
  explicit ServiceError(const std::string& m)
      : Error(ErrorKind::kService, m) {}
};

class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& m)
      : Error(ErrorKind::kTraining, m) {}
};

// CLI exit codes: 0 success, 1 validation, 2 service, 3 internal.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitService = 2;
inline constexpr int kExitInternal = 3;

int ExitCodeFor(ErrorKind kind);

}  // namespace blendsem

#endif  // BLENDSEM_ERROR_H_
