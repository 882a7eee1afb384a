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

#include "blendsem/error.h"

namespace blendsem {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural:
      return "structural error";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kParameter:
      return "parameter error";
    case ErrorKind::kConfiguration:
      return "configuration error";
    case ErrorKind::kParse:
      return "parse error";
    case ErrorKind::kInput:
      return "input error";
    case ErrorKind::kService:
      return "service error";
    case ErrorKind::kTraining:
      return "training error";
  }
  return "error";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kService:
      return kExitService;
    case ErrorKind::kTraining:
      return kExitInternal;
    default:
      return kExitValidation;
  }
}

}  // namespace blendsem
