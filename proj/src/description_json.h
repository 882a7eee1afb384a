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

// JSON plumbing shared by the teacher and the target codec. Not installed.

#ifndef BLENDSEM_SRC_DESCRIPTION_JSON_H_
#define BLENDSEM_SRC_DESCRIPTION_JSON_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blendsem/description.h"
#include "blendsem/target_codec.h"
#include "json.hpp"

namespace blendsem::internal {

// Strict: every deviation throws ValidationError naming the field.
// Lenient (repairs != nullptr): deviations are fixed and recorded.
SemanticDescription description_from_json(const nlohmann::json& j,
                                          std::vector<Repair>* repairs);

// Span [begin, end) of the first balanced {...} starting at or after `from`
// that parses as a JSON object, honoring string literals and escapes.
struct ObjectSpan {
  std::size_t begin;
  std::size_t end;
  nlohmann::json value;
};
std::optional<ObjectSpan> find_first_object(std::string_view text,
                                            std::size_t from = 0);

}  // namespace blendsem::internal

#endif  // BLENDSEM_SRC_DESCRIPTION_JSON_H_
