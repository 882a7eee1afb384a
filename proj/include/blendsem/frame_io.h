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

#ifndef BLENDSEM_FRAME_IO_H_
#define BLENDSEM_FRAME_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "blendsem/frame.h"

namespace blendsem {

// Frame files hold one record per frame with exactly the 61 canonical action
// names as fields, either as CSV (header row of names, any column order) or
// as line-delimited JSON objects keyed by name. Unknown, missing or duplicate
// names raise ValidationError naming the key.
std::vector<CoefficientFrame> read_frames_csv(std::istream& in);
std::vector<CoefficientFrame> read_frames_jsonl(std::istream& in);

// Dispatches on extension: .csv, otherwise line-delimited JSON.
std::vector<CoefficientFrame> read_frame_file(const std::filesystem::path& p);

// Header in registry order, shortest round-trip decimals.
void write_frames_csv(std::ostream& out,
                      const std::vector<CoefficientFrame>& frames);
void write_frames_jsonl(std::ostream& out,
                        const std::vector<CoefficientFrame>& frames);

// Writes `contents` to `path` through a temporary sibling and a rename, so a
// failed command never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace blendsem

#endif  // BLENDSEM_FRAME_IO_H_
