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

#include "blendsem/frame_io.h"

#include <random>
#include <sstream>
#include <string>

#include "blendsem/error.h"
#include "blendsem/registry.h"
#include "gtest/gtest.h"
#include "support/test_util.h"

namespace blendsem {
namespace {

using testing::random_raw_frame;
using testing::TempDir;

std::string header_row() {
  std::string h;
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (i) h += ",";
    h += ActionRegistry::name(i);
  }
  return h;
}

TEST(FrameIoTest, CsvRoundTripIsExact) {
  std::mt19937_64 rng(21);
  std::vector<CoefficientFrame> frames;
  for (int i = 0; i < 20; ++i) frames.push_back(random_raw_frame(rng));
  std::stringstream buf;
  write_frames_csv(buf, frames);
  EXPECT_EQ(read_frames_csv(buf), frames);
}

TEST(FrameIoTest, JsonlRoundTripIsExact) {
  std::mt19937_64 rng(22);
  std::vector<CoefficientFrame> frames;
  for (int i = 0; i < 20; ++i) frames.push_back(random_raw_frame(rng));
  std::stringstream buf;
  write_frames_jsonl(buf, frames);
  EXPECT_EQ(read_frames_jsonl(buf), frames);
}

TEST(FrameIoTest, CsvAcceptsAnyColumnOrder) {
  std::string h;
  std::string row;
  for (ActionIndex k = 0; k < kActionCount; ++k) {
    const ActionIndex i = kActionCount - 1 - k;
    if (k) {
      h += ",";
      row += ",";
    }
    h += ActionRegistry::name(i);
    row += std::to_string(static_cast<double>(i) / 100.0);
  }
  std::istringstream in(h + "\n" + row + "\n");
  const auto frames = read_frames_csv(in);
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_DOUBLE_EQ(frames[0].at("MouthRight"), 0.0);
  EXPECT_DOUBLE_EQ(frames[0].at("EyeLookDownRight"), 0.60);
}

TEST(FrameIoTest, CsvUnknownColumnIsNamed) {
  std::string h = header_row();
  h.replace(h.find("JawOpen"), 7, "JawOpn");
  std::istringstream in(h + "\n");
  try {
    read_frames_csv(in);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "JawOpn");
  }
}

TEST(FrameIoTest, CsvDuplicateColumnIsNamed) {
  std::string h = header_row();
  h.replace(h.find("JawOpen"), 7, "JawLeft");
  std::istringstream in(h + "\n");
  try {
    read_frames_csv(in);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "JawLeft");
  }
}

TEST(FrameIoTest, JsonlMissingKeyIsNamed) {
  std::string line = "{";
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (ActionRegistry::name(i) == "TongueOut") continue;
    if (line.size() > 1) line += ",";
    line += "\"" + std::string(ActionRegistry::name(i)) + "\":0";
  }
  line += "}";
  std::istringstream in(line + "\n");
  try {
    read_frames_jsonl(in);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "TongueOut");
  }
}

TEST(FrameIoTest, CsvShortRowFails) {
  std::istringstream in(header_row() + "\n0,0,0\n");
  EXPECT_THROW(read_frames_csv(in), Error);
}

TEST(FrameIoTest, AtomicWriteReplacesContents) {
  TempDir dir;
  const auto p = dir.path() / "sub" / "out.txt";
  std::filesystem::create_directories(p.parent_path());
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  EXPECT_EQ(read_file(p), "second");
  for (const auto& e : std::filesystem::directory_iterator(p.parent_path())) {
    EXPECT_EQ(e.path().filename(), "out.txt");
  }
}

TEST(FrameIoTest, MissingFileIsInputError) {
  TempDir dir;
  EXPECT_THROW(read_file(dir.path() / "nope.csv"), InputError);
}

}  // namespace
}  // namespace blendsem
