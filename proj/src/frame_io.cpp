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

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "blendsem/error.h"
#include "blendsem/numeric_format.h"
#include "json.hpp"

namespace blendsem {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return cells;
}

std::string where(std::size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

}  // namespace

std::vector<CoefficientFrame> read_frames_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<ActionIndex> columns;

  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw ValidationError("frame CSV has no header row");

  std::array<bool, kActionCount> seen{};
  for (auto cell : split_csv(line)) {
    auto idx = ActionRegistry::find(cell);
    if (!idx) {
      throw ValidationError(where(line_no) + "unknown action name '" +
                                std::string(cell) + "'",
                            std::string(cell));
    }
    if (seen[*idx]) {
      throw ValidationError(where(line_no) + "duplicate column '" +
                                std::string(cell) + "'",
                            std::string(cell));
    }
    seen[*idx] = true;
    columns.push_back(*idx);
  }
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (!seen[i]) {
      std::string name(ActionRegistry::name(i));
      throw ValidationError(where(line_no) + "missing column '" + name + "'",
                            name);
    }
  }

  std::vector<CoefficientFrame> frames;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != columns.size()) {
      throw StructuralError(where(line_no) + "expected " +
                            std::to_string(columns.size()) + " cells, got " +
                            std::to_string(cells.size()));
    }
    CoefficientArray v{};
    for (std::size_t c = 0; c < cells.size(); ++c) {
      auto parsed = parse_double(cells[c]);
      if (!parsed) {
        std::string name(ActionRegistry::name(columns[c]));
        throw ValidationError(where(line_no) + "non-numeric value for " + name,
                              name);
      }
      v[columns[c]] = *parsed;
    }
    frames.emplace_back(v);
  }
  return frames;
}

std::vector<CoefficientFrame> read_frames_jsonl(std::istream& in) {
  std::vector<CoefficientFrame> frames;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where(line_no) + e.what());
    }
    if (!obj.is_object()) {
      throw ValidationError(where(line_no) + "frame record is not an object");
    }
    CoefficientArray v{};
    std::array<bool, kActionCount> seen{};
    for (const auto& [key, value] : obj.items()) {
      auto idx = ActionRegistry::find(key);
      if (!idx) {
        throw ValidationError(where(line_no) + "unknown action name '" + key +
                                  "'",
                              key);
      }
      if (!value.is_number()) {
        throw ValidationError(where(line_no) + "non-numeric value for " + key,
                              key);
      }
      v[*idx] = value.get<double>();
      seen[*idx] = true;
    }
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      if (!seen[i]) {
        std::string name(ActionRegistry::name(i));
        throw ValidationError(where(line_no) + "missing action '" + name + "'",
                              name);
      }
    }
    frames.emplace_back(v);
  }
  return frames;
}

std::vector<CoefficientFrame> read_frame_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot open frame file " + p.string());
  if (p.extension() == ".csv") return read_frames_csv(in);
  return read_frames_jsonl(in);
}

void write_frames_csv(std::ostream& out,
                      const std::vector<CoefficientFrame>& frames) {
  const auto names = ActionRegistry::names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << (i ? "," : "") << names[i];
  }
  out << '\n';
  for (const auto& f : frames) {
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      out << (i ? "," : "") << format_shortest(f[i]);
    }
    out << '\n';
  }
}

void write_frames_jsonl(std::ostream& out,
                        const std::vector<CoefficientFrame>& frames) {
  for (const auto& f : frames) {
    out << '{';
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      out << (i ? "," : "") << '"' << ActionRegistry::name(i)
          << "\":" << format_shortest(f[i]);
    }
    out << "}\n";
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw InputError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace blendsem
