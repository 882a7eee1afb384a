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

#include "blendsem/numeric_format.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace blendsem {

std::string format_shortest(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  if (decimals < 0) throw std::invalid_argument("negative decimals");

  const bool negative = std::signbit(value);
  // Shortest scientific form: d.ddddde[+-]XX
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), std::fabs(value),
                           std::chars_format::scientific);
  std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));
  const auto e_pos = sci.find('e');
  std::string digits;
  for (char c : sci.substr(0, e_pos)) {
    if (c != '.') digits.push_back(c);
  }
  int exponent = 0;
  {
    auto exp_text = sci.substr(e_pos + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(),
                    exponent);
  }
  // value = 0.<digits> * 10^point
  const int point = exponent + 1;
  const int keep = point + decimals;

  std::string units;
  if (keep < 0) {
    units = "0";
  } else {
    const auto n = static_cast<std::size_t>(keep);
    units = digits.substr(0, std::min(n, digits.size()));
    units.resize(n, '0');
    const bool round_up = n < digits.size() && digits[n] >= '5';
    if (units.empty()) units = "0";
    if (round_up) {
      int i = static_cast<int>(units.size()) - 1;
      if (keep == 0) {
        units = "1";
      } else {
        while (i >= 0 && units[i] == '9') units[i--] = '0';
        if (i < 0) {
          units.insert(units.begin(), '1');
        } else {
          ++units[i];
        }
      }
    }
  }

  const auto first_nonzero = units.find_first_not_of('0');
  units = first_nonzero == std::string::npos ? "0" : units.substr(first_nonzero);
  const bool is_zero = units == "0";
  const auto d = static_cast<std::size_t>(decimals);
  if (units.size() <= d) units.insert(0, d + 1 - units.size(), '0');

  std::string out;
  if (negative && !is_zero) out.push_back('-');
  out += units.substr(0, units.size() - d);
  if (d > 0) {
    out.push_back('.');
    out += units.substr(units.size() - d);
  }
  return out;
}

std::string format_scientific(double value, int decimals) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  if (decimals < 0) throw std::invalid_argument("negative decimals");
  const auto d = static_cast<std::size_t>(decimals);
  std::string digits;
  int exponent = 0;
  if (value != 0.0) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), std::fabs(value),
                             std::chars_format::scientific);
    std::string_view sci(buf, static_cast<std::size_t>(res.ptr - buf));
    const auto e_pos = sci.find('e');
    for (char c : sci.substr(0, e_pos)) {
      if (c != '.') digits.push_back(c);
    }
    auto exp_text = sci.substr(e_pos + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(),
                    exponent);
    const bool round_up = digits.size() > d + 1 && digits[d + 1] >= '5';
    digits.resize(d + 1, '0');
    if (round_up) {
      int i = static_cast<int>(digits.size()) - 1;
      while (i >= 0 && digits[i] == '9') digits[i--] = '0';
      if (i < 0) {
        digits.insert(digits.begin(), '1');
        digits.pop_back();
        ++exponent;
      } else {
        ++digits[i];
      }
    }
  } else {
    digits.assign(d + 1, '0');
  }
  std::string out;
  if (value < 0.0) out.push_back('-');
  out.push_back(digits[0]);
  if (d > 0) {
    out.push_back('.');
    out += digits.substr(1);
  }
  out.push_back('e');
  out.push_back(exponent < 0 ? '-' : '+');
  const std::string mag = std::to_string(std::abs(exponent));
  if (mag.size() < 2) out.push_back('0');
  out += mag;
  return out;
}

double round_half_away(double value, int decimals) {
  return *parse_double(format_fixed(value, decimals));
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  // from_chars rejects a leading '+'; accept it for CSV producers that emit it.
  if (*begin == '+') ++begin;
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

}  // namespace blendsem
