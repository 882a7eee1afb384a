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

#ifndef BLENDSEM_NUMERIC_FORMAT_H_
#define BLENDSEM_NUMERIC_FORMAT_H_

#include <optional>
#include <string>
#include <string_view>

namespace blendsem {

// Shortest decimal text that parses back to exactly `value`.
std::string format_shortest(double value);

// Fixed-point text with `decimals` digits, rounding half away from zero.
//
// Rounding is applied to the shortest round-trip decimal form of `value`, so
// 0.4005 renders as "0.401" even though its binary value is slightly below
// the midpoint. Negative results that round to zero render without a sign.
std::string format_fixed(double value, int decimals);

// Scientific text in printf "%.Ne" layout ("-1.42e-04"), rounding the
// shortest round-trip digits half away from zero.
std::string format_scientific(double value, int decimals);

// Value of format_fixed(value, decimals) as a double.
double round_half_away(double value, int decimals);

// Strict decimal parse of the whole string (no leading/trailing junk).
std::optional<double> parse_double(std::string_view text);

}  // namespace blendsem

#endif  // BLENDSEM_NUMERIC_FORMAT_H_
