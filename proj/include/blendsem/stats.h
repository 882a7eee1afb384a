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

#ifndef BLENDSEM_STATS_H_
#define BLENDSEM_STATS_H_

#include <cstddef>
#include <span>

namespace blendsem {

// Regularized incomplete beta I_x(a, b). Callers that know 1 - x exactly pass
// it as one_minus_x to avoid cancellation near 1.
double incomplete_beta(double a, double b, double x, double one_minus_x);
double incomplete_beta(double a, double b, double x);

// Two-sided tail probability P(|T| >= |t|) for Student's t with df degrees.
double student_t_two_sided(double t, double df);

struct TTestResult {
  double delta_mse = 0.0;  // mean(a - b)
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  // Set when the differences have zero variance and nonzero mean; t is then
  // +/-infinity and p is 0.
  bool degenerate = false;
};

// Paired two-sided t-test on d = a - b. Throws StructuralError on a length
// mismatch and ParameterError when n < 2.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

}  // namespace blendsem

#endif  // BLENDSEM_STATS_H_
