# Copyright 2026 The blendsem Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates tests/support/ttest_cases.h from scipy.

Usage: python3 tests/oracles/ttest_reference.py > tests/support/ttest_cases.h
The header is checked in; the tests never run Python.
"""

import numpy as np
from scipy import stats

PAIRED = [
    ("d_1_to_5", [1, 2, 3, 4, 5], [0, 0, 0, 0, 0]),
    ("student_sleep",
     [0.7, -1.6, -0.2, -1.2, -0.1, 3.4, 3.7, 0.8, 0.0, 2.0],
     [1.9, 0.8, 1.1, 0.1, -0.1, 4.4, 5.5, 1.6, 4.6, 3.4]),
    ("two_pairs", [1.0, 3.0], [0.5, 1.0]),
    ("near_null", [1.0, 2.0, 3.0, 4.0], [1.1, 1.9, 3.05, 3.95]),
    ("negative_shift", [2.1, 2.4, 1.9, 2.2, 2.6, 2.0], [3.0, 3.1, 2.8, 3.3, 3.2, 2.9]),
    ("mixed_signs", [0.3, -0.2, 0.5, -0.4, 0.1, 0.2, -0.1],
     [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ("mse_scale_a", [3.1e-3, 3.5e-3, 2.9e-3, 4.2e-3, 3.3e-3, 3.8e-3, 2.7e-3, 3.6e-3],
     [3.4e-3, 3.6e-3, 3.3e-3, 4.4e-3, 3.5e-3, 4.1e-3, 3.0e-3, 3.9e-3]),
    ("mse_scale_b", [5.0e-3, 4.1e-3, 6.2e-3, 3.9e-3, 4.4e-3],
     [5.1e-3, 4.0e-3, 6.6e-3, 4.2e-3, 4.3e-3]),
    ("large_t", [10.0, 10.1, 9.9, 10.05, 9.95, 10.02], [0, 0, 0, 0, 0, 0]),
    ("integers", [12, 15, 11, 18, 14, 13, 16, 17, 12, 15],
     [10, 14, 12, 15, 11, 13, 14, 15, 11, 12]),
    ("tiny_diff", [1.0000001, 1.0000002, 1.0000004, 1.0000003], [1, 1, 1, 1]),
    ("three_pairs", [5.0, 7.0, 9.5], [4.0, 6.5, 7.0]),
    ("alternating", [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1], [0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 0]),
    ("wide", [100, 250, -30, 80, 400, 10, 55], [90, 200, -10, 60, 300, 30, 20]),
]

# (t, df) points for the two-sided tail on its own.
TAILS = [
    ("table4_a1a0", -5.28, 4699.0),
    ("table4_a2a1", 8.21, 4699.0),
    ("table4_a2a0", 10.61, 4699.0),
    ("df1", 1.0, 1.0),
    ("df2_small_t", 0.25, 2.0),
    ("df30_extreme", 25.0, 30.0),
]


def fmt(x):
    return repr(float(x))


def main():
    print("// Copyright 2026 The blendsem Authors")
    print("//")
    print('// Licensed under the Apache License, Version 2.0 (the "License");')
    print("// you may not use this file except in compliance with the License.")
    print("// You may obtain a copy of the License at")
    print("//")
    print("//      http://www.apache.org/licenses/LICENSE-2.0")
    print("//")
    print("// Unless required by applicable law or agreed to in writing, software")
    print('// distributed under the License is distributed on an "AS IS" BASIS,')
    print("// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.")
    print("// See the License for the specific language governing permissions and")
    print("// limitations under the License.")
    print()
    print("// Generated by tests/oracles/ttest_reference.py (scipy "
          + __import__("scipy").__version__ + "). Do not edit by hand.")
    print()
    print("#ifndef BLENDSEM_TESTS_SUPPORT_TTEST_CASES_H_")
    print("#define BLENDSEM_TESTS_SUPPORT_TTEST_CASES_H_")
    print()
    print("#include <vector>")
    print()
    print("namespace blendsem::testing {")
    print()
    print("struct PairedCase {")
    print("  const char* name;")
    print("  std::vector<double> a;")
    print("  std::vector<double> b;")
    print("  double mean_diff;")
    print("  double t;")
    print("  double p;")
    print("};")
    print()
    print("struct TailCase {")
    print("  const char* name;")
    print("  double t;")
    print("  double df;")
    print("  double p;")
    print("};")
    print()
    print("inline const std::vector<PairedCase>& paired_cases() {")
    print("  static const std::vector<PairedCase> kCases = {")
    for name, a, b in PAIRED:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        r = stats.ttest_rel(a, b)
        print(f'      {{"{name}",')
        print("       {" + ", ".join(fmt(x) for x in a) + "},")
        print("       {" + ", ".join(fmt(x) for x in b) + "},")
        print(f"       {fmt(np.mean(a - b))}, {fmt(r.statistic)}, {fmt(r.pvalue)}}},")
    print("  };")
    print("  return kCases;")
    print("}")
    print()
    print("inline const std::vector<TailCase>& tail_cases() {")
    print("  static const std::vector<TailCase> kCases = {")
    for name, t, df in TAILS:
        p = 2.0 * stats.t.sf(abs(t), df)
        print(f'      {{"{name}", {fmt(t)}, {fmt(df)}, {fmt(p)}}},')
    print("  };")
    print("  return kCases;")
    print("}")
    print()
    print("}  // namespace blendsem::testing")
    print()
    print("#endif  // BLENDSEM_TESTS_SUPPORT_TTEST_CASES_H_")


if __name__ == "__main__":
    main()
