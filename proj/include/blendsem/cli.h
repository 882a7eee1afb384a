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

#ifndef BLENDSEM_CLI_H_
#define BLENDSEM_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace blendsem {

// Runs the command line (args[0] is the program name) and returns the exit
// code: 0 success, 1 validation, 2 service, 3 internal.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace blendsem

#endif  // BLENDSEM_CLI_H_
