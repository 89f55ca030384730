// Copyright 2026 The SmartCrowd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The smartcrowd command line: gen, build, maintain and simulate.

#ifndef SMARTCROWD_TOOLS_CLI_COMMANDS_H_
#define SMARTCROWD_TOOLS_CLI_COMMANDS_H_

#include <ostream>

namespace smartcrowd::cli {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kInfeasible = 3,
  kBudgetExhausted = 4,
};

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smartcrowd::cli

#endif  // SMARTCROWD_TOOLS_CLI_COMMANDS_H_
