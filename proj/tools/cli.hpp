// Copyright 2026 The SSCD Workbench Authors. All rights reserved.
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

// Batch experiment runner: run, sweep, generate, list-schedulers.

#ifndef SSCD_TOOLS_CLI_HPP_
#define SSCD_TOOLS_CLI_HPP_

#include <iosfwd>

namespace sscd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEngine = 3;

// Entry point shared by the executable and the tests. Diagnostics go to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sscd::cli

#endif  // SSCD_TOOLS_CLI_HPP_
