// Copyright 2026 The rtcdd Authors. All Rights Reserved.
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

#ifndef RTCDD_TOOLS_CLI_APP_H_
#define RTCDD_TOOLS_CLI_APP_H_

#include <iostream>
#include <string>
#include <vector>

namespace rtcdd::cli {

// Exit codes are part of the scripting contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Runs the tool on args (program name excluded). Normal output goes to out,
// warnings and errors to err.
int RunCli(std::vector<std::string> args, std::ostream& out = std::cout,
           std::ostream& err = std::cerr);

}  // namespace rtcdd::cli

#endif  // RTCDD_TOOLS_CLI_APP_H_
