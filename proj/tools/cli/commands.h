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

#ifndef RTCDD_TOOLS_CLI_COMMANDS_H_
#define RTCDD_TOOLS_CLI_COMMANDS_H_

#include <functional>
#include <ostream>

#include "CLI11.hpp"

namespace rtcdd::cli {

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// A registered subcommand. run() is valid only after a successful parse
// that selected this subcommand.
struct Command {
  CLI::App* app = nullptr;
  std::function<void()> run;
};

Command AddMakeSynth(CLI::App& root, const Context& ctx);
Command AddSimulate(CLI::App& root, const Context& ctx);
Command AddBuildCorpus(CLI::App& root, const Context& ctx);
Command AddTrain(CLI::App& root, const Context& ctx);
Command AddEval(CLI::App& root, const Context& ctx);
Command AddAnalyzeSimilarity(CLI::App& root, const Context& ctx);

}  // namespace rtcdd::cli

#endif  // RTCDD_TOOLS_CLI_COMMANDS_H_
