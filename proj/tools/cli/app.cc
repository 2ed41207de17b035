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

#include "app.h"

#include <algorithm>
#include <exception>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "commands.h"
#include "rtcdd/error.h"

namespace rtcdd::cli {

namespace {

// Library warnings (dropped utterances, fallback segmenter) go to err too.
class LoggerScope {
 public:
  explicit LoggerScope(std::ostream& err) : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("rtcdd", sink);
    logger->set_pattern("%l: %v");
    logger->set_level(spdlog::level::warn);
    spdlog::set_default_logger(logger);
  }
  ~LoggerScope() { spdlog::set_default_logger(previous_); }
  LoggerScope(const LoggerScope&) = delete;
  LoggerScope& operator=(const LoggerScope&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

}  // namespace

int RunCli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  LoggerScope logging(err);
  CLI::App app{"Channel simulation and consistency training for speech deepfake detection",
               "rtcdd"};
  app.require_subcommand(1);
  // Read before the subcommand runs; keys live in a [subcommand] table and
  // unknown keys are errors.
  app.set_config("--config", "", "TOML file with option values under [<subcommand>]");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  const Context ctx{out, err};
  const std::vector<Command> commands = {
      AddMakeSynth(app, ctx),  AddSimulate(app, ctx), AddBuildCorpus(app, ctx),
      AddTrain(app, ctx),      AddEval(app, ctx),     AddAnalyzeSimilarity(app, ctx),
  };

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == static_cast<int>(CLI::ExitCodes::Success) ? kExitOk : kExitConfig;
  }

  try {
    for (const auto& c : commands) {
      if (c.app->parsed()) c.run();
    }
  } catch (const rtcdd::ConfigError& e) {
    err << "error (" << e.name() << "): " << e.what() << '\n';
    return kExitConfig;
  } catch (const rtcdd::SchemeError& e) {
    err << "error (" << e.name() << "): " << e.what() << '\n';
    return kExitConfig;
  } catch (const rtcdd::Error& e) {
    err << "error (" << e.name() << "): " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace rtcdd::cli
