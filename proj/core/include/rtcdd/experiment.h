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

#ifndef RTCDD_EXPERIMENT_H_
#define RTCDD_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rtcdd/channel.h"
#include "rtcdd/corpus.h"
#include "rtcdd/eval.h"
#include "rtcdd/synth.h"
#include "rtcdd/trainer.h"

namespace rtcdd {

// In-memory synth -> transmit -> features pipeline, used by the directional
// experiments and the benchmarks. No files are written.
struct ExperimentOptions {
  SynthOptions synth;
  std::vector<ChannelProfile> profiles = BuiltinProfiles();
  CorpusOptions corpus;
  std::set<std::string> train_platforms = {"P01", "P02"};
  std::set<std::string> dev_platforms = {"P01", "P02", "P03"};
  std::set<std::string> eval_platforms = {"P03", "P04", "P05", "P06", "P07"};
  double train_speaker_frac = 0.4;
  double dev_speaker_frac = 0.2;
  int workers = 1;
};

struct SimulatedCorpus {
  Dataset offline;
  Dataset online;  // every profile; pair_id links back to offline
  std::map<std::string, PlatformStats> stats;
};

// Synthesizes with options.synth (seed replaced by `seed`), transmits every
// utterance through every profile and extracts log-mel features.
SimulatedCorpus SimulateCorpus(const ExperimentOptions& options, std::uint64_t seed);

struct ExperimentSplit {
  Dataset train;  // offline + online on train platforms
  Dataset dev;    // offline + online on dev platforms, disjoint speakers
  Dataset eval;   // offline + online on eval platforms, disjoint speakers
};

// Speakers are sorted and cut by the configured fractions.
ExperimentSplit SplitCorpus(const SimulatedCorpus& corpus, const ExperimentOptions& options);

struct RunResult {
  EvalReport report;
  std::vector<EpochRecord> history;
};

RunResult TrainAndEvaluate(const ExperimentSplit& split, const TrainConfig& config);

// Offline/online pairs with per-utterance mean-normalized log-mel frames
// and offline boundaries shifted onto the online grid.
std::vector<SimilarityPair> SimilarityPairs(const SimulatedCorpus& corpus);

// Subtracts the per-dimension mean over frames.
Matrix MeanNormalize(const Matrix& frames);

}  // namespace rtcdd

#endif  // RTCDD_EXPERIMENT_H_
