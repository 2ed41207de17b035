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

#ifndef RTCDD_EVAL_H_
#define RTCDD_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtcdd/manifest.h"
#include "rtcdd/phoneme.h"

namespace rtcdd {

struct ScoredTrial {
  std::string utt_id;
  double score = 0.0;  // log-odds of bonafide
  Label label = Label::kBonafide;
  std::string platform_id = std::string(kOfflinePlatform);
  std::string noise_id = "S01";
};

// Thresholds are swept over every distinct score; a trial is accepted when
// score >= threshold. The threshold minimizing |FAR - FRR| is chosen (lowest
// such threshold on ties) and (FAR + FRR) / 2 is returned. Throws
// UndefinedMetricError unless both classes are present.
double ComputeEer(std::span<const ScoredTrial> trials);

struct EerCell {
  std::optional<double> eer;  // nullopt when a class is missing
  std::size_t n_bonafide = 0;
  std::size_t n_fake = 0;
};

EerCell EerOf(std::span<const ScoredTrial> trials);

// EER per distinct key value, keys sorted.
std::map<std::string, EerCell> GroupEer(
    std::span<const ScoredTrial> trials,
    const std::function<std::string(const ScoredTrial&)>& key);

struct EvalReport {
  EerCell all;                                // every trial pooled
  EerCell offline;                            // platform "offline"
  std::map<std::string, EerCell> per_platform;  // online platforms only
  std::map<std::string, EerCell> per_noise;
  // Mean of the defined per-platform cells; nullopt when none is defined.
  std::optional<double> online_avg;
};

EvalReport Breakdown(std::span<const ScoredTrial> trials);

// Tab-separated: group, key, eer, n_bonafide, n_fake. Undefined cells are
// written as "undefined".
std::string EvalReportToTsv(const EvalReport& report);
void WriteEvalReport(const EvalReport& report, const std::filesystem::path& path);
std::string ScoresToTsv(std::span<const ScoredTrial> trials);
// Inverse of ScoresToTsv. Throws FormatError on malformed rows.
std::vector<ScoredTrial> ParseScores(const std::string& tsv);
std::vector<ScoredTrial> ReadScores(const std::filesystem::path& path);

enum class Regime { kOff, kOn, kMix, kPcl, kFcl };
std::string_view RegimeName(Regime regime);
Regime ParseRegime(std::string_view name);

struct SweepRow {
  double lambda = 0.0;
  Regime regime = Regime::kPcl;
  std::vector<double> per_seed;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double range() const { return max - min; }
};

inline constexpr Regime kSweepRegimes[] = {Regime::kFcl, Regime::kPcl};

// Returns the EER of one trained-and-evaluated run.
using TrainEvalFn = std::function<double(Regime regime, double lambda, std::uint64_t seed)>;

// Runs every (lambda, regime, seed) job, `workers` at a time. Rows are
// ordered by lambda, then regime as listed.
std::vector<SweepRow> LambdaSweep(const TrainEvalFn& fn, std::span<const double> lambdas,
                                  std::span<const std::uint64_t> seeds,
                                  std::span<const Regime> regimes = kSweepRegimes, int workers = 1);

std::string SweepToTsv(std::span<const SweepRow> rows);
// Plot data: regime, x, mean, min, max.
std::string SweepPlotData(std::span<const SweepRow> rows);

struct SimilarityPair {
  Matrix offline;
  Matrix online;
  PhonemeSegmentation seg_offline;
  PhonemeSegmentation seg_online;
};

struct LevelStats {
  SimilarityLevel level = SimilarityLevel::kFrame;
  SimilarityStats stats;
  std::vector<std::size_t> histogram;  // bins over [-1, 1]
};

struct StabilityReport {
  LevelStats frame;
  LevelStats phoneme;
};

// Frame level compares the aligned frames, phoneme level the pooled
// segments. Throws EmptyError when there are no pairs.
StabilityReport ComputeStability(std::span<const SimilarityPair> pairs, int bins = 20);
std::string StabilityToTsv(const StabilityReport& report);

}  // namespace rtcdd

#endif  // RTCDD_EVAL_H_
