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

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "rtcdd/error.h"
#include "rtcdd/eval.h"
#include "rtcdd/rng.h"
#include "oracles.h"

namespace rtcdd {
namespace {

ScoredTrial T(double score, Label label, std::string platform = "offline",
              std::string noise = "S01") {
  ScoredTrial t;
  t.score = score;
  t.label = label;
  t.platform_id = std::move(platform);
  t.noise_id = std::move(noise);
  return t;
}

constexpr Label B = Label::kBonafide;
constexpr Label F = Label::kFake;

using testing::BruteForceEer;

std::vector<ScoredTrial> RandomTrials(Rng& rng, int nb, int nf, bool coarse) {
  std::vector<ScoredTrial> out;
  for (int i = 0; i < nb + nf; ++i) {
    const double s = coarse ? static_cast<double>(rng.UniformInt(-4, 4)) : rng.Normal();
    out.push_back(T(s + (i < nb ? 0.5 : 0.0), i < nb ? B : F));
  }
  return out;
}

TEST(Eer, Examples) {
  EXPECT_EQ(ComputeEer(std::vector{T(2, B), T(1, B), T(0, F), T(-1, F)}), 0.0);
  EXPECT_EQ(ComputeEer(std::vector{T(1, B), T(1, F), T(1, B), T(1, F), T(1, F)}), 0.5);
  const std::vector ex{T(3, B), T(2, B), T(0, B), T(1, F), T(-1, F)};
  EXPECT_DOUBLE_EQ(ComputeEer(ex), 5.0 / 12.0);
  EXPECT_EQ(ComputeEer(ex), BruteForceEer(ex));
}

TEST(Eer, SingleClassIsUndefined) {
  EXPECT_THROW(ComputeEer(std::vector{T(1, B), T(2, B)}), UndefinedMetricError);
  EXPECT_THROW(ComputeEer(std::vector<ScoredTrial>{}), UndefinedMetricError);
  const EerCell cell = EerOf(std::vector{T(1, F)});
  EXPECT_FALSE(cell.eer.has_value());
  EXPECT_EQ(cell.n_fake, 1u);
}

TEST(Eer, MatchesBruteForceProperty) {
  Rng rng(1);
  for (int trial = 0; trial < 400; ++trial) {
    const int nb = static_cast<int>(rng.UniformInt(1, 100));
    const int nf = static_cast<int>(rng.UniformInt(1, 200 - nb));
    const auto trials = RandomTrials(rng, nb, nf, trial % 2 == 0);
    ASSERT_EQ(ComputeEer(trials), BruteForceEer(trials)) << trial;
  }
}

TEST(Eer, InvariantUnderIncreasingTransformProperty) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto trials = RandomTrials(rng, static_cast<int>(rng.UniformInt(1, 40)),
                               static_cast<int>(rng.UniformInt(1, 40)), trial % 2 == 0);
    const double before = ComputeEer(trials);
    for (auto& t : trials) t.score = std::exp(0.7 * t.score) + 3.0;
    ASSERT_EQ(ComputeEer(trials), before);
  }
}

// Exact only for equal class sizes and untied scores: accepting at
// score >= threshold puts tied trials on one fixed side.
TEST(Eer, LabelSwapSymmetryProperty) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(1, 50));
    auto trials = RandomTrials(rng, n, n, false);
    const double before = ComputeEer(trials);
    for (auto& t : trials) {
      t.score = -t.score;
      t.label = t.label == B ? F : B;
    }
    ASSERT_NEAR(ComputeEer(trials), before, 1e-15) << trial;
  }
}

// Hand-built 20-trial fixture.
//   offline: separable                      -> 0
//   P01: bona {3,2,0}, fake {1,-1}          -> 5/12
//   P02: six tied scores                    -> 1/2
//   P03: bonafide only                      -> undefined
//   P04: bona {-5}, fake {5}                -> 1
std::vector<ScoredTrial> Fixture() {
  return {T(2, B), T(1, B), T(-1, F), T(-2, F),
          T(3, B, "P01"), T(2, B, "P01"), T(0, B, "P01"), T(1, F, "P01"), T(-1, F, "P01"),
          T(1, B, "P02", "S02"), T(1, B, "P02", "S02"), T(1, B, "P02", "S02"),
          T(1, F, "P02", "S02"), T(1, F, "P02", "S02"), T(1, F, "P02", "S02"),
          T(0.5, B, "P03", "S02"), T(0.2, B, "P03", "S02"), T(0.1, B, "P03", "S02"),
          T(-5, B, "P04", "S02"), T(5, F, "P04", "S02")};
}

TEST(Breakdown, HandBuiltFixture) {
  const auto trials = Fixture();
  ASSERT_EQ(trials.size(), 20u);
  const EvalReport r = Breakdown(trials);
  EXPECT_EQ(r.offline.eer, 0.0);
  EXPECT_EQ(r.offline.n_bonafide, 2u);
  ASSERT_EQ(r.per_platform.size(), 4u);
  EXPECT_FALSE(r.per_platform.count("offline"));
  EXPECT_DOUBLE_EQ(*r.per_platform.at("P01").eer, 5.0 / 12.0);
  EXPECT_EQ(r.per_platform.at("P02").eer, 0.5);
  EXPECT_FALSE(r.per_platform.at("P03").eer.has_value());
  EXPECT_EQ(r.per_platform.at("P03").n_bonafide, 3u);
  EXPECT_EQ(r.per_platform.at("P04").eer, 1.0);
  ASSERT_TRUE(r.online_avg.has_value());
  EXPECT_NEAR(*r.online_avg, (5.0 / 12.0 + 0.5 + 1.0) / 3.0, 1e-12);
  EXPECT_EQ(r.all.eer, BruteForceEer(trials));
  EXPECT_EQ(r.all.n_bonafide + r.all.n_fake, 20u);

  // Every cell is reproducible by filtering by hand.
  for (const auto& [noise, cell] : r.per_noise) {
    std::vector<ScoredTrial> subset;
    for (const auto& t : trials) {
      if (t.noise_id == noise) subset.push_back(t);
    }
    EXPECT_EQ(cell.eer, ComputeEer(subset)) << noise;
  }
  EXPECT_EQ(r.per_noise.size(), 2u);
}

TEST(Breakdown, SinglePlatformEqualsOverall) {
  std::vector<ScoredTrial> trials;
  Rng rng(4);
  for (const auto& t : RandomTrials(rng, 10, 12, false)) {
    trials.push_back(t);
    trials.back().platform_id = "P05";
  }
  const EvalReport r = Breakdown(trials);
  ASSERT_EQ(r.per_platform.size(), 1u);
  EXPECT_EQ(r.per_platform.at("P05").eer, r.all.eer);
  EXPECT_EQ(r.online_avg, r.all.eer);
  EXPECT_FALSE(r.offline.eer.has_value());
}

TEST(Breakdown, TsvMarksUndefinedCells) {
  const std::string tsv = EvalReportToTsv(Breakdown(Fixture()));
  EXPECT_EQ(tsv.rfind("group\tkey\teer\tn_bonafide\tn_fake\n", 0), 0u);
  EXPECT_NE(tsv.find("platform\tP03\tundefined\t3\t0"), std::string::npos);
  EXPECT_EQ(tsv.find("\t0\t3\t0"), std::string::npos);  // never a silent zero
}

TEST(Scores, TsvRoundTrip) {
  auto trials = Fixture();
  trials[0].score = 0.1 + 0.2;  // not exactly representable in short decimal
  trials[0].utt_id = "first";
  const auto back = ParseScores(ScoresToTsv(trials));
  ASSERT_EQ(back.size(), trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    EXPECT_EQ(back[i].utt_id, trials[i].utt_id);
    EXPECT_EQ(back[i].score, trials[i].score);
    EXPECT_EQ(back[i].label, trials[i].label);
    EXPECT_EQ(back[i].platform_id, trials[i].platform_id);
    EXPECT_EQ(back[i].noise_id, trials[i].noise_id);
  }
  EXPECT_THROW(ParseScores("a\tb\n"), FormatError);
  EXPECT_THROW(ParseScores("utt_id\tscore\tlabel\tplatform_id\tnoise_id\nx\tnan\tbonafide\tP01\tS01\n"),
               FormatError);
  EXPECT_THROW(ParseScores("utt_id\tscore\tlabel\tplatform_id\tnoise_id\nx\t1\n"), FormatError);
}

TEST(GroupEer, KeysSorted) {
  const auto groups = GroupEer(Fixture(), [](const ScoredTrial& t) { return t.platform_id; });
  std::vector<std::string> keys;
  for (const auto& [k, cell] : groups) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"P01", "P02", "P03", "P04", "offline"}));
}

// ---- lambda sweep -----------------------------------------------------------

TEST(LambdaSweep, CountsRunsAndRows) {
  std::atomic<int> calls{0};
  const TrainEvalFn fn = [&](Regime r, double lambda, std::uint64_t seed) {
    ++calls;
    return 0.1 * lambda + (r == Regime::kPcl ? 0.01 : 0.02) * static_cast<double>(seed + 1);
  };
  const std::vector<double> lambdas{0.1, 1.0, 3.0};
  const std::vector<std::uint64_t> seeds{0, 1};
  const auto rows = LambdaSweep(fn, lambdas, seeds, kSweepRegimes, 3);
  EXPECT_EQ(calls.load(), 12);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].regime, Regime::kFcl);
  EXPECT_EQ(rows[1].regime, Regime::kPcl);
  EXPECT_EQ(rows[4].lambda, 3.0);
  EXPECT_NEAR(rows[1].mean, 0.01 + 0.015, 1e-15);
  EXPECT_NEAR(rows[1].range(), 0.01, 1e-15);
  EXPECT_EQ(rows[1].per_seed.size(), 2u);
}

TEST(LambdaSweep, SingleSeedCollapsesRange) {
  const TrainEvalFn fn = [](Regime, double lambda, std::uint64_t) { return lambda / 10.0; };
  const std::vector<double> lambdas{0.5, 2.0};
  const std::vector<std::uint64_t> seeds{7};
  for (const auto& row : LambdaSweep(fn, lambdas, seeds)) {
    EXPECT_EQ(row.min, row.max);
    EXPECT_EQ(row.mean, row.min);
  }
}

TEST(LambdaSweep, ReportsHaveHeaders) {
  const TrainEvalFn fn = [](Regime, double, std::uint64_t s) { return 0.1 * static_cast<double>(s); };
  const std::vector<double> lambdas{1.0};
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto rows = LambdaSweep(fn, lambdas, seeds);
  const std::string table = SweepToTsv(rows);
  const std::string plot = SweepPlotData(rows);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
  EXPECT_EQ(plot.rfind("regime\tx\tmean\tmin\tmax\n", 0), 0u);
  EXPECT_THROW(LambdaSweep(fn, lambdas, std::vector<std::uint64_t>{}), ConfigError);
}

// ---- stability --------------------------------------------------------------

SimilarityPair RandomPair(Rng& rng, double noise) {
  SimilarityPair p;
  // Frames within a segment share a base vector, as frames of one phone do.
  p.offline.resize(12, 4);
  for (Eigen::Index seg = 0; seg < 3; ++seg) {
    RowVector base(4);
    for (Eigen::Index j = 0; j < 4; ++j) base(j) = rng.Normal();
    for (Eigen::Index t = 4 * seg; t < 4 * seg + 4; ++t) {
      for (Eigen::Index j = 0; j < 4; ++j) p.offline(t, j) = base(j) + 0.2 * rng.Normal();
    }
  }
  p.online = p.offline;
  for (Eigen::Index i = 0; i < p.online.size(); ++i) p.online.data()[i] += noise * rng.Normal();
  p.seg_offline.segments = {{0, 4, "a"}, {4, 8, "b"}, {8, 12, "c"}};
  p.seg_online = p.seg_offline;
  return p;
}

TEST(Stability, IdentityChannelHasUnitSimilarity) {
  Rng rng(5);
  std::vector<SimilarityPair> pairs;
  for (int i = 0; i < 6; ++i) pairs.push_back(RandomPair(rng, 0.0));
  const StabilityReport r = ComputeStability(pairs, 10);
  EXPECT_NEAR(r.frame.stats.mean, 1.0, 1e-12);
  EXPECT_NEAR(r.phoneme.stats.mean, 1.0, 1e-12);
  EXPECT_EQ(r.frame.level, SimilarityLevel::kFrame);
  EXPECT_EQ(r.phoneme.level, SimilarityLevel::kPhoneme);
}

TEST(Stability, HistogramCountsPairs) {
  Rng rng(6);
  std::vector<SimilarityPair> pairs;
  for (int i = 0; i < 25; ++i) pairs.push_back(RandomPair(rng, 0.8));
  const StabilityReport r = ComputeStability(pairs, 20);
  for (const LevelStats* l : {&r.frame, &r.phoneme}) {
    ASSERT_EQ(l->histogram.size(), 20u);
    std::size_t total = 0;
    for (std::size_t c : l->histogram) total += c;
    EXPECT_EQ(total, 25u);
  }
  // Averaging within segments cancels independent per-frame noise.
  EXPECT_GT(r.phoneme.stats.mean, r.frame.stats.mean);
  EXPECT_LT(r.phoneme.stats.variance, r.frame.stats.variance);
  EXPECT_NE(StabilityToTsv(r).find("phoneme"), std::string::npos);
  EXPECT_THROW(ComputeStability(std::vector<SimilarityPair>{}), EmptyError);
}

TEST(Regime, NamesRoundTrip) {
  for (Regime r : {Regime::kOff, Regime::kOn, Regime::kMix, Regime::kPcl, Regime::kFcl}) {
    EXPECT_EQ(ParseRegime(RegimeName(r)), r);
  }
  EXPECT_THROW(ParseRegime("both"), ConfigError);
}

}  // namespace
}  // namespace rtcdd
