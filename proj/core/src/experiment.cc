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

#include "rtcdd/experiment.h"

#include <algorithm>
#include <cmath>

#include "rtcdd/dataset.h"
#include "rtcdd/error.h"
#include "rtcdd/features.h"
#include "rtcdd/parallel.h"
#include "rtcdd/rng.h"

namespace rtcdd {

namespace {

Utterance FromSynth(const SynthUtterance& s) {
  Utterance u;
  u.utt_id = s.record.utt_id;
  u.label = s.record.label;
  u.platform_id = s.record.platform_id;
  u.noise_id = s.record.noise_id;
  u.speaker_id = s.record.speaker_id;
  u.features = LogMelFeatures(s.clip).frames;
  u.segmentation = s.segmentation;
  return u;
}

}  // namespace

SimulatedCorpus SimulateCorpus(const ExperimentOptions& options, std::uint64_t seed) {
  SynthOptions synth = options.synth;
  synth.seed = seed;
  const auto utterances = GenerateSynthCorpus(synth, options.workers);
  SimulatedCorpus out;
  out.offline.resize(utterances.size());
  ParallelFor(utterances.size(), options.workers,
              [&](std::size_t i) { out.offline[i] = FromSynth(utterances[i]); });

  const std::size_t batch = std::max<std::size_t>(1, options.corpus.batch_size);
  const std::size_t num_batches = (utterances.size() + batch - 1) / batch;
  std::vector<AudioClip> clips;
  clips.reserve(utterances.size());
  for (const auto& u : utterances) clips.push_back(u.clip);

  struct Job {
    std::size_t profile, batch;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < options.profiles.size(); ++p) {
    for (std::size_t b = 0; b < num_batches; ++b) jobs.push_back({p, b});
  }
  std::vector<std::vector<std::optional<Utterance>>> results(jobs.size());
  ParallelFor(jobs.size(), options.workers, [&](std::size_t j) {
    const auto& profile = options.profiles[jobs[j].profile];
    const std::size_t begin = jobs[j].batch * batch;
    const std::size_t end = std::min(begin + batch, clips.size());
    // Profile seeds are offset by the corpus seed so each corpus sees fresh
    // channel randomness.
    ChannelProfile p = BatchProfile(profile, jobs[j].batch);
    p.seed = DeriveSeed(p.seed, seed);
    const auto tx = TransmitBatch(std::span(clips).subspan(begin, end - begin), p, options.corpus);
    auto& slot = results[j];
    slot.resize(end - begin);
    for (std::size_t i = 0; i < slot.size(); ++i) {
      if (!tx.checks[i].passed) continue;
      const Utterance& src = out.offline[begin + i];
      Utterance u;
      u.utt_id = src.utt_id + "_" + profile.profile_id;
      u.label = src.label;
      u.platform_id = profile.profile_id;
      u.noise_id = src.noise_id;
      u.speaker_id = src.speaker_id;
      u.pair_id = src.utt_id;
      u.features = LogMelFeatures(tx.recovered[i]).frames;
      slot[i] = std::move(u);
    }
  });
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& stats = out.stats[options.profiles[jobs[j].profile].profile_id];
    for (auto& u : results[j]) {
      ++stats.attempted;
      if (!u) continue;
      ++stats.passed;
      out.online.push_back(std::move(*u));
    }
  }
  return out;
}

ExperimentSplit SplitCorpus(const SimulatedCorpus& corpus, const ExperimentOptions& options) {
  std::set<std::string> speakers;
  for (const auto& u : corpus.offline) speakers.insert(u.speaker_id);
  const std::vector<std::string> sorted(speakers.begin(), speakers.end());
  const auto n = static_cast<double>(sorted.size());
  const auto n_train = static_cast<std::size_t>(std::round(n * options.train_speaker_frac));
  const auto n_dev = static_cast<std::size_t>(std::round(n * options.dev_speaker_frac));
  if (n_train == 0 || n_dev == 0 || n_train + n_dev >= sorted.size()) {
    throw ConfigError("too few speakers (" + std::to_string(sorted.size()) +
                      ") for a train/dev/eval split");
  }
  std::map<std::string, int> role;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    role[sorted[i]] = i < n_train ? 0 : (i < n_train + n_dev ? 1 : 2);
  }
  ExperimentSplit split;
  auto place = [&](const Utterance& u) {
    const int r = role.at(u.speaker_id);
    const auto& platforms = r == 0   ? options.train_platforms
                            : r == 1 ? options.dev_platforms
                                     : options.eval_platforms;
    if (!u.is_offline() && !platforms.contains(u.platform_id)) return;
    (r == 0 ? split.train : r == 1 ? split.dev : split.eval).push_back(u);
  };
  for (const auto& u : corpus.offline) place(u);
  for (const auto& u : corpus.online) place(u);
  return split;
}

RunResult TrainAndEvaluate(const ExperimentSplit& split, const TrainConfig& config) {
  const TrainResult trained = Train(split.train, split.dev, config);
  RunResult out;
  out.history = trained.history;
  out.report = Breakdown(ScoreDataset(trained.best, split.eval, config.workers));
  return out;
}

Matrix MeanNormalize(const Matrix& frames) {
  if (frames.rows() == 0) return frames;
  return frames.rowwise() - frames.colwise().mean();
}

std::vector<SimilarityPair> SimilarityPairs(const SimulatedCorpus& corpus) {
  Dataset all = corpus.offline;
  all.insert(all.end(), corpus.online.begin(), corpus.online.end());
  return SimilarityPairs(all);
}

}  // namespace rtcdd
