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

#ifndef RTCDD_TRAINER_H_
#define RTCDD_TRAINER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtcdd/eval.h"
#include "rtcdd/model.h"

namespace rtcdd {

// One utterance with extracted features, ready for training or scoring.
struct Utterance {
  std::string utt_id;
  Label label = Label::kBonafide;
  std::string platform_id = std::string(kOfflinePlatform);
  std::string noise_id = "S01";
  std::string speaker_id;
  std::optional<std::string> pair_id;  // online records: utt_id of the offline source
  Matrix features;
  // Phone segments on the offline frame grid. Only read for offline
  // utterances; online segments are derived by shifting.
  PhonemeSegmentation segmentation;

  bool is_offline() const { return platform_id == kOfflinePlatform; }
};

using Dataset = std::vector<Utterance>;

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  int max_epochs = 100;
  int patience = 10;
  double lambda = 0.0;
  Regime regime = Regime::kOff;
  int batch_size = 16;
  std::uint64_t seed = 0;
  Eigen::Index hidden = kDefaultHidden;
  int workers = 1;

  // Learning-rate and stopping values of the reference training recipe.
  static TrainConfig ReferenceConfig();

  // Throws ConfigError on out-of-range values.
  void Validate() const;
  Consistency consistency() const;
};

struct Moments {
  Params first;
  Params second;
};

struct TrainState {
  DetectorModel model;
  Moments moments;
  std::size_t step = 0;
  int epoch = 0;
  double best_dev_eer = 0.0;  // +inf until the first dev evaluation
  int epochs_since_improvement = 0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean per training item
  double dev_eer = 0.0;     // NaN without a dev set
};

struct TrainResult {
  TrainState state;    // state after the last epoch
  DetectorModel best;  // parameters at the best dev EER
  std::vector<EpochRecord> history;
  std::size_t skipped_unpaired = 0;
};

// One AdamW update (beta1 0.9, beta2 0.999, eps 1e-8) with decoupled weight
// decay: params <- params * (1 - lr * wd) - lr * m_hat / (sqrt(v_hat) + eps).
void AdamWStep(Params& params, const Params& grad, Moments& moments, std::size_t step,
               double lr, double weight_decay);

// Per-dimension mean and 1/sd of the stacked training frames.
void FitStandardizer(const Dataset& data, DetectorModel& model);

// Training items for a regime: off/on/mix give single items over the
// offline, online or all utterances; pcl/fcl give offline/online pairs.
struct TrainItems {
  Batch all;
  std::vector<PhonemeSegmentation> online_segments;  // backing store for pairs
  std::size_t skipped_unpaired = 0;
};
TrainItems BuildTrainItems(const Dataset& data, Regime regime);

// Utterances of a dev or eval set that the regime can see during model
// selection: offline only for off, online only for on, everything else.
Dataset SelectForRegime(const Dataset& data, Regime regime);

std::vector<ScoredTrial> ScoreDataset(const DetectorModel& model, const Dataset& data,
                                      int workers = 1);

// Throws PairingError for pcl/fcl without pairs and EmptyBatchError when
// the regime selects no training data.
TrainResult Train(const Dataset& train, const Dataset& dev, const TrainConfig& config);

std::string HistoryToTsv(const std::vector<EpochRecord>& history);

}  // namespace rtcdd

#endif  // RTCDD_TRAINER_H_
