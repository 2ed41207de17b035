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

#include "rtcdd/trainer.h"

#include <spdlog/spdlog.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "rtcdd/error.h"
#include "rtcdd/parallel.h"
#include "rtcdd/rng.h"

namespace rtcdd {

TrainConfig TrainConfig::ReferenceConfig() {
  TrainConfig c;
  c.lr = 1e-6;
  c.weight_decay = 1e-4;
  c.max_epochs = 100;
  c.patience = 10;
  return c;
}

void TrainConfig::Validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be > 0");
  if (weight_decay < 0.0) throw ConfigError("weight_decay must be >= 0");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (patience < 1 || patience > max_epochs) {
    throw ConfigError("patience must be in [1, max_epochs]");
  }
  if (lambda < 0.0 || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (hidden < 1) throw ConfigError("hidden size must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

Consistency TrainConfig::consistency() const {
  switch (regime) {
    case Regime::kPcl: return Consistency::kPhoneme;
    case Regime::kFcl: return Consistency::kFrame;
    default: return Consistency::kNone;
  }
}

namespace {

void AdamWTensor(Eigen::Ref<Matrix> p, const Matrix& g, Eigen::Ref<Matrix> m,
                 Eigen::Ref<Matrix> v, double lr, double wd, double c1, double c2) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  m = kBeta1 * m + (1.0 - kBeta1) * g;
  v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
  p *= 1.0 - lr * wd;
  p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + kEps);
}

}  // namespace

void AdamWStep(Params& params, const Params& grad, Moments& moments, std::size_t step,
               double lr, double weight_decay) {
  const double t = static_cast<double>(step);
  const double c1 = 1.0 - std::pow(0.9, t);
  const double c2 = 1.0 - std::pow(0.999, t);
  AdamWTensor(params.w_proj, grad.w_proj, moments.first.w_proj, moments.second.w_proj, lr,
              weight_decay, c1, c2);
  AdamWTensor(params.w_cls, grad.w_cls, moments.first.w_cls, moments.second.w_cls, lr,
              weight_decay, c1, c2);
  // Row vectors go through the same matrix path.
  Matrix bp = params.b_proj, mbp = moments.first.b_proj, vbp = moments.second.b_proj;
  AdamWTensor(bp, grad.b_proj, mbp, vbp, lr, weight_decay, c1, c2);
  params.b_proj = bp;
  moments.first.b_proj = mbp;
  moments.second.b_proj = vbp;
  Matrix bc = params.b_cls, mbc = moments.first.b_cls, vbc = moments.second.b_cls;
  AdamWTensor(bc, grad.b_cls, mbc, vbc, lr, weight_decay, c1, c2);
  params.b_cls = bc;
  moments.first.b_cls = mbc;
  moments.second.b_cls = vbc;
}

void FitStandardizer(const Dataset& data, DetectorModel& model) {
  const Eigen::Index d = model.input_dim();
  RowVector sum = RowVector::Zero(d), sq = RowVector::Zero(d);
  double count = 0.0;
  for (const auto& u : data) {
    if (u.features.cols() != d) throw ShapeError("feature width does not match the model");
    sum += u.features.colwise().sum();
    sq += u.features.cwiseProduct(u.features).colwise().sum();
    count += static_cast<double>(u.features.rows());
  }
  if (count == 0.0) throw EmptyBatchError("no frames to fit the input standardizer");
  model.input_mean = sum / count;
  const RowVector var = (sq / count - model.input_mean.cwiseProduct(model.input_mean))
                            .cwiseMax(0.0);
  model.input_scale = var.cwiseSqrt().cwiseMax(1e-6).cwiseInverse();
}

TrainItems BuildTrainItems(const Dataset& data, Regime regime) {
  TrainItems out;
  if (regime == Regime::kOff || regime == Regime::kOn || regime == Regime::kMix) {
    for (const auto& u : data) {
      const bool take = regime == Regime::kMix || (regime == Regime::kOff) == u.is_offline();
      if (take) out.all.singles.push_back({&u.features, u.label});
    }
    return out;
  }
  std::map<std::string, const Utterance*> offline;
  for (const auto& u : data) {
    if (u.is_offline()) offline.emplace(u.utt_id, &u);
  }
  std::vector<std::pair<const Utterance*, const Utterance*>> matched;
  for (const auto& u : data) {
    if (u.is_offline()) continue;
    const auto it = u.pair_id ? offline.find(*u.pair_id) : offline.end();
    if (it == offline.end()) {
      ++out.skipped_unpaired;
      continue;
    }
    matched.emplace_back(it->second, &u);
  }
  if (matched.empty()) {
    throw PairingError(std::string(RegimeName(regime)) +
                       " regime needs offline/online pairs linked by pair_id; none found");
  }
  if (out.skipped_unpaired > 0) {
    spdlog::warn("{} regime: skipped {} unpaired online record(s)", RegimeName(regime),
                 out.skipped_unpaired);
  }
  out.online_segments.reserve(matched.size());
  for (const auto& [off, on] : matched) {
    const PhonemeSegmentation& seg = off->segmentation;
    if (regime == Regime::kPcl && seg.segments.empty()) {
      throw SegmentationError("offline utterance " + off->utt_id + " has no phone segments");
    }
    out.online_segments.push_back(
        regime == Regime::kPcl ? AlignSegmentations(seg, 0, on->features.rows())
                               : PhonemeSegmentation{});
  }
  for (std::size_t i = 0; i < matched.size(); ++i) {
    const auto& [off, on] = matched[i];
    out.all.pairs.push_back({&off->features, &on->features, &off->segmentation,
                             &out.online_segments[i], off->label});
  }
  return out;
}

Dataset SelectForRegime(const Dataset& data, Regime regime) {
  if (regime != Regime::kOff && regime != Regime::kOn) return data;
  Dataset out;
  for (const auto& u : data) {
    if ((regime == Regime::kOff) == u.is_offline()) out.push_back(u);
  }
  return out;
}

std::vector<ScoredTrial> ScoreDataset(const DetectorModel& model, const Dataset& data,
                                      int workers) {
  std::vector<ScoredTrial> trials(data.size());
  ParallelFor(data.size(), workers, [&](std::size_t i) {
    const auto& u = data[i];
    trials[i] = ScoredTrial{u.utt_id, Score(Forward(model, u.features).logits), u.label,
                            u.platform_id, u.noise_id};
  });
  return trials;
}

TrainResult Train(const Dataset& train, const Dataset& dev, const TrainConfig& config) {
  config.Validate();
  if (train.empty()) throw EmptyBatchError("training set is empty");
  TrainItems items = BuildTrainItems(train, config.regime);
  const std::size_t n = items.all.size();
  if (n == 0) {
    throw EmptyBatchError("regime " + std::string(RegimeName(config.regime)) +
                          " selects no training utterances");
  }
  const Dataset dev_view = SelectForRegime(dev, config.regime);
  const double lambda =
      config.consistency() == Consistency::kNone ? 0.0 : config.lambda;

  TrainResult result;
  result.skipped_unpaired = items.skipped_unpaired;
  TrainState& state = result.state;
  state.model = DetectorModel::Init(train.front().features.cols(), config.hidden, config.seed);
  {
    // The standardizer sees exactly the utterances the regime trains on.
    Dataset seen;
    for (const auto& u : train) {
      const bool off = u.is_offline();
      if (config.regime == Regime::kOff && !off) continue;
      if (config.regime == Regime::kOn && off) continue;
      seen.push_back(Utterance{u.utt_id, u.label, u.platform_id, u.noise_id, u.speaker_id,
                               u.pair_id, u.features, {}});
    }
    FitStandardizer(seen, state.model);
  }
  const Eigen::Index d = state.model.input_dim(), m = state.model.hidden_dim();
  state.moments = {Params::Zeros(d, m), Params::Zeros(d, m)};
  state.best_dev_eer = std::numeric_limits<double>::infinity();
  result.best = state.model;

  std::vector<std::size_t> order(n);
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(DeriveSeed(DeriveSeed(config.seed, "shuffle"), static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(rng.UniformInt(0, static_cast<long long>(i)));
      std::swap(order[i], order[j]);
    }
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(n, start + static_cast<std::size_t>(config.batch_size));
      Batch batch;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t idx = order[k];
        if (idx < items.all.singles.size()) {
          batch.singles.push_back(items.all.singles[idx]);
        } else {
          batch.pairs.push_back(items.all.pairs[idx - items.all.singles.size()]);
        }
      }
      LossAndGradient lg =
          BatchGradients(state.model, batch, config.consistency(), lambda, config.workers);
      epoch_loss += lg.loss;
      lg.grad *= 1.0 / static_cast<double>(batch.size());
      ++state.step;
      AdamWStep(state.model.params, lg.grad, state.moments, state.step, config.lr,
                config.weight_decay);
    }
    state.epoch = epoch;
    EpochRecord record{epoch, epoch_loss / static_cast<double>(n),
                       std::numeric_limits<double>::quiet_NaN()};
    if (!dev_view.empty()) {
      const auto trials = ScoreDataset(state.model, dev_view, config.workers);
      record.dev_eer = ComputeEer(trials);
      // A tie refreshes the returned checkpoint (later is better trained)
      // but only a strict improvement resets the patience counter.
      if (record.dev_eer <= state.best_dev_eer) result.best = state.model;
      if (record.dev_eer < state.best_dev_eer) {
        state.best_dev_eer = record.dev_eer;
        state.epochs_since_improvement = 0;
      } else {
        ++state.epochs_since_improvement;
      }
    } else {
      result.best = state.model;
    }
    result.history.push_back(record);
    spdlog::debug("epoch {}: loss {:.6f} dev_eer {:.4f}", epoch, record.train_loss,
                  record.dev_eer);
    if (!state.model.params.AllFinite()) {
      throw ConfigError("training diverged at epoch " + std::to_string(epoch) +
                        " (non-finite parameters); lower the learning rate");
    }
    if (state.epochs_since_improvement >= config.patience) break;
  }
  return result;
}

std::string HistoryToTsv(const std::vector<EpochRecord>& history) {
  std::ostringstream out;
  out << "epoch\ttrain_loss\tdev_eer\n";
  char buf[64];
  for (const auto& r : history) {
    out << r.epoch << '\t';
    out << std::string(buf, std::to_chars(buf, buf + sizeof(buf), r.train_loss).ptr) << '\t';
    if (std::isnan(r.dev_eer)) {
      out << "nan";
    } else {
      out << std::string(buf, std::to_chars(buf, buf + sizeof(buf), r.dev_eer).ptr);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rtcdd
