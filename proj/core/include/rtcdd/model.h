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

#ifndef RTCDD_MODEL_H_
#define RTCDD_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "rtcdd/features.h"
#include "rtcdd/manifest.h"
#include "rtcdd/phoneme.h"

namespace rtcdd {

// Trainable tensors of the detector. Also reused for gradients and for the
// optimizer moments, which mirror the parameter shapes.
struct Params {
  Matrix w_proj;     // d x m
  RowVector b_proj;  // m
  Matrix w_cls;      // m x 2
  RowVector b_cls;   // 2

  static Params Zeros(Eigen::Index d, Eigen::Index m);
  Eigen::Index input_dim() const { return w_proj.rows(); }
  Eigen::Index hidden_dim() const { return w_proj.cols(); }
  std::size_t size() const;
  bool AllFinite() const;
  double SquaredNorm() const;

  Params& operator+=(const Params& other);
  Params& operator*=(double s);

  // Flat view in the order w_proj (row-major), b_proj, w_cls, b_cls.
  std::vector<double> Flatten() const;
  void Unflatten(const std::vector<double>& flat);
};

// Two affine maps with a ReLU between them. Inputs are standardized with a
// fixed per-dimension shift and scale (set from training data, not learned).
struct DetectorModel {
  Params params;
  RowVector input_mean;   // d
  RowVector input_scale;  // d, multiplies (x - mean)

  static DetectorModel Init(Eigen::Index d, Eigen::Index m, std::uint64_t seed);
  Eigen::Index input_dim() const { return params.input_dim(); }
  Eigen::Index hidden_dim() const { return params.hidden_dim(); }
};

inline constexpr Eigen::Index kDefaultHidden = 32;

struct ForwardResult {
  RowVector logits;  // 2: [bonafide, fake]
  Matrix hidden;     // T x m, after the ReLU
  Matrix standardized;
  const Params* params = nullptr;  // parameters that produced this result
};

// Throws ShapeError when the feature width does not match the model and
// TooShortError for zero frames.
ForwardResult Forward(const DetectorModel& model, const Matrix& frames);
ForwardResult Forward(const DetectorModel& model, const FeatureSequence& features);

// Log-odds of bonafide.
inline double Score(const RowVector& logits) { return logits(0) - logits(1); }

double CrossEntropy(const RowVector& logits, Label label);
double JointLoss(const RowVector& z_a, const RowVector& z_b, Label label, double consistency,
                 double lambda);

enum class Consistency { kNone, kPhoneme, kFrame };

struct SingleItem {
  const Matrix* frames = nullptr;
  Label label = Label::kBonafide;
};

// One offline/online pair. Segmentations are required for kPhoneme.
struct PairItem {
  const Matrix* offline = nullptr;
  const Matrix* online = nullptr;
  const PhonemeSegmentation* seg_offline = nullptr;
  const PhonemeSegmentation* seg_online = nullptr;
  Label label = Label::kBonafide;
};

struct Batch {
  std::vector<SingleItem> singles;
  std::vector<PairItem> pairs;
  std::size_t size() const { return singles.size() + pairs.size(); }
  bool empty() const { return size() == 0; }
};

// Singles contribute CE; pairs contribute JointLoss with the chosen
// consistency computed on the hidden frames. Both quantities are sums over
// the batch. Throws EmptyBatchError for an empty batch.
double BatchLoss(const DetectorModel& model, const Batch& batch, Consistency consistency,
                 double lambda);

struct LossAndGradient {
  double loss = 0.0;
  Params grad;
};

// Analytic gradient of BatchLoss. Per-item work may run on `workers`
// threads; contributions are reduced in item order.
LossAndGradient BatchGradients(const DetectorModel& model, const Batch& batch,
                               Consistency consistency, double lambda, int workers = 1);

// Versioned little-endian binary checkpoint.
void SaveCheckpoint(const DetectorModel& model, const std::filesystem::path& path);
DetectorModel LoadCheckpoint(const std::filesystem::path& path);

}  // namespace rtcdd

#endif  // RTCDD_MODEL_H_
