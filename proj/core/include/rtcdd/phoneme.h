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

#ifndef RTCDD_PHONEME_H_
#define RTCDD_PHONEME_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rtcdd/features.h"

namespace rtcdd {

// Frame set [start, end) of one phone.
struct PhoneSegment {
  Eigen::Index start = 0;
  Eigen::Index end = 0;
  std::string label;

  Eigen::Index length() const { return end - start; }
  bool operator==(const PhoneSegment&) const = default;
};

// Ordered, non-overlapping phone segments over a frame axis. Gaps are
// allowed; frames in gaps do not participate in pooling.
struct PhonemeSegmentation {
  std::string utt_id;
  std::vector<PhoneSegment> segments;

  // Throws BoundsError unless segments are sorted, non-overlapping,
  // non-empty and inside [0, num_frames).
  void Validate(Eigen::Index num_frames) const;
  bool operator==(const PhonemeSegmentation&) const = default;
};

struct PhonemeReps {
  Matrix reps;  // K x d
  std::vector<std::string> labels;
  std::string source_id;
};

// Row k is the mean of frames[start_k, end_k). Throws EmptyError for an
// empty segmentation and BoundsError for segments outside the frame range.
Matrix PoolRows(const Matrix& frames, const PhonemeSegmentation& seg);
PhonemeReps PoolPhonemes(const FeatureSequence& features, const PhonemeSegmentation& seg);

// Shifts every boundary by lag_frames and clips to [0, online_frames);
// segments emptied by clipping are dropped (and counted in a log line).
// Throws AlignmentError when nothing survives.
PhonemeSegmentation AlignSegmentations(const PhonemeSegmentation& offline,
                                       Eigen::Index lag_frames, Eigen::Index online_frames);

// Change-point segmentation: a segment boundary is placed where the
// log-mel spectral flux exceeds twice its running median (previous 10
// frames) and the open segment already spans min_seg_frames. Frames more
// than 40 dB below the loudest frame, or at the log floor, are silence and
// close the open segment. Throws EmptyError when every frame is silent.
PhonemeSegmentation EnergySegmenter(const FeatureSequence& features, int min_seg_frames = 3);

// Mean over all K*d elements of (a - b)^2. Row counts that differ are
// truncated to the smaller one with a warning; throws EmptyError when K = 0
// and ShapeError when the widths differ.
double PclLoss(const Matrix& a, const Matrix& b);
double PclLoss(const PhonemeReps& a, const PhonemeReps& b);

// Element-wise MSE over the first min(T_a, T_b) frames.
double FclLoss(const Matrix& a, const Matrix& b);
double FclLoss(const FeatureSequence& a, const FeatureSequence& b);

// Cosine similarity; 0 when either vector is zero.
double Cosine(const Eigen::Ref<const RowVector>& a, const Eigen::Ref<const RowVector>& b);

enum class SimilarityLevel { kFrame, kPhoneme };

struct SimilarityStats {
  double mean = 0.0;
  double variance = 0.0;  // population variance over pairs
  std::vector<double> per_pair;
};

// Per pair: mean row-wise cosine over the first min(rows) units. Then the
// distribution over pairs. Throws EmptyError for no pairs.
SimilarityStats ComputeSimilarityStats(std::span<const std::pair<Matrix, Matrix>> pairs);

// Boundary file: tab-separated utt_id, start_frame, end_frame, phone_label,
// sorted per utterance.
std::map<std::string, PhonemeSegmentation> ReadBoundaries(const std::filesystem::path& path);
std::map<std::string, PhonemeSegmentation> ParseBoundaries(const std::string& text);
void WriteBoundaries(const std::vector<PhonemeSegmentation>& segs,
                     const std::filesystem::path& path);

}  // namespace rtcdd

#endif  // RTCDD_PHONEME_H_
