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

#ifndef RTCDD_FEATURES_H_
#define RTCDD_FEATURES_H_

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "rtcdd/audio.h"

namespace rtcdd {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Frame-level features, one row per frame: frame t covers samples
// [t * hop, t * hop + win) of the source clip.
struct FeatureSequence {
  Matrix frames;
  double frame_hop_ms = 10.0;
  double frame_len_ms = 25.0;
  std::string source_id;

  Eigen::Index num_frames() const { return frames.rows(); }
  Eigen::Index dim() const { return frames.cols(); }
};

struct LogMelOptions {
  int n_mels = 40;
  double win_ms = 25.0;
  double hop_ms = 10.0;
};

inline constexpr double kLogFloor = 1e-10;

// floor((num_samples - win) / hop) + 1, or 0 when the clip is shorter than
// one window.
std::size_t NumFrames(std::size_t num_samples, std::size_t win, std::size_t hop);

// Hann window -> |FFT|^2 -> HTK mel filterbank (0 Hz..Nyquist) ->
// log(x + 1e-10). Throws TooShortError below one window.
FeatureSequence LogMelFeatures(const AudioClip& clip,
                               const LogMelOptions& opts = {});

// Triangular HTK-mel weights, n_mels x (fft_size / 2 + 1).
Matrix MelFilterbank(int n_mels, std::size_t fft_size, int sample_rate_hz);

// Per-frame 10 log10(mean square + 1e-10) on the same frame grid as the
// log-mel features.
std::vector<double> FrameLogEnergy(const AudioClip& clip, double win_ms = 25.0,
                                   double hop_ms = 10.0);

// Lag in [0, max_lag] maximizing the normalized cross-correlation between
// reference[n] and degraded[n + lag] over their overlap. A positive lag means
// the degraded clip is delayed. Ties resolve to the smaller lag.
long AlignLag(const AudioClip& reference, const AudioClip& degraded,
              double max_lag_ms = 500.0);

}  // namespace rtcdd

#endif  // RTCDD_FEATURES_H_
