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

#ifndef RTCDD_AUDIO_H_
#define RTCDD_AUDIO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rtcdd {

inline constexpr int kCanonicalRate = 16000;

// Mono PCM audio. Public operations keep every sample finite and inside
// [-1, 1]; out-of-range values are clipped, never wrapped.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = kCanonicalRate;
  std::string id;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_sec() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Clamps every sample to [-1, 1] and replaces non-finite values with 0.
void ClipInPlace(std::vector<double>& samples);

double Rms(std::span<const double> x);
double RmsDbfs(std::span<const double> x);
double DbToLinear(double db);

int MsToSamples(double ms, int sample_rate_hz);

// x delayed by `delay` samples (zeros prepended); length grows by `delay`.
AudioClip Delay(const AudioClip& clip, std::size_t delay);

// Throws ConfigError when the two clips do not share a sample rate.
void RequireSameRate(const AudioClip& a, const AudioClip& b);

// RIFF/WAVE reader for 16-bit PCM, mono or stereo (averaged). Output is
// scaled by 1/32768 and resampled to 16 kHz.
AudioClip ReadWav(const std::filesystem::path& path);

// Writes 16-bit PCM mono. Samples are rounded and saturated to
// [-32768, 32767], so 1.0 encodes as 32767.
void WriteWav(const AudioClip& clip, const std::filesystem::path& path);

// Windowed-sinc resampler. Output length is round(n * target / source);
// kernel weights are renormalized per output sample so DC passes exactly.
AudioClip Resample(const AudioClip& clip, int target_hz);

}  // namespace rtcdd

#endif  // RTCDD_AUDIO_H_
