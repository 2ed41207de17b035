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

#ifndef RTCDD_NOISE_H_
#define RTCDD_NOISE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtcdd/audio.h"

namespace rtcdd {

enum class NoiseKind { kClean, kBabble, kEcho, kFilteredNoise, kImpulsive };

std::string_view NoiseKindName(NoiseKind kind);
NoiseKind ParseNoiseKind(std::string_view name);

struct NoiseProfile {
  std::string noise_id = "S01";
  NoiseKind kind = NoiseKind::kClean;
  double snr_db = 20.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

// S01 clean, S02 office babble, S03 cafe babble, S04 echo, S05 rain
// (filtered noise), S06 footsteps and S07 keyboard (impulsive).
std::vector<NoiseProfile> BuiltinNoiseProfiles(double snr_db = 15.0,
                                               std::uint64_t seed = 0);
// Looks up a builtin by id; throws ConfigError for unknown ids.
NoiseProfile BuiltinNoiseProfile(std::string_view noise_id, double snr_db = 15.0,
                                 std::uint64_t seed = 0);

// Samples inside 10 ms frames whose energy is within 40 dB of the loudest.
std::vector<bool> ActiveSpeechMask(std::span<const double> x, int sample_rate_hz);

// SNR in dB between signal and noise, both measured over the active-speech
// samples of the signal.
double ActiveSnrDb(std::span<const double> signal, std::span<const double> noise,
                   int sample_rate_hz);

struct NoisyClip {
  AudioClip clip;
  std::vector<double> noise;  // the exact additive component (output - input)
};

// Mixes procedurally synthesized noise at the profile's SNR, measured over
// active speech. Clean profiles return the input bit-exactly. Throws
// SnrUndefinedError for silent input with a non-clean profile.
NoisyClip InjectNoiseDetailed(const AudioClip& clip, const NoiseProfile& profile);
AudioClip InjectNoise(const AudioClip& clip, const NoiseProfile& profile);

struct Augmentation {
  AudioClip clip;
  std::optional<double> snr_db;     // drawn target when noise was added
  std::vector<double> noise;        // additive component, empty if none
  std::vector<double> impulse_response;  // empty if no convolution
};

// Seeded composition of colored additive noise (SNR in [10, 40] dB) and/or a
// short (<= 32 taps) impulse response, same-length causal convolution.
Augmentation AugmentDetailed(const AudioClip& clip, std::uint64_t seed);
AudioClip Augment(const AudioClip& clip, std::uint64_t seed);

}  // namespace rtcdd

#endif  // RTCDD_NOISE_H_
