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

#ifndef RTCDD_SYNTH_H_
#define RTCDD_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rtcdd/audio.h"
#include "rtcdd/manifest.h"
#include "rtcdd/phoneme.h"

namespace rtcdd {

// Toy corpus generator. Bonafide speech is a jittered harmonic source shaped
// by per-phone formants, with noise-excited fricatives. Fake speech comes
// from the same generator plus two artifacts: a comb-notch signature over
// the whole band and a high-band buzz above 7 kHz during voiced phones.
struct SynthOptions {
  int speakers = 8;
  int bonafide_per_cell = 4;  // per (speaker, noise)
  int fake_per_cell = 1;      // per (generator, speaker, noise)
  std::vector<std::string> gen_ids = {"G01", "G02", "G03", "G04"};
  std::vector<std::string> noise_ids = {"S01"};
  double noise_snr_db = 15.0;
  int min_phones = 6;
  int max_phones = 10;
  double comb_gain = 0.6;           // comb coefficient of the fake signature
  double buzz_level_db = -18.0;     // high-band buzz relative to the speech RMS
  double buzz_low_hz = 7000.0;
  double room_noise_dbfs = -60.0;   // background floor, RMS
  std::uint64_t seed = 0;

  // Throws ConfigError on non-positive counts or unknown IDs.
  void Validate() const;
  std::size_t expected_rows() const;
};

struct SynthUtterance {
  AudioClip clip;
  UtteranceRecord record;
  PhonemeSegmentation segmentation;  // canonical 25/10 ms frame grid
};

std::vector<SynthUtterance> GenerateSynthCorpus(const SynthOptions& options, int workers = 1);

// Writes {dir}/wav/{utt_id}.wav, {dir}/manifest.tsv and
// {dir}/boundaries.tsv (audio paths relative to dir).
void WriteSynthCorpus(const std::vector<SynthUtterance>& corpus,
                      const std::filesystem::path& dir);

// Frames [start, end) of the canonical grid whose centre lies in the sample
// span [begin, end).
std::pair<Eigen::Index, Eigen::Index> SampleSpanToFrames(std::size_t begin, std::size_t end,
                                                         std::size_t num_frames);

}  // namespace rtcdd

#endif  // RTCDD_SYNTH_H_
