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

#ifndef RTCDD_CODEC_H_
#define RTCDD_CODEC_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtcdd/audio.h"

namespace rtcdd {

// kPcm16 is plain 16-bit linear PCM (L16): lossless for 16-bit sources.
enum class Codec { kMulaw, kAdpcmIma, kSubbandQ, kPcm16 };

std::string_view CodecName(Codec codec);
// Throws ConfigError for unknown names.
Codec ParseCodec(std::string_view name);

namespace codec {

// G.711 mu-law (mu = 255) on 16-bit linear PCM.
std::uint8_t MulawEncode(std::int16_t pcm);
std::int16_t MulawDecode(std::uint8_t code);

// IMA ADPCM, 4 bits per sample, predictor and step index start at zero.
std::vector<std::uint8_t> AdpcmEncode(std::span<const std::int16_t> pcm);
std::vector<std::int16_t> AdpcmDecode(std::span<const std::uint8_t> codes);

inline constexpr int kMdctFrame = 512;

// MDCT transform coder: sine window, frame 512 with hop 256, per-frame scale
// factor = max |coefficient|, mid-tread uniform quantizer with
// 2^(bits-1) - 1 levels per sign. Zero-delay: the first frame is centred on
// a half-frame of leading zeros.
std::vector<double> SubbandRoundTrip(std::span<const double> x, int bits);

// Unquantized MDCT analysis/synthesis; reconstruction to rounding error.
std::vector<double> MdctRoundTrip(std::span<const double> x);

std::int16_t ToPcm16(double s);
double FromPcm16(std::int16_t v);

}  // namespace codec

// Encode/decode through the named codec. bits applies to kSubbandQ only and
// must lie in [2, 8].
AudioClip CodecRoundTrip(const AudioClip& clip, Codec codec, int bits = 4);

}  // namespace rtcdd

#endif  // RTCDD_CODEC_H_
