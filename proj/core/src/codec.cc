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

#include "rtcdd/codec.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "rtcdd/error.h"

namespace rtcdd {

std::string_view CodecName(Codec codec) {
  switch (codec) {
    case Codec::kMulaw: return "mulaw";
    case Codec::kAdpcmIma: return "adpcm_ima";
    case Codec::kSubbandQ: return "subband_q";
    case Codec::kPcm16: return "pcm16";
  }
  return "?";
}

Codec ParseCodec(std::string_view name) {
  if (name == "mulaw") return Codec::kMulaw;
  if (name == "adpcm_ima") return Codec::kAdpcmIma;
  if (name == "subband_q") return Codec::kSubbandQ;
  if (name == "pcm16") return Codec::kPcm16;
  throw ConfigError("unknown codec '" + std::string(name) + "'");
}

namespace codec {

std::int16_t ToPcm16(double s) {
  const double v = std::isfinite(s) ? std::round(s * 32768.0) : 0.0;
  return static_cast<std::int16_t>(std::clamp(v, -32768.0, 32767.0));
}

double FromPcm16(std::int16_t v) { return v / 32768.0; }

namespace {

constexpr int kMulawBias = 0x84;
constexpr int kMulawClip = 32635;

}  // namespace

std::uint8_t MulawEncode(std::int16_t pcm) {
  int sample = pcm;
  int sign = 0;
  if (sample < 0) {
    sign = 0x80;
    sample = -sample;
  }
  sample = std::min(sample, kMulawClip) + kMulawBias;
  const int top = (sample >> 7) & 0xff;
  const int exponent = top <= 1 ? 0 : std::bit_width(static_cast<unsigned>(top)) - 1;
  const int mantissa = (sample >> (exponent + 3)) & 0x0f;
  return static_cast<std::uint8_t>(~(sign | (exponent << 4) | mantissa));
}

std::int16_t MulawDecode(std::uint8_t code) {
  const int u = static_cast<std::uint8_t>(~code);
  const int exponent = (u >> 4) & 0x07;
  const int mantissa = u & 0x0f;
  const int magnitude = (((mantissa << 3) + kMulawBias) << exponent) - kMulawBias;
  return static_cast<std::int16_t>((u & 0x80) ? -magnitude : magnitude);
}

namespace {

constexpr std::array<int, 89> kImaSteps = {
    7,     8,     9,     10,    11,    12,    13,    14,    16,    17,
    19,    21,    23,    25,    28,    31,    34,    37,    41,    45,
    50,    55,    60,    66,    73,    80,    88,    97,    107,   118,
    130,   143,   157,   173,   190,   209,   230,   253,   279,   307,
    337,   371,   408,   449,   494,   544,   598,   658,   724,   796,
    876,   963,   1060,  1166,  1282,  1411,  1552,  1707,  1878,  2066,
    2272,  2499,  2749,  3024,  3327,  3660,  4026,  4428,  4871,  5358,
    5894,  6484,  7132,  7845,  8630,  9493,  10442, 11487, 12635, 13899,
    15289, 16818, 18500, 20350, 22385, 24623, 27086, 29794, 32767};

constexpr std::array<int, 8> kImaIndexAdjust = {-1, -1, -1, -1, 2, 4, 6, 8};

struct ImaState {
  int predictor = 0;
  int index = 0;

  // Applies a 4-bit code; shared by encoder and decoder so they track.
  void Apply(int code) {
    const int step = kImaSteps[static_cast<std::size_t>(index)];
    int delta = step >> 3;
    if (code & 4) delta += step;
    if (code & 2) delta += step >> 1;
    if (code & 1) delta += step >> 2;
    predictor += (code & 8) ? -delta : delta;
    predictor = std::clamp(predictor, -32768, 32767);
    index = std::clamp(index + kImaIndexAdjust[static_cast<std::size_t>(code & 7)], 0, 88);
  }
};

}  // namespace

std::vector<std::uint8_t> AdpcmEncode(std::span<const std::int16_t> pcm) {
  std::vector<std::uint8_t> codes(pcm.size());
  ImaState state;
  for (std::size_t i = 0; i < pcm.size(); ++i) {
    int diff = pcm[i] - state.predictor;
    int code = 0;
    if (diff < 0) {
      code = 8;
      diff = -diff;
    }
    int step = kImaSteps[static_cast<std::size_t>(state.index)];
    if (diff >= step) {
      code |= 4;
      diff -= step;
    }
    step >>= 1;
    if (diff >= step) {
      code |= 2;
      diff -= step;
    }
    step >>= 1;
    if (diff >= step) code |= 1;
    state.Apply(code);
    codes[i] = static_cast<std::uint8_t>(code);
  }
  return codes;
}

std::vector<std::int16_t> AdpcmDecode(std::span<const std::uint8_t> codes) {
  std::vector<std::int16_t> pcm(codes.size());
  ImaState state;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    state.Apply(codes[i] & 0x0f);
    pcm[i] = static_cast<std::int16_t>(state.predictor);
  }
  return pcm;
}

namespace {

constexpr int kHop = kMdctFrame / 2;

struct MdctTables {
  std::vector<double> window;   // kMdctFrame
  std::vector<double> basis;    // kHop x kMdctFrame, row-major

  MdctTables() : window(kMdctFrame), basis(static_cast<std::size_t>(kHop) * kMdctFrame) {
    for (int n = 0; n < kMdctFrame; ++n) {
      window[static_cast<std::size_t>(n)] =
          std::sin(std::numbers::pi * (n + 0.5) / kMdctFrame);
    }
    for (int k = 0; k < kHop; ++k) {
      for (int n = 0; n < kMdctFrame; ++n) {
        basis[static_cast<std::size_t>(k) * kMdctFrame + static_cast<std::size_t>(n)] =
            std::cos(std::numbers::pi / kHop * (n + 0.5 + kHop / 2.0) * (k + 0.5));
      }
    }
  }
};

const MdctTables& Tables() {
  static const MdctTables tables;
  return tables;
}

// quantize(coefficients) is applied between analysis and synthesis.
template <typename Quantizer>
std::vector<double> MdctProcess(std::span<const double> x, Quantizer&& quantize) {
  const auto& tab = Tables();
  const std::size_t n = x.size();
  const std::size_t blocks = (n + kHop - 1) / kHop;
  const std::size_t padded_len = static_cast<std::size_t>(kHop) * (blocks + 2);
  std::vector<double> padded(padded_len, 0.0), out(padded_len, 0.0);
  std::copy(x.begin(), x.end(), padded.begin() + kHop);

  const Eigen::Map<const Eigen::Matrix<double, kHop, kMdctFrame, Eigen::RowMajor>> basis(
      tab.basis.data());
  std::vector<double> frame(kMdctFrame), coefs(kHop), synth(kMdctFrame);
  for (std::size_t start = 0; start + kMdctFrame <= padded_len; start += kHop) {
    for (int i = 0; i < kMdctFrame; ++i) {
      frame[static_cast<std::size_t>(i)] =
          padded[start + static_cast<std::size_t>(i)] * tab.window[static_cast<std::size_t>(i)];
    }
    Eigen::Map<Eigen::VectorXd>(coefs.data(), kHop).noalias() =
        basis * Eigen::Map<const Eigen::VectorXd>(frame.data(), kMdctFrame);
    quantize(coefs);
    Eigen::Map<Eigen::VectorXd>(synth.data(), kMdctFrame).noalias() =
        basis.transpose() * Eigen::Map<const Eigen::VectorXd>(coefs.data(), kHop);
    for (int i = 0; i < kMdctFrame; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      out[start + ui] += synth[ui] * tab.window[ui] * (2.0 / kHop);
    }
  }
  return {out.begin() + kHop, out.begin() + kHop + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace

std::vector<double> MdctRoundTrip(std::span<const double> x) {
  return MdctProcess(x, [](std::vector<double>&) {});
}

std::vector<double> SubbandRoundTrip(std::span<const double> x, int bits) {
  if (bits < 2 || bits > 8) {
    throw ConfigError("subband_q bits must be in [2, 8], got " + std::to_string(bits));
  }
  const double levels = static_cast<double>((1 << (bits - 1)) - 1);
  return MdctProcess(x, [levels](std::vector<double>& coefs) {
    double scale = 0.0;
    for (double c : coefs) scale = std::max(scale, std::abs(c));
    if (scale <= 0.0) return;
    for (double& c : coefs) {
      const double q = std::clamp(std::round(c / scale * levels), -levels, levels);
      c = q * scale / levels;
    }
  });
}

}  // namespace codec

AudioClip CodecRoundTrip(const AudioClip& clip, Codec which, int bits) {
  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.id = clip.id;
  switch (which) {
    case Codec::kMulaw: {
      out.samples.resize(clip.size());
      for (std::size_t i = 0; i < clip.size(); ++i) {
        out.samples[i] = codec::FromPcm16(
            codec::MulawDecode(codec::MulawEncode(codec::ToPcm16(clip.samples[i]))));
      }
      break;
    }
    case Codec::kAdpcmIma: {
      std::vector<std::int16_t> pcm(clip.size());
      for (std::size_t i = 0; i < clip.size(); ++i) pcm[i] = codec::ToPcm16(clip.samples[i]);
      const auto decoded = codec::AdpcmDecode(codec::AdpcmEncode(pcm));
      out.samples.resize(decoded.size());
      for (std::size_t i = 0; i < decoded.size(); ++i) {
        out.samples[i] = codec::FromPcm16(decoded[i]);
      }
      break;
    }
    case Codec::kSubbandQ:
      out.samples = codec::SubbandRoundTrip(clip.samples, bits);
      break;
    case Codec::kPcm16:
      out.samples.resize(clip.size());
      for (std::size_t i = 0; i < clip.size(); ++i) {
        out.samples[i] = codec::FromPcm16(codec::ToPcm16(clip.samples[i]));
      }
      break;
  }
  ClipInPlace(out.samples);
  return out;
}

}  // namespace rtcdd
