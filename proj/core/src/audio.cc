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

#include "rtcdd/audio.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include "rtcdd/error.h"

namespace rtcdd {

void ClipInPlace(std::vector<double>& samples) {
  for (double& s : samples) {
    if (!std::isfinite(s)) {
      s = 0.0;
    } else {
      s = std::clamp(s, -1.0, 1.0);
    }
  }
}

double Rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double RmsDbfs(std::span<const double> x) {
  return 20.0 * std::log10(std::max(Rms(x), 1e-12));
}

double DbToLinear(double db) { return std::pow(10.0, db / 20.0); }

int MsToSamples(double ms, int sample_rate_hz) {
  return static_cast<int>(std::lround(ms * sample_rate_hz / 1000.0));
}

AudioClip Delay(const AudioClip& clip, std::size_t delay) {
  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.id = clip.id;
  out.samples.assign(delay, 0.0);
  out.samples.insert(out.samples.end(), clip.samples.begin(),
                     clip.samples.end());
  return out;
}

void RequireSameRate(const AudioClip& a, const AudioClip& b) {
  if (a.sample_rate_hz != b.sample_rate_hz) {
    throw ConfigError("sample rate mismatch: " +
                      std::to_string(a.sample_rate_hz) + " vs " +
                      std::to_string(b.sample_rate_hz));
  }
}

namespace {

std::uint32_t ReadU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void PutU16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

constexpr std::uint16_t kWaveFormatPcm = 1;
constexpr std::uint16_t kWaveFormatExtensible = 0xfffe;

}  // namespace

AudioClip ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = " in " + path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("missing RIFF/WAVE header" + where);
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t len = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) {
      // Tolerate a truncated data chunk (common for streamed writers).
      if (std::memcmp(chunk, "data", 4) == 0) {
        data = bytes.data() + body;
        data_len = bytes.size() - body;
        break;
      }
      throw FormatError("chunk overruns file" + where);
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (len < 16) throw FormatError("fmt chunk too short" + where);
      format = ReadU16(chunk + 8);
      channels = ReadU16(chunk + 10);
      rate = ReadU32(chunk + 12);
      bits = ReadU16(chunk + 22);
      if (format == kWaveFormatExtensible && len >= 26) {
        format = ReadU16(chunk + 32);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_len = len;
    }
    pos = body + len + (len & 1u);
  }

  if (!have_fmt) throw FormatError("no fmt chunk" + where);
  if (data == nullptr) throw FormatError("no data chunk" + where);
  if (format != kWaveFormatPcm) {
    throw UnsupportedError("non-PCM encoding (format tag " +
                           std::to_string(format) + ")" + where);
  }
  if (bits != 16) {
    throw UnsupportedError(std::to_string(bits) + "-bit PCM" + where);
  }
  if (channels != 1 && channels != 2) {
    throw UnsupportedError(std::to_string(channels) + " channels" + where);
  }
  if (rate == 0) throw FormatError("zero sample rate" + where);

  const std::size_t frame_bytes = 2u * channels;
  const std::size_t frames = data_len / frame_bytes;
  AudioClip clip;
  clip.sample_rate_hz = static_cast<int>(rate);
  clip.id = path.stem().string();
  clip.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const unsigned char* p = data + i * frame_bytes;
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      acc += static_cast<std::int16_t>(ReadU16(p + 2 * c)) / 32768.0;
    }
    clip.samples[i] = acc / channels;
  }
  if (clip.sample_rate_hz != kCanonicalRate) {
    clip = Resample(clip, kCanonicalRate);
  }
  return clip;
}

void WriteWav(const AudioClip& clip, const std::filesystem::path& path) {
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  std::vector<unsigned char> out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  PutTag(out, "RIFF");
  PutU32(out, 36 + 2 * n);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kWaveFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, 2 * n);
  for (double s : clip.samples) {
    const double v = std::isfinite(s) ? std::round(s * 32768.0) : 0.0;
    const auto q = static_cast<std::int16_t>(std::clamp(v, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(q));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed for " + path.string());
}

namespace {

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Blackman window over [-1, 1].
double Blackman(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double a = std::numbers::pi * (u + 1.0);
  return 0.42 - 0.5 * std::cos(a) + 0.08 * std::cos(2.0 * a);
}

constexpr int kZeroCrossings = 16;

}  // namespace

AudioClip Resample(const AudioClip& clip, int target_hz) {
  if (target_hz <= 0) throw ConfigError("resample target must be positive");
  if (target_hz == clip.sample_rate_hz) return clip;

  const int source_hz = clip.sample_rate_hz;
  const auto n_in = static_cast<std::int64_t>(clip.samples.size());
  const std::int64_t n_out =
      (n_in * target_hz + source_hz / 2) / source_hz;
  const double step = static_cast<double>(source_hz) / target_hz;
  // Cutoff relative to the input Nyquist; lowered when downsampling.
  const double cutoff = std::min(1.0, static_cast<double>(target_hz) / source_hz);
  const double half_width = kZeroCrossings / cutoff;

  AudioClip out;
  out.sample_rate_hz = target_hz;
  out.id = clip.id;
  out.samples.resize(static_cast<std::size_t>(n_out));
  for (std::int64_t m = 0; m < n_out; ++m) {
    const double t = static_cast<double>(m) * step;
    const auto lo = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil(t - half_width)));
    const auto hi = std::min<std::int64_t>(
        n_in - 1, static_cast<std::int64_t>(std::floor(t + half_width)));
    double acc = 0.0, norm = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) {
      const double x = t - static_cast<double>(k);
      const double w = cutoff * Sinc(cutoff * x) * Blackman(x / half_width);
      acc += w * clip.samples[static_cast<std::size_t>(k)];
      norm += w;
    }
    out.samples[static_cast<std::size_t>(m)] =
        std::abs(norm) > 1e-12 ? acc / norm : 0.0;
  }
  ClipInPlace(out.samples);
  return out;
}

}  // namespace rtcdd
