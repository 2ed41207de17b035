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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "rtcdd/audio.h"
#include "rtcdd/dsp.h"
#include "rtcdd/error.h"
#include "rtcdd/features.h"
#include "test_util.h"

namespace rtcdd {
namespace {

using testing::Sine;
using testing::SpeechLike;
using testing::TempDir;
using testing::WhiteNoise;

// Minimal RIFF writer for arbitrary PCM-16 layouts the library never emits.
void WriteRawWav(const std::filesystem::path& path, const std::vector<std::int16_t>& data,
                 int channels, int rate, std::uint16_t format = 1) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto u16 = [&](std::uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };
  const std::uint32_t bytes = static_cast<std::uint32_t>(data.size() * 2);
  out.write("RIFF", 4);
  u32(36 + bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(format);
  u16(static_cast<std::uint16_t>(channels));
  u32(static_cast<std::uint32_t>(rate));
  u32(static_cast<std::uint32_t>(rate * channels * 2));
  u16(static_cast<std::uint16_t>(channels * 2));
  u16(16);
  out.write("data", 4);
  u32(bytes);
  out.write(reinterpret_cast<const char*>(data.data()), bytes);
}

TEST(ClipInPlace, ClampsAndScrubsNonFinite) {
  std::vector<double> x = {2.0, -3.0, 0.25, std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity()};
  ClipInPlace(x);
  EXPECT_EQ(x, (std::vector<double>{1.0, -1.0, 0.25, 0.0, 0.0}));
}

TEST(ReadWav, ZeroAndFullScaleNegative) {
  const auto dir = TempDir("wav_scale");
  WriteRawWav(dir / "a.wav", {0, -32768, 16384}, 1, 16000);
  const AudioClip clip = ReadWav(dir / "a.wav");
  ASSERT_EQ(clip.size(), 3u);
  EXPECT_EQ(clip.samples[0], 0.0);
  EXPECT_EQ(clip.samples[1], -1.0);
  EXPECT_EQ(clip.samples[2], 0.5);
  EXPECT_EQ(clip.sample_rate_hz, 16000);
}

TEST(ReadWav, StereoIsAveraged) {
  const auto dir = TempDir("wav_stereo");
  WriteRawWav(dir / "s.wav", {1000, 3000, -2000, 2000}, 2, 16000);
  const AudioClip clip = ReadWav(dir / "s.wav");
  ASSERT_EQ(clip.size(), 2u);
  EXPECT_DOUBLE_EQ(clip.samples[0], 2000.0 / 32768.0);
  EXPECT_DOUBLE_EQ(clip.samples[1], 0.0);
}

TEST(ReadWav, ResamplesToCanonicalRate) {
  const auto dir = TempDir("wav_rate");
  std::vector<std::int16_t> pcm(8000, 1000);
  WriteRawWav(dir / "n.wav", pcm, 1, 8000);
  const AudioClip clip = ReadWav(dir / "n.wav");
  EXPECT_EQ(clip.sample_rate_hz, 16000);
  EXPECT_EQ(clip.size(), 16000u);
}

TEST(ReadWav, Errors) {
  const auto dir = TempDir("wav_errors");
  {
    std::ofstream out(dir / "junk.wav", std::ios::binary);
    out << "NOTAWAVEFILE at all, definitely not";
  }
  EXPECT_THROW(ReadWav(dir / "junk.wav"), FormatError);
  WriteRawWav(dir / "float.wav", {0, 0}, 1, 16000, /*format=*/3);
  EXPECT_THROW(ReadWav(dir / "float.wav"), UnsupportedError);
  EXPECT_THROW(ReadWav(dir / "missing.wav"), IoError);
}

TEST(WriteWav, SilenceAndSaturation) {
  const auto dir = TempDir("wav_write");
  AudioClip silence;
  silence.samples.assign(160, 0.0);
  WriteWav(silence, dir / "z.wav");
  const AudioClip back = ReadWav(dir / "z.wav");
  ASSERT_EQ(back.size(), 160u);
  for (double s : back.samples) EXPECT_EQ(s, 0.0);

  AudioClip loud;
  loud.samples = {1.0, -1.0};
  WriteWav(loud, dir / "l.wav");
  std::ifstream in(dir / "l.wav", std::ios::binary);
  in.seekg(44);
  std::int16_t v[2];
  in.read(reinterpret_cast<char*>(v), 4);
  EXPECT_EQ(v[0], 32767);
  EXPECT_EQ(v[1], -32768);
}

TEST(WriteWav, UnwritablePath) {
  AudioClip clip;
  clip.samples = {0.0};
  EXPECT_THROW(WriteWav(clip, "/nonexistent_dir_rtcdd/x.wav"), IoError);
}

TEST(WavRoundTrip, SineWithinOneStep) {
  const auto dir = TempDir("wav_sine");
  const AudioClip sine = Sine(440.0, 1.0, 0.8);
  WriteWav(sine, dir / "sine.wav");
  const AudioClip back = ReadWav(dir / "sine.wav");
  ASSERT_EQ(back.size(), sine.size());
  for (std::size_t i = 0; i < sine.size(); ++i) {
    ASSERT_LE(std::abs(back.samples[i] - sine.samples[i]), 1.0 / 32768.0);
  }
}

TEST(WavRoundTrip, RandomClipsProperty) {
  const auto dir = TempDir("wav_random");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    AudioClip clip;
    clip.samples.resize(static_cast<std::size_t>(rng.UniformInt(1, 4000)));
    for (double& s : clip.samples) s = rng.Uniform(-1.0, 1.0);
    WriteWav(clip, dir / "r.wav");
    const AudioClip back = ReadWav(dir / "r.wav");
    ASSERT_EQ(back.size(), clip.size());
    for (std::size_t i = 0; i < clip.size(); ++i) {
      ASSERT_LE(std::abs(back.samples[i] - clip.samples[i]), 1.0 / 32768.0) << seed;
    }
  }
}

TEST(Resample, IdentityAtSameRate) {
  const AudioClip x = WhiteNoise(1000, 3);
  EXPECT_EQ(Resample(x, 16000).samples, x.samples);
}

TEST(Resample, PreservesDc) {
  AudioClip dc;
  dc.samples.assign(16000, 0.5);
  const AudioClip y = Resample(dc, 8000);
  ASSERT_EQ(y.size(), 8000u);
  EXPECT_EQ(y.sample_rate_hz, 8000);
  for (std::size_t i = 100; i + 100 < y.size(); ++i) EXPECT_NEAR(y.samples[i], 0.5, 1e-3);
}

TEST(Resample, OutputLengthIsRounded) {
  for (std::size_t n : {1u, 3u, 999u, 16001u}) {
    const AudioClip y = Resample(WhiteNoise(n, n), 8000);
    EXPECT_EQ(y.size(), static_cast<std::size_t>(std::lround(n * 0.5))) << n;
  }
}

TEST(Resample, SinePeakStays) {
  const AudioClip y = Resample(Sine(440.0, 1.0), 8000);
  const std::size_t fft = 8192;
  const std::size_t bin = dsp::PeakBin(y.samples, fft);
  const double bin_hz = 8000.0 / fft;
  EXPECT_NEAR(bin * bin_hz, 440.0, bin_hz);
}

TEST(Resample, NarrowbandRoundTripKeepsFrequency) {
  for (double f : {300.0, 1000.0, 2500.0, 3300.0}) {
    const AudioClip x = Sine(f, 1.0);
    const AudioClip y = Resample(Resample(x, 8000), 16000);
    const std::size_t fft = 16384;
    EXPECT_EQ(dsp::PeakBin(y.samples, fft), dsp::PeakBin(x.samples, fft)) << f;
  }
}

TEST(LogMel, SilenceIsFloor) {
  AudioClip silence;
  silence.samples.assign(4000, 0.0);
  const auto f = LogMelFeatures(silence);
  EXPECT_EQ(f.dim(), 40);
  for (Eigen::Index t = 0; t < f.num_frames(); ++t) {
    for (Eigen::Index k = 0; k < f.dim(); ++k) EXPECT_EQ(f.frames(t, k), std::log(1e-10));
  }
}

TEST(LogMel, FramingArithmetic) {
  EXPECT_EQ(LogMelFeatures(WhiteNoise(400, 1)).num_frames(), 1);
  EXPECT_EQ(LogMelFeatures(WhiteNoise(16000, 2)).num_frames(), 98);
  EXPECT_EQ(NumFrames(16000, 400, 160), 98u);
  EXPECT_EQ(NumFrames(399, 400, 160), 0u);
  EXPECT_THROW(LogMelFeatures(WhiteNoise(399, 1)), TooShortError);
}

TEST(LogMel, DeterministicAndFinite) {
  const AudioClip x = SpeechLike(1.0, 9);
  const auto a = LogMelFeatures(x);
  const auto b = LogMelFeatures(x);
  EXPECT_EQ(a.frames, b.frames);
  EXPECT_TRUE(a.frames.allFinite());
  LogMelOptions opts;
  opts.n_mels = 24;
  EXPECT_EQ(LogMelFeatures(x, opts).dim(), 24);
}

TEST(LogMel, ToneLandsInItsMelBand) {
  const auto f = LogMelFeatures(Sine(1000.0, 0.5));
  const Matrix fb = MelFilterbank(40, 512, 16000);
  const auto bin = static_cast<Eigen::Index>(std::lround(1000.0 * 512 / 16000.0));
  Eigen::Index expected = 0;
  fb.col(bin).maxCoeff(&expected);
  Eigen::Index peak = 0;
  f.frames.row(10).maxCoeff(&peak);
  EXPECT_EQ(peak, expected);
}

TEST(AlignLag, IdentityIsZero) {
  const AudioClip x = SpeechLike(1.0, 4);
  EXPECT_EQ(AlignLag(x, x), 0);
}

TEST(AlignLag, ConstructedShift) {
  const AudioClip x = SpeechLike(1.0, 5);
  EXPECT_EQ(AlignLag(x, Delay(x, 800)), 800);
}

TEST(AlignLag, GainInvariant) {
  const AudioClip x = SpeechLike(1.0, 6);
  AudioClip y = Delay(x, 160);
  for (double& s : y.samples) s *= 0.5;
  EXPECT_EQ(AlignLag(x, y), 160);
}

TEST(AlignLag, Errors) {
  AudioClip zero;
  zero.samples.assign(4000, 0.0);
  const AudioClip x = SpeechLike(0.5, 1);
  EXPECT_THROW(AlignLag(zero, x), AlignmentError);
  EXPECT_THROW(AlignLag(x, zero), AlignmentError);
  EXPECT_THROW(AlignLag(WhiteNoise(100, 1), x), AlignmentError);
}

TEST(AlignLag, RecoversEveryDelayProperty) {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const AudioClip x = trial % 2 ? SpeechLike(rng.Uniform(0.3, 1.5), trial)
                                  : WhiteNoise(static_cast<std::size_t>(rng.UniformInt(1600, 20000)), trial);
    const auto k = static_cast<std::size_t>(rng.UniformInt(0, 8000));
    ASSERT_EQ(AlignLag(x, Delay(x, k)), static_cast<long>(k)) << trial;
  }
}

TEST(AlignLag, MatchesExhaustiveCorrelation) {
  // Direct O(n * lags) normalized cross-correlation as the oracle.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const AudioClip ref = WhiteNoise(2000, seed);
    AudioClip deg = Delay(ref, 37 + seed * 11);
    Rng rng(seed + 100);
    for (double& s : deg.samples) s += 0.05 * rng.Normal();
    const long max_lag = 400;
    long best = 0;
    double best_score = -2.0;
    for (long lag = 0; lag <= max_lag; ++lag) {
      double dot = 0.0, er = 0.0, ed = 0.0;
      for (std::size_t n = 0; n < ref.size(); ++n) {
        const std::size_t m = n + static_cast<std::size_t>(lag);
        if (m >= deg.size()) break;
        dot += ref.samples[n] * deg.samples[m];
        er += ref.samples[n] * ref.samples[n];
        ed += deg.samples[m] * deg.samples[m];
      }
      const double score = dot / std::sqrt(er * ed);
      if (score > best_score) {
        best_score = score;
        best = lag;
      }
    }
    EXPECT_EQ(AlignLag(ref, deg, max_lag * 1000.0 / 16000.0), best) << seed;
  }
}

}  // namespace
}  // namespace rtcdd
