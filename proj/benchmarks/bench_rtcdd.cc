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

// Hot paths: FFT, log-mel extraction, the channel chain and the batch
// gradient under each consistency mode.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "rtcdd/channel.h"
#include "rtcdd/dsp.h"
#include "rtcdd/features.h"
#include "rtcdd/model.h"
#include "rtcdd/phoneme.h"
#include "rtcdd/rng.h"

namespace {

using namespace rtcdd;

AudioClip Tone(double seconds) {
  AudioClip clip;
  clip.samples.resize(static_cast<std::size_t>(seconds * kCanonicalRate));
  Rng rng(7);
  for (std::size_t i = 0; i < clip.size(); ++i) {
    const double t = static_cast<double>(i) / kCanonicalRate;
    clip.samples[i] = 0.3 * std::sin(2.0 * std::numbers::pi * 180.0 * t) + 0.01 * rng.Normal();
  }
  return clip;
}

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::complex<double>> x(n);
  Rng rng(1);
  for (auto& v : x) v = {rng.Normal(), 0.0};
  for (auto _ : state) {
    auto y = x;
    dsp::Fft(y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNLogN);

void BM_LogMel(benchmark::State& state) {
  const AudioClip clip = Tone(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(LogMelFeatures(clip).frames.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(clip.size()));
}
BENCHMARK(BM_LogMel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Transmit(benchmark::State& state) {
  const AudioClip clip = Tone(2.0);
  const ChannelProfile profile = BuiltinProfiles().at(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Transmit(clip, profile).audio.samples.data());
  state.SetLabel(profile.profile_id);
}
BENCHMARK(BM_Transmit)->DenseRange(0, 6)->Unit(benchmark::kMillisecond);

// 16 pairs of 3 s utterances at the default feature width and hidden size.
struct GradientFixture {
  std::vector<Matrix> frames;
  std::vector<PhonemeSegmentation> segs;
  Batch batch;
  DetectorModel model = DetectorModel::Init(40, kDefaultHidden, 3);

  GradientFixture() {
    Rng rng(11);
    constexpr int kPairs = 16;
    constexpr Eigen::Index kFrames = 300;
    frames.reserve(2 * kPairs);
    segs.reserve(2 * kPairs);
    for (int p = 0; p < kPairs; ++p) {
      for (int k = 0; k < 2; ++k) {
        Matrix m(kFrames, 40);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Normal();
        frames.push_back(std::move(m));
        PhonemeSegmentation s;
        for (Eigen::Index t = 0; t + 8 <= kFrames; t += 9) s.segments.push_back({t, t + 8, "ph"});
        segs.push_back(std::move(s));
      }
      PairItem item;
      item.offline = &frames[frames.size() - 2];
      item.online = &frames.back();
      item.seg_offline = &segs[segs.size() - 2];
      item.seg_online = &segs.back();
      item.label = p % 2 ? Label::kFake : Label::kBonafide;
      batch.pairs.push_back(item);
    }
  }
};

void BM_BatchGradients(benchmark::State& state) {
  static const GradientFixture fx;
  const auto mode = static_cast<Consistency>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(BatchGradients(fx.model, fx.batch, mode, 1.0).loss);
  }
  state.SetLabel(mode == Consistency::kNone ? "none" : mode == Consistency::kPhoneme ? "phoneme" : "frame");
}
BENCHMARK(BM_BatchGradients)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
