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

#include "rtcdd/noise.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rtcdd/dsp.h"
#include "rtcdd/error.h"
#include "rtcdd/rng.h"

namespace rtcdd {

std::string_view NoiseKindName(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kClean: return "clean";
    case NoiseKind::kBabble: return "babble";
    case NoiseKind::kEcho: return "echo";
    case NoiseKind::kFilteredNoise: return "filtered_noise";
    case NoiseKind::kImpulsive: return "impulsive";
  }
  return "?";
}

NoiseKind ParseNoiseKind(std::string_view name) {
  if (name == "clean") return NoiseKind::kClean;
  if (name == "babble") return NoiseKind::kBabble;
  if (name == "echo") return NoiseKind::kEcho;
  if (name == "filtered_noise") return NoiseKind::kFilteredNoise;
  if (name == "impulsive") return NoiseKind::kImpulsive;
  throw ConfigError("unknown noise kind '" + std::string(name) + "'");
}

void NoiseProfile::Validate() const {
  if (noise_id == "S01" && kind != NoiseKind::kClean) {
    throw ConfigError("S01 is reserved for the clean condition");
  }
  if (kind != NoiseKind::kClean && !(snr_db >= -5.0 && snr_db <= 40.0)) {
    throw ConfigError("noise " + noise_id + ": snr_db must be in [-5, 40]");
  }
}

std::vector<NoiseProfile> BuiltinNoiseProfiles(double snr_db, std::uint64_t seed) {
  return {
      {"S01", NoiseKind::kClean, snr_db, DeriveSeed(seed, "S01")},
      {"S02", NoiseKind::kBabble, snr_db, DeriveSeed(seed, "S02")},
      {"S03", NoiseKind::kBabble, snr_db, DeriveSeed(seed, "S03")},
      {"S04", NoiseKind::kEcho, snr_db, DeriveSeed(seed, "S04")},
      {"S05", NoiseKind::kFilteredNoise, snr_db, DeriveSeed(seed, "S05")},
      {"S06", NoiseKind::kImpulsive, snr_db, DeriveSeed(seed, "S06")},
      {"S07", NoiseKind::kImpulsive, snr_db, DeriveSeed(seed, "S07")},
  };
}

NoiseProfile BuiltinNoiseProfile(std::string_view noise_id, double snr_db,
                                 std::uint64_t seed) {
  for (auto& p : BuiltinNoiseProfiles(snr_db, seed)) {
    if (p.noise_id == noise_id) return p;
  }
  throw ConfigError("unknown noise id '" + std::string(noise_id) + "'");
}

std::vector<bool> ActiveSpeechMask(std::span<const double> x, int sample_rate_hz) {
  const auto frame = static_cast<std::size_t>(MsToSamples(10.0, sample_rate_hz));
  const std::size_t n = x.size();
  const std::size_t frames = (n + frame - 1) / frame;
  std::vector<double> energy(frames, 0.0);
  for (std::size_t i = 0; i < n; ++i) energy[i / frame] += x[i] * x[i];
  double peak = 0.0;
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t len = std::min(frame, n - f * frame);
    energy[f] /= static_cast<double>(len);
    peak = std::max(peak, energy[f]);
  }
  std::vector<bool> mask(n, false);
  if (peak <= 0.0) return mask;
  for (std::size_t i = 0; i < n; ++i) mask[i] = energy[i / frame] >= peak * 1e-4;
  return mask;
}

double ActiveSnrDb(std::span<const double> signal, std::span<const double> noise,
                   int sample_rate_hz) {
  const auto mask = ActiveSpeechMask(signal, sample_rate_hz);
  double s = 0.0, v = 0.0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    if (!mask[i]) continue;
    s += signal[i] * signal[i];
    v += noise[i] * noise[i];
  }
  return 10.0 * std::log10(s / v);
}

namespace {

std::vector<double> WhiteNoise(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Normal();
  return v;
}

std::vector<double> Babble(Rng& rng, std::size_t n, int sr) {
  std::vector<double> mix(n, 0.0);
  for (int talker = 0; talker < 6; ++talker) {
    const auto white = WhiteNoise(rng, n);
    const double center = rng.Uniform(200.0, 3000.0);
    const auto band = dsp::BandPass(white, center, 1.5, sr);
    const double rate = rng.Uniform(2.0, 6.0);
    const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / sr;
      mix[i] += band[i] * (0.2 + std::abs(std::sin(std::numbers::pi * rate * t + phase)));
    }
  }
  return mix;
}

std::vector<double> EchoOf(std::span<const double> x, Rng& rng, int sr) {
  const auto delay = static_cast<std::size_t>(MsToSamples(rng.Uniform(80.0, 200.0), sr));
  std::vector<double> v(x.size(), 0.0);
  for (std::size_t i = delay; i < x.size(); ++i) v[i] = x[i - delay];
  return v;
}

// Paul Kellet's economy pink-noise filter.
std::vector<double> Pink(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double b0 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = rng.Normal();
    b0 = 0.99765 * b0 + w * 0.0990460;
    b1 = 0.96300 * b1 + w * 0.2965164;
    b2 = 0.57000 * b2 + w * 1.0526913;
    v[i] = b0 + b1 + b2 + w * 0.1848;
  }
  return v;
}

std::vector<double> Clicks(Rng& rng, std::size_t n, int sr) {
  std::vector<double> v(n, 0.0);
  const auto click_len = static_cast<std::size_t>(MsToSamples(4.0, sr));
  const double rate_hz = rng.Uniform(5.0, 10.0);
  double t = rng.Uniform(0.0, 1.0 / rate_hz);
  while (true) {
    const auto start = static_cast<std::size_t>(t * sr);
    if (start >= n) break;
    const double amp = rng.Uniform(0.5, 1.0);
    for (std::size_t i = 0; i < click_len && start + i < n; ++i) {
      const double decay = std::exp(-5.0 * static_cast<double>(i) / static_cast<double>(click_len));
      v[start + i] += amp * decay * rng.Normal();
    }
    t += -std::log(1.0 - rng.Uniform()) / rate_hz;
  }
  return v;
}

// Scales `noise` so ActiveSnrDb(signal, noise) == snr_db.
void ScaleToSnr(std::span<const double> signal, std::vector<double>& noise,
                double snr_db, int sr, const std::string& who) {
  const auto mask = ActiveSpeechMask(signal, sr);
  double s = 0.0, v = 0.0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    if (!mask[i]) continue;
    s += signal[i] * signal[i];
    v += noise[i] * noise[i];
  }
  if (s <= 0.0) throw SnrUndefinedError(who + ": signal is silent");
  if (v <= 0.0) throw SnrUndefinedError(who + ": noise has no energy over active speech");
  const double gain = std::sqrt(s / (v * std::pow(10.0, snr_db / 10.0)));
  for (double& x : noise) x *= gain;
}

}  // namespace

NoisyClip InjectNoiseDetailed(const AudioClip& clip, const NoiseProfile& profile) {
  profile.Validate();
  NoisyClip out{clip, std::vector<double>(clip.size(), 0.0)};
  if (profile.kind == NoiseKind::kClean) return out;

  const int sr = clip.sample_rate_hz;
  const std::size_t n = clip.size();
  Rng rng(DeriveSeed(profile.seed, clip.id));
  std::vector<double> noise;
  switch (profile.kind) {
    case NoiseKind::kBabble: noise = Babble(rng, n, sr); break;
    case NoiseKind::kEcho: noise = EchoOf(clip.samples, rng, sr); break;
    case NoiseKind::kFilteredNoise: noise = Pink(rng, n); break;
    case NoiseKind::kImpulsive: noise = Clicks(rng, n, sr); break;
    case NoiseKind::kClean: break;
  }
  ScaleToSnr(clip.samples, noise, profile.snr_db, sr, "inject_noise " + profile.noise_id);
  for (std::size_t i = 0; i < n; ++i) out.clip.samples[i] += noise[i];
  ClipInPlace(out.clip.samples);
  for (std::size_t i = 0; i < n; ++i) out.noise[i] = out.clip.samples[i] - clip.samples[i];
  return out;
}

AudioClip InjectNoise(const AudioClip& clip, const NoiseProfile& profile) {
  return InjectNoiseDetailed(clip, profile).clip;
}

Augmentation AugmentDetailed(const AudioClip& clip, std::uint64_t seed) {
  Rng rng(seed);
  bool add_noise = rng.Bernoulli(0.5);
  const bool convolve = rng.Bernoulli(0.5);
  if (!add_noise && !convolve) add_noise = true;

  Augmentation aug{clip, std::nullopt, {}, {}};
  const int sr = clip.sample_rate_hz;
  if (convolve) {
    const auto taps = static_cast<std::size_t>(rng.UniformInt(4, 32));
    std::vector<double> h(taps);
    h[0] = 1.0;
    for (std::size_t i = 1; i < taps; ++i) {
      h[i] = rng.Normal(0.0, 0.3) * std::exp(-3.0 * static_cast<double>(i) / static_cast<double>(taps));
    }
    aug.clip.samples = dsp::FilterCausal(clip.samples, h);
    ClipInPlace(aug.clip.samples);
    aug.impulse_response = std::move(h);
  }
  if (add_noise) {
    const double snr = rng.Uniform(10.0, 40.0);
    const double pole = rng.Uniform(0.0, 0.95);
    std::vector<double> noise(clip.size());
    double state = 0.0;
    for (double& v : noise) {
      state = pole * state + rng.Normal();
      v = state;
    }
    const bool silent = std::all_of(aug.clip.samples.begin(), aug.clip.samples.end(),
                                    [](double s) { return s == 0.0; });
    if (!silent) {
      ScaleToSnr(aug.clip.samples, noise, snr, sr, "augment");
      const std::vector<double> before = aug.clip.samples;
      for (std::size_t i = 0; i < noise.size(); ++i) aug.clip.samples[i] += noise[i];
      ClipInPlace(aug.clip.samples);
      for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = aug.clip.samples[i] - before[i];
      aug.noise = std::move(noise);
      aug.snr_db = snr;
    }
  }
  return aug;
}

AudioClip Augment(const AudioClip& clip, std::uint64_t seed) {
  return AugmentDetailed(clip, seed).clip;
}

}  // namespace rtcdd
