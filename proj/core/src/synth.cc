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

#include "rtcdd/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "rtcdd/dsp.h"
#include "rtcdd/error.h"
#include "rtcdd/features.h"
#include "rtcdd/noise.h"
#include "rtcdd/parallel.h"
#include "rtcdd/rng.h"

namespace rtcdd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRate = kCanonicalRate;
constexpr std::size_t kWin = 400, kHop = 160;

struct Phone {
  const char* label;
  bool voiced;
  std::array<double, 3> formants;  // voiced: F1-F3; unvoiced: low, high, unused
  double level;
};

constexpr std::array<Phone, 13> kPhones = {{
    {"aa", true, {730, 1090, 2440}, 1.0},
    {"iy", true, {270, 2290, 3010}, 0.9},
    {"uw", true, {300, 870, 2240}, 0.85},
    {"eh", true, {530, 1840, 2480}, 1.0},
    {"ao", true, {570, 840, 2410}, 1.0},
    {"ae", true, {660, 1720, 2410}, 1.0},
    {"er", true, {490, 1350, 1690}, 0.9},
    {"ih", true, {390, 1990, 2550}, 0.9},
    {"m", true, {250, 1100, 2300}, 0.5},
    {"s", false, {4000, 7000, 0}, 0.35},
    {"sh", false, {2000, 4500, 0}, 0.4},
    {"f", false, {1200, 6500, 0}, 0.2},
    {"hh", false, {500, 3000, 0}, 0.25},
}};
constexpr std::size_t kFirstUnvoiced = 9;

struct Speaker {
  std::string id;
  double f0 = 120.0;
  double formant_scale = 1.0;
  double tilt = 1.0;
  double rate = 1.0;
};

Speaker MakeSpeaker(std::uint64_t seed, int index) {
  char id[16];
  std::snprintf(id, sizeof(id), "spk%02d", index);
  Speaker s;
  s.id = id;
  Rng rng(DeriveSeed(seed, s.id));
  const bool high = rng.Bernoulli(0.5);
  s.f0 = high ? rng.Uniform(170.0, 240.0) : rng.Uniform(90.0, 140.0);
  s.formant_scale = (high ? 1.1 : 1.0) * rng.Uniform(0.93, 1.07);
  s.tilt = rng.Uniform(0.8, 1.3);
  s.rate = rng.Uniform(0.85, 1.15);
  return s;
}

struct Layout {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t phone = 0;
};

double Envelope(std::size_t n, std::size_t begin, std::size_t end) {
  const double ramp = 0.01 * kRate;
  const double a = static_cast<double>(n - begin) / ramp;
  const double b = static_cast<double>(end - n) / ramp;
  const double x = std::min({1.0, a, b});
  return 0.5 - 0.5 * std::cos(kPi * std::clamp(x, 0.0, 1.0));
}

struct Rendered {
  std::vector<double> speech;
  std::vector<Layout> layout;
  std::vector<bool> voiced;
};

Rendered RenderSpeech(const Speaker& spk, Rng& rng, int min_phones, int max_phones) {
  const auto lead = static_cast<std::size_t>(rng.Uniform(0.10, 0.16) * kRate);
  const auto tail = static_cast<std::size_t>(rng.Uniform(0.10, 0.16) * kRate);
  const int count = static_cast<int>(rng.UniformInt(min_phones, max_phones));
  Rendered r;
  std::size_t pos = lead;
  std::size_t prev = kPhones.size();
  for (int i = 0; i < count; ++i) {
    std::size_t phone;
    do {
      phone = rng.Bernoulli(0.7)
                  ? static_cast<std::size_t>(rng.UniformInt(0, kFirstUnvoiced - 1))
                  : static_cast<std::size_t>(rng.UniformInt(kFirstUnvoiced, kPhones.size() - 1));
    } while (phone == prev);
    prev = phone;
    const double dur = (kPhones[phone].voiced ? rng.Uniform(0.08, 0.18) : rng.Uniform(0.06, 0.12)) /
                       spk.rate;
    const auto len = static_cast<std::size_t>(dur * kRate);
    r.layout.push_back({pos, pos + len, phone});
    pos += len;
  }
  const std::size_t total = pos + tail;
  r.speech.assign(total, 0.0);
  r.voiced.assign(total, false);

  // Voiced source: harmonics of a jittered f0, amplitudes from the formant
  // envelope of the current phone, refreshed every 5 ms.
  const double vib_rate = rng.Uniform(3.0, 6.0), vib_phase = rng.Uniform(0.0, 2 * kPi);
  double drift = 0.0, phase = 0.0;
  constexpr std::size_t kBlock = 80;
  std::vector<double> amps;
  for (const auto& seg : r.layout) {
    const Phone& ph = kPhones[seg.phone];
    const double level = ph.level * rng.Uniform(0.8, 1.2);
    if (!ph.voiced) {
      std::vector<double> noise(seg.end - seg.begin);
      for (auto& v : noise) v = rng.Normal();
      const double lo = ph.formants[0] * spk.formant_scale;
      const double hi = std::min(ph.formants[1] * spk.formant_scale, 7600.0);
      const double centre = std::sqrt(lo * hi);
      auto shaped = dsp::BandPass(noise, centre, centre / (hi - lo), kRate);
      for (std::size_t n = seg.begin; n < seg.end; ++n) {
        r.speech[n] = 0.25 * level * shaped[n - seg.begin] * Envelope(n, seg.begin, seg.end);
      }
      continue;
    }
    std::array<double, 3> f{};
    for (int k = 0; k < 3; ++k) f[k] = ph.formants[k] * spk.formant_scale * rng.Uniform(0.95, 1.05);
    const std::array<double, 3> bw = {80.0, 110.0, 150.0};
    const std::array<double, 3> gain = {1.0, 0.6, 0.3};
    for (std::size_t block = seg.begin; block < seg.end; block += kBlock) {
      drift = 0.97 * drift + 0.004 * rng.Normal();
      const double t = static_cast<double>(block) / kRate;
      const double f0 =
          spk.f0 * (1.0 + 0.02 * std::sin(2 * kPi * vib_rate * t + vib_phase) + drift);
      const int harmonics = static_cast<int>(7800.0 / f0);
      amps.assign(static_cast<std::size_t>(harmonics), 0.0);
      for (int h = 1; h <= harmonics; ++h) {
        const double fh = h * f0;
        double env = 0.01;
        for (int k = 0; k < 3; ++k) {
          env += gain[k] * bw[k] * bw[k] / ((fh - f[k]) * (fh - f[k]) + bw[k] * bw[k]);
        }
        amps[static_cast<std::size_t>(h - 1)] = env / std::pow(h, spk.tilt);
      }
      const std::size_t stop = std::min(seg.end, block + kBlock);
      for (std::size_t n = block; n < stop; ++n) {
        phase += 2 * kPi * f0 / kRate * (1.0 + 0.01 * rng.Normal());
        if (phase > 2 * kPi * 1e6) phase = std::fmod(phase, 2 * kPi);
        double acc = 0.0;
        for (int h = 1; h <= harmonics; ++h) {
          acc += amps[static_cast<std::size_t>(h - 1)] * std::sin(h * phase);
        }
        r.speech[n] = 0.3 * level * acc * Envelope(n, seg.begin, seg.end);
        r.voiced[n] = true;
      }
    }
  }
  return r;
}

// Comb filter y[n] = x[n] + g * x[n - delay]: notches at odd multiples of
// rate / (2 * delay).
std::vector<double> Comb(const std::vector<double>& x, double g, std::size_t delay) {
  std::vector<double> y(x);
  for (std::size_t n = delay; n < x.size(); ++n) y[n] += g * x[n - delay];
  return y;
}

std::vector<double> HighBandBuzz(const std::vector<bool>& voiced, double low_hz, Rng& rng) {
  std::vector<double> noise(voiced.size());
  for (auto& v : noise) v = rng.Normal();
  const double hi = 7900.0;
  const double centre = std::sqrt(low_hz * hi);
  auto out = dsp::BandPass(noise, centre, centre / (hi - low_hz), kRate);
  out = dsp::BandPass(out, centre, centre / (hi - low_hz), kRate);
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (!voiced[n]) out[n] = 0.0;
  }
  return out;
}

SynthUtterance MakeUtterance(const SynthOptions& o, const Speaker& spk, Label label,
                             const std::string& gen_id, int gen_index, int index,
                             const std::string& noise_id) {
  char id[96];
  std::snprintf(id, sizeof(id), "%s_%s_%03d_%s", spk.id.c_str(),
                label == Label::kBonafide ? "bona" : gen_id.c_str(), index, noise_id.c_str());
  SynthUtterance u;
  u.record.utt_id = id;
  u.record.label = label;
  if (label == Label::kFake) u.record.gen_id = gen_id;
  u.record.platform_id = std::string(kOfflinePlatform);
  u.record.noise_id = noise_id;
  u.record.speaker_id = spk.id;
  u.record.lang_id = "en";
  u.record.audio_path = "wav/" + u.record.utt_id + ".wav";

  // Content depends on (speaker, label, generator, index) but not on the
  // noise condition, so noisy variants share the clean signal.
  char content_key[96];
  std::snprintf(content_key, sizeof(content_key), "%s/%s/%d", spk.id.c_str(),
                label == Label::kBonafide ? "bona" : gen_id.c_str(), index);
  Rng rng(DeriveSeed(o.seed, content_key));
  Rendered r = RenderSpeech(spk, rng, o.min_phones, o.max_phones);
  std::vector<double> x = std::move(r.speech);
  const double speech_rms = Rms(x);
  if (label == Label::kFake) {
    x = Comb(x, o.comb_gain * (1.0 + 0.05 * (gen_index % 4)), 8);
    auto buzz = HighBandBuzz(r.voiced, o.buzz_low_hz, rng);
    const double buzz_rms = Rms(buzz);
    if (buzz_rms > 0.0) {
      const double g = speech_rms * DbToLinear(o.buzz_level_db + rng.Uniform(-2.0, 2.0)) / buzz_rms;
      for (std::size_t n = 0; n < x.size(); ++n) x[n] += g * buzz[n];
    }
  }
  // Random presentation level plus low-passed room noise.
  const double target = DbToLinear(rng.Uniform(-30.0, -22.0));
  const double scale = target / std::max(Rms(x), 1e-12);
  std::vector<double> room(x.size());
  double state = 0.0;
  for (auto& v : room) v = state = 0.8 * state + rng.Normal();
  const double room_gain =
      DbToLinear(o.room_noise_dbfs + rng.Uniform(-3.0, 3.0)) / std::max(Rms(room), 1e-12);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = x[n] * scale + room_gain * room[n];
  ClipInPlace(x);
  std::vector<std::string> text;
  u.segmentation.utt_id = u.record.utt_id;
  const std::size_t frames = NumFrames(x.size(), kWin, kHop);
  for (const auto& seg : r.layout) {
    text.emplace_back(kPhones[seg.phone].label);
    auto [start, end] = SampleSpanToFrames(seg.begin, seg.end, frames);
    if (start < end) u.segmentation.segments.push_back({start, end, kPhones[seg.phone].label});
  }
  for (std::size_t i = 0; i < text.size(); ++i) u.record.text += (i ? "-" : "") + text[i];
  u.clip = AudioClip{std::move(x), kRate, u.record.utt_id};
  if (noise_id != "S01") {
    const auto profile = BuiltinNoiseProfile(noise_id, o.noise_snr_db, o.seed);
    u.clip = InjectNoise(u.clip, profile);
  }
  return u;
}

}  // namespace

void SynthOptions::Validate() const {
  if (speakers < 1 || speakers > 99) throw ConfigError("speakers must be in [1, 99]");
  if (bonafide_per_cell < 0 || fake_per_cell < 0) throw ConfigError("cell counts must be >= 0");
  if (bonafide_per_cell == 0 && (fake_per_cell == 0 || gen_ids.empty())) {
    throw ConfigError("synthetic corpus would be empty");
  }
  if (min_phones < 1 || max_phones < min_phones) throw ConfigError("bad phone count range");
  if (noise_ids.empty()) throw ConfigError("noise_ids must not be empty");
  for (const auto& g : gen_ids) {
    if (g.size() != 3 || g[0] != 'G') throw ConfigError("bad generator id " + g);
  }
  for (const auto& n : noise_ids) BuiltinNoiseProfile(n, noise_snr_db, seed).Validate();
  if (comb_gain < 0.0 || comb_gain >= 1.0) throw ConfigError("comb_gain must be in [0, 1)");
  if (buzz_low_hz <= 0.0 || buzz_low_hz >= 7800.0) {
    throw ConfigError("buzz_low_hz must be in (0, 7800)");
  }
}

std::size_t SynthOptions::expected_rows() const {
  return static_cast<std::size_t>(speakers) * noise_ids.size() *
         (static_cast<std::size_t>(bonafide_per_cell) +
          gen_ids.size() * static_cast<std::size_t>(fake_per_cell));
}

std::pair<Eigen::Index, Eigen::Index> SampleSpanToFrames(std::size_t begin, std::size_t end,
                                                         std::size_t num_frames) {
  auto first_at_or_after = [](std::size_t sample) -> std::size_t {
    // smallest t with t * hop + win / 2 >= sample
    if (sample <= kWin / 2) return 0;
    return (sample - kWin / 2 + kHop - 1) / kHop;
  };
  const std::size_t start = std::min(first_at_or_after(begin), num_frames);
  const std::size_t stop = std::min(first_at_or_after(end), num_frames);
  return {static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(std::max(start, stop))};
}

std::vector<SynthUtterance> GenerateSynthCorpus(const SynthOptions& options, int workers) {
  options.Validate();
  struct Job {
    int speaker;
    Label label;
    int gen_index;
    int index;
    std::size_t noise;
  };
  std::vector<Job> jobs;
  for (int s = 0; s < options.speakers; ++s) {
    for (std::size_t n = 0; n < options.noise_ids.size(); ++n) {
      for (int i = 0; i < options.bonafide_per_cell; ++i) {
        jobs.push_back({s, Label::kBonafide, -1, i, n});
      }
      for (std::size_t g = 0; g < options.gen_ids.size(); ++g) {
        for (int i = 0; i < options.fake_per_cell; ++i) {
          jobs.push_back({s, Label::kFake, static_cast<int>(g), i, n});
        }
      }
    }
  }
  std::vector<Speaker> speakers;
  for (int s = 0; s < options.speakers; ++s) speakers.push_back(MakeSpeaker(options.seed, s));
  std::vector<SynthUtterance> out(jobs.size());
  ParallelFor(jobs.size(), workers, [&](std::size_t j) {
    const Job& job = jobs[j];
    const std::string gen =
        job.gen_index >= 0 ? options.gen_ids[static_cast<std::size_t>(job.gen_index)] : "";
    // The generator number (G01 -> 0) picks the comb delay.
    const int gen_number = job.gen_index >= 0 ? std::stoi(gen.substr(1)) - 1 : 0;
    out[j] = MakeUtterance(options, speakers[static_cast<std::size_t>(job.speaker)], job.label,
                           gen, gen_number, job.index, options.noise_ids[job.noise]);
  });
  return out;
}

void WriteSynthCorpus(const std::vector<SynthUtterance>& corpus,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "wav");
  Manifest manifest;
  std::vector<PhonemeSegmentation> segs;
  for (const auto& u : corpus) {
    WriteWav(u.clip, dir / u.record.audio_path);
    manifest.records.push_back(u.record);
    segs.push_back(u.segmentation);
  }
  WriteManifest(manifest, dir / "manifest.tsv");
  WriteBoundaries(segs, dir / "boundaries.tsv");
}

}  // namespace rtcdd
