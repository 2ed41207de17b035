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
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "rtcdd/channel.h"
#include "rtcdd/dsp.h"
#include "rtcdd/error.h"
#include "rtcdd/synth.h"
#include "test_util.h"

namespace rtcdd {
namespace {

using testing::Sine;
using testing::SpeechLike;
using testing::WhiteNoise;

double RmsOf(const std::vector<double>& x, std::size_t from = 0, std::size_t to = 0) {
  if (to == 0) to = x.size();
  double acc = 0.0;
  for (std::size_t i = from; i < to; ++i) acc += x[i] * x[i];
  return std::sqrt(acc / static_cast<double>(to - from));
}

ChannelProfile LossyProfile(double p_loss, double burst, Plc plc, std::uint64_t seed) {
  ChannelProfile p = IdentityProfile(seed);
  p.loss = {p_loss, burst};
  p.plc = plc;
  return p;
}

TEST(NoiseSuppress, AlphaZeroReconstructs) {
  const AudioClip x = SpeechLike(1.0, 2);
  const AudioClip y = NoiseSuppress(x, 0.0, 0.1);
  ASSERT_EQ(y.size(), x.size());
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = y.samples[i] - x.samples[i];
  EXPECT_LE(RmsOf(diff), 1e-6);
}

TEST(NoiseSuppress, WhiteNoiseLosesEnergy) {
  const AudioClip x = WhiteNoise(16000, 3, 0.1);
  const AudioClip y = NoiseSuppress(x, 2.0, 0.05);
  EXPECT_LT(Rms(y.samples), Rms(x.samples));
}

TEST(NoiseSuppress, CleanSinePeakWithin3Db) {
  // A gated tone: the 10th-percentile floor sees the gaps, not the tone.
  AudioClip x = Sine(1000.0, 1.0, 0.5);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((i / 2000) % 2 == 1) x.samples[i] = 0.0;
  }
  const AudioClip y = NoiseSuppress(x, 1.0, 0.1);
  const std::size_t fft = 16384;
  const auto sx = dsp::RealSpectrum(x.samples, fft);
  const auto sy = dsp::RealSpectrum(y.samples, fft);
  const std::size_t bin = dsp::PeakBin(x.samples, fft);
  EXPECT_GT(20.0 * std::log10(std::abs(sy[bin]) / std::abs(sx[bin])), -3.0);
}

TEST(NoiseSuppress, Errors) {
  EXPECT_THROW(NoiseSuppress(WhiteNoise(100, 1), 1.0, 0.1), TooShortError);
  EXPECT_THROW(NoiseSuppress(WhiteNoise(1000, 1), -1.0, 0.1), ConfigError);
  EXPECT_THROW(NoiseSuppress(WhiteNoise(1000, 1), 1.0, 1.5), ConfigError);
}

TEST(EchoCancel, SilentFarEndIsIdentity) {
  const AudioClip mic = SpeechLike(0.5, 4);
  AudioClip far;
  far.samples.assign(mic.size(), 0.0);
  EXPECT_EQ(EchoCancel(mic, far, 32).samples, mic.samples);
}

TEST(EchoCancel, ConvergesOnPureEcho) {
  const AudioClip far = WhiteNoise(16000, 5, 0.2);
  AudioClip mic = Delay(far, 8);
  mic.samples.resize(far.size());
  for (double& s : mic.samples) s *= 0.5;
  const AudioClip out = EchoCancel(mic, far, 16);
  const std::size_t start = 8000;  // after 0.5 s
  EXPECT_LE(RmsOf(out.samples, start), 0.1 * RmsOf(mic.samples, start));
}

TEST(EchoCancel, UncorrelatedMicPassesThrough) {
  const AudioClip far = WhiteNoise(16000, 6, 0.1);
  const AudioClip mic = WhiteNoise(16000, 7, 0.1);
  const AudioClip out = EchoCancel(mic, far, 32);
  EXPECT_NEAR(Rms(out.samples) / Rms(mic.samples), 1.0, 0.05);
}

TEST(EchoCancel, Errors) {
  const AudioClip x = WhiteNoise(100, 1);
  EXPECT_THROW(EchoCancel(x, x, 0), ConfigError);
  EXPECT_THROW(EchoCancel(x, x, 4, 2.0), ConfigError);
  AudioClip other = x;
  other.sample_rate_hz = 8000;
  EXPECT_THROW(EchoCancel(x, other, 4), ConfigError);
}

TEST(Agc, AtTargetKeepsUnitGain) {
  const double amp = DbToLinear(-26.0) * std::sqrt(2.0);
  const AudioClip x = Sine(300.0, 2.0, amp);
  const AudioClip y = Agc(x, -26.0);
  for (std::size_t i = 16000; i < x.size(); i += 97) {
    if (std::abs(x.samples[i]) < 0.01) continue;
    const double g = y.samples[i] / x.samples[i];
    ASSERT_GE(g, 0.99);
    ASSERT_LE(g, 1.01);
  }
}

TEST(Agc, QuietSineReachesTarget) {
  const double amp = DbToLinear(-46.0) * std::sqrt(2.0);
  const AudioClip y = Agc(Sine(300.0, 3.0, amp), -26.0);
  const double out_db = 20.0 * std::log10(RmsOf(y.samples, 32000));
  EXPECT_NEAR(out_db, -26.0, 1.0);
}

TEST(Agc, SilenceAndGainClamp) {
  AudioClip silence;
  silence.samples.assign(1000, 0.0);
  EXPECT_EQ(Agc(silence, -26.0).samples, silence.samples);
  // -80 dB tone is below the gate: gain cannot exceed 10 anywhere
  const AudioClip tiny = Sine(300.0, 1.0, 1e-4);
  const AudioClip y = Agc(tiny, -20.0);
  for (std::size_t i = 0; i < y.size(); ++i) ASSERT_LE(std::abs(y.samples[i]), 10.0 * 1e-4 + 1e-12);
  EXPECT_THROW(Agc(tiny, -50.0), ConfigError);
  EXPECT_THROW(Agc(tiny, 1.0), ConfigError);
}

TEST(BandLimit, NyquistIsNoOpAndLowPassRemovesTone) {
  const AudioClip x = Sine(6000.0, 0.5);
  EXPECT_EQ(BandLimit(x, 8000.0).samples, x.samples);
  EXPECT_LT(RmsOf(BandLimit(x, 3400.0).samples, 200, 7800), 1e-3);
}

TEST(Packetize, LosslessIsPureDelay) {
  const AudioClip x = SpeechLike(1.0, 11);
  const ChannelProfile p = LossyProfile(0.0, 1.0, Plc::kZeroFill, 4);
  const Transmission tx = PacketizeAndImpair(x, p);
  const std::size_t d = tx.log.total_delay_samples;
  EXPECT_GE(d, 320u);
  EXPECT_LE(d, 1920u);
  ASSERT_EQ(tx.audio.size(), x.size() + d);
  for (std::size_t i = 0; i < d; ++i) ASSERT_EQ(tx.audio.samples[i], 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) ASSERT_EQ(tx.audio.samples[d + i], x.samples[i]);
  EXPECT_EQ(tx.log.lost_count(), 0u);
  EXPECT_EQ(tx.log.packets.size(), 50u);
}

TEST(Packetize, TotalLossZeroFillIsSilent) {
  const AudioClip x = SpeechLike(1.0, 12);
  const Transmission tx = PacketizeAndImpair(x, LossyProfile(1.0, 1.0, Plc::kZeroFill, 5));
  for (double s : tx.audio.samples) ASSERT_EQ(s, 0.0);
  EXPECT_EQ(tx.log.lost_count(), tx.log.packets.size());
}

TEST(Packetize, LossCountReplaysAndIsPlausible) {
  AudioClip x;
  x.samples.assign(1000 * 320, 0.1);
  const ChannelProfile p = LossyProfile(0.1, 1.0, Plc::kZeroFill, 42);
  const Transmission tx = PacketizeAndImpair(x, p);
  ASSERT_EQ(tx.log.packets.size(), 1000u);
  const auto replay = ReplayLoss(p, 1000);
  std::size_t lost = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    EXPECT_EQ(tx.log.packets[i].sent, replay[i]);
    lost += !replay[i];
  }
  EXPECT_EQ(lost, tx.log.lost_count());
  EXPECT_GE(lost, 60u);
  EXPECT_LE(lost, 140u);
}

TEST(Packetize, BurstLengthTracksModel) {
  const ChannelProfile p = LossyProfile(0.1, 3.0, Plc::kZeroFill, 7);
  const auto sent = ReplayLoss(p, 200000);
  std::size_t lost = 0, bursts = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if (!sent[i]) {
      ++lost;
      if (i == 0 || sent[i - 1]) ++bursts;
    }
  }
  EXPECT_NEAR(static_cast<double>(lost) / sent.size(), 0.1, 0.01);
  EXPECT_NEAR(static_cast<double>(lost) / bursts, 3.0, 0.2);
}

TEST(Packetize, RepeatFadeScalesPreviousPacket) {
  const AudioClip x = SpeechLike(2.0, 13);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChannelProfile p = LossyProfile(0.2, 2.0, Plc::kRepeatFade, seed);
    const Transmission tx = PacketizeAndImpair(x, p);
    const std::size_t d = tx.log.total_delay_samples;
    const std::size_t pk = 320;
    std::size_t last_good = SIZE_MAX;
    int k = 0;
    for (std::size_t i = 0; i < tx.log.packets.size(); ++i) {
      const std::size_t len = std::min(pk, x.size() - i * pk);
      if (tx.log.packets[i].sent) {
        last_good = i;
        k = 0;
        continue;
      }
      ++k;
      for (std::size_t j = 0; j < len; ++j) {
        const double expected =
            last_good == SIZE_MAX ? 0.0 : std::pow(0.7, k) * x.samples[last_good * pk + j];
        ASSERT_DOUBLE_EQ(tx.audio.samples[d + i * pk + j], expected);
      }
    }
  }
}

TEST(Profile, ValidationErrors) {
  auto bad = [](auto mutate) {
    ChannelProfile p = IdentityProfile();
    mutate(p);
    return p;
  };
  EXPECT_NO_THROW(IdentityProfile().Validate());
  EXPECT_THROW(bad([](auto& p) { p.ns_strength = -1; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.ns_floor = 2; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.aec_taps = -3; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.agc_target_dbfs = 3.0; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.codec = Codec::kSubbandQ; p.codec_bits = 1; }).Validate(),
               ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.packet_ms = 20.03; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.loss.p_loss = 1.5; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.loss.burst_len_mean = 0.5; }).Validate(), ConfigError);
  EXPECT_THROW(bad([](auto& p) { p.band_limit_hz = 9000; }).Validate(), ConfigError);
  for (double ms : {10.0, 20.0, 40.0}) {
    EXPECT_NO_THROW(bad([ms](auto& p) { p.packet_ms = ms; }).Validate());
  }
}

TEST(Transmit, IdentityProfileIsTransparent) {
  const AudioClip x = SpeechLike(1.5, 21);
  const Transmission tx = Transmit(x, IdentityProfile(9));
  const std::size_t d = tx.log.total_delay_samples;
  ASSERT_EQ(tx.audio.size(), x.size() + d);
  const std::vector<double> rec(tx.audio.samples.begin() + static_cast<std::ptrdiff_t>(d),
                                tx.audio.samples.end());
  EXPECT_GE(dsp::SegmentalSnrDb(x.samples, rec), 30.0);
}

TEST(Transmit, IdentityLimitProperty) {
  // Every impairment at its neutral setting: still a pure delay + mu-law.
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const AudioClip x = SpeechLike(0.6 + 0.1 * seed, 100 + seed);
    ChannelProfile p = IdentityProfile(seed);
    p.packet_ms = seed % 2 ? 10.0 : 40.0;
    const Transmission tx = Transmit(x, p);
    const std::size_t d = tx.log.total_delay_samples;
    const std::vector<double> rec(tx.audio.samples.begin() + static_cast<std::ptrdiff_t>(d),
                                  tx.audio.samples.end());
    EXPECT_GE(dsp::SegmentalSnrDb(x.samples, rec), 30.0) << seed;
  }
}

TEST(Transmit, DeterministicAndLengthContract) {
  const AudioClip x = SpeechLike(1.2, 22);
  for (const ChannelProfile& p : BuiltinProfiles()) {
    const Transmission a = Transmit(x, p);
    const Transmission b = Transmit(x, p);
    EXPECT_EQ(a.audio.samples, b.audio.samples) << p.profile_id;
    EXPECT_EQ(a.audio.size(), x.size() + a.log.total_delay_samples) << p.profile_id;
    const auto replay = ReplayLoss(p, a.log.packets.size());
    for (std::size_t i = 0; i < replay.size(); ++i) ASSERT_EQ(a.log.packets[i].sent, replay[i]);
    for (double s : a.audio.samples) ASSERT_TRUE(s >= -1.0 && s <= 1.0);
  }
}

TEST(Transmit, LoudInputStaysInRange) {
  AudioClip x = WhiteNoise(16000, 23, 0.9);
  for (const ChannelProfile& p : BuiltinProfiles()) {
    for (double s : Transmit(x, p).audio.samples) ASSERT_TRUE(s >= -1.0 && s <= 1.0);
  }
}

TEST(Transmit, SeedsGiveDistinctLogs) {
  const AudioClip x = SpeechLike(2.0, 24);
  std::set<std::string> logs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ChannelProfile p = BuiltinProfiles()[4];
    p.seed = seed;
    logs.insert(TransmissionLogToTsv(Transmit(x, p).log) +
                std::to_string(Transmit(x, p).log.total_delay_samples));
  }
  EXPECT_EQ(logs.size(), 20u);
}

TEST(BuiltinProfiles, CountValidityAndOrder) {
  const auto profiles = BuiltinProfiles();
  ASSERT_EQ(profiles.size(), 7u);
  std::set<std::uint64_t> seeds;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    EXPECT_NO_THROW(profiles[i].Validate());
    EXPECT_EQ(profiles[i].profile_id, "P0" + std::to_string(i + 1));
    seeds.insert(profiles[i].seed);
    if (i > 0) {
      EXPECT_GE(profiles[i].loss.p_loss, profiles[i - 1].loss.p_loss);
    }
  }
  EXPECT_EQ(seeds.size(), 7u);
  // mild pair mu-law, moderate ADPCM with NS, severe subband at 2-3 bits
  for (int i : {0, 1}) EXPECT_EQ(profiles[i].codec, Codec::kMulaw);
  for (int i : {2, 3, 4}) {
    EXPECT_EQ(profiles[i].codec, Codec::kAdpcmIma);
    EXPECT_GT(profiles[i].ns_strength, 0.0);
    EXPECT_GE(profiles[i].loss.p_loss, 0.01);
    EXPECT_LE(profiles[i].loss.p_loss, 0.03);
  }
  for (int i : {5, 6}) {
    EXPECT_EQ(profiles[i].codec, Codec::kSubbandQ);
    EXPECT_LE(profiles[i].codec_bits, 3);
    EXPECT_GE(profiles[i].loss.p_loss, 0.05);
    EXPECT_LE(profiles[i].loss.p_loss, 0.08);
    EXPECT_LE(profiles[i].band_limit_hz, 4000.0);
  }
}

// Fixed clean clip: eight seed-0 bonafide utterances back to back at -26 dBFS.
AudioClip LadderClip() {
  SynthOptions opts;
  opts.speakers = 2;
  opts.bonafide_per_cell = 4;
  opts.fake_per_cell = 0;
  opts.gen_ids = {};
  const auto corpus = GenerateSynthCorpus(opts);
  AudioClip clip;
  for (const auto& u : corpus) {
    clip.samples.insert(clip.samples.end(), u.clip.samples.begin(), u.clip.samples.end());
  }
  const double g = DbToLinear(-26.0 - RmsDbfs(clip.samples));
  for (double& s : clip.samples) s *= g;
  return clip;
}

TEST(BuiltinProfiles, SegmentalSnrLadderIsFrozenAndMonotone) {
  const AudioClip clip = LadderClip();
  std::ostringstream now;
  std::vector<double> snr;
  for (const ChannelProfile& p : BuiltinProfiles()) {
    const Transmission tx = Transmit(clip, p);
    const auto d = static_cast<std::ptrdiff_t>(tx.log.total_delay_samples);
    const std::vector<double> rec(tx.audio.samples.begin() + d, tx.audio.samples.end());
    snr.push_back(dsp::SegmentalSnrDb(clip.samples, rec));
    now << p.profile_id << '\t' << std::setprecision(10) << snr.back() << '\n';
  }
  for (std::size_t i = 1; i < snr.size(); ++i) EXPECT_LE(snr[i], snr[i - 1]) << i;

  const auto path = testing::DataPath("snr_ladder.tsv");
  if (std::getenv("RTCDD_UPDATE_FIXTURES")) {
    std::ofstream(path) << now.str();
  }
  std::ifstream in(path);
  ASSERT_TRUE(in) << "missing fixture " << path;
  std::string id;
  double frozen = 0.0;
  std::size_t k = 0;
  while (in >> id >> frozen) {
    ASSERT_LT(k, snr.size());
    EXPECT_NEAR(snr[k], frozen, 1e-6) << id;
    ++k;
  }
  EXPECT_EQ(k, snr.size());
}

TEST(ProfileYaml, RoundTripAndStrictKeys) {
  const auto profiles = BuiltinProfiles();
  const std::string yaml = ProfilesToYaml(profiles);
  const auto back = ParseProfiles(yaml);
  ASSERT_EQ(back.size(), profiles.size());
  EXPECT_EQ(ProfilesToYaml(back), yaml);
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].profile_id, profiles[i].profile_id);
    EXPECT_EQ(back[i].loss.p_loss, profiles[i].loss.p_loss);
    EXPECT_EQ(back[i].seed, profiles[i].seed);
  }
  std::string extra = yaml;
  extra.insert(extra.find("profile_id"), "bogus_key: 1\n");
  EXPECT_THROW(ParseProfiles(extra), ConfigError);
  std::string missing = ProfilesToYaml({profiles[0]});
  const auto at = missing.find("seed:");
  missing.erase(at, missing.find('\n', at) - at + 1);
  EXPECT_THROW(ParseProfiles(missing), ConfigError);
  EXPECT_THROW(ParseProfiles(ProfilesToYaml({profiles[0], profiles[0]})), ConfigError);
  EXPECT_THROW(LoadProfiles("/nonexistent/profiles.yaml"), IoError);
}

TEST(TransmissionLog, TsvLayout) {
  AudioClip x;
  x.samples.assign(960, 0.1);
  const Transmission tx = PacketizeAndImpair(x, LossyProfile(1.0, 1.0, Plc::kZeroFill, 1));
  const std::string tsv = TransmissionLogToTsv(tx.log);
  std::istringstream in(tsv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "packet_index\tsent\tjitter_ms");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(line.substr(0, 4), std::to_string(rows) + "\t0\t");
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

}  // namespace
}  // namespace rtcdd
