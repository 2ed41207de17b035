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

#ifndef RTCDD_CHANNEL_H_
#define RTCDD_CHANNEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtcdd/audio.h"
#include "rtcdd/codec.h"

namespace rtcdd {

enum class Plc { kZeroFill, kRepeatFade };

std::string_view PlcName(Plc plc);
Plc ParsePlc(std::string_view name);

// Gilbert-Elliott two-state loss chain: every packet in the bad state is
// lost. Transition rates are chosen so the stationary loss rate is p_loss
// and the mean burst length is burst_len_mean.
struct LossModel {
  double p_loss = 0.0;
  double burst_len_mean = 1.0;
};

// One simulated RTC platform: sender enhancement, codec, lossy network and
// receiver gain control.
struct ChannelProfile {
  std::string profile_id = "P00";
  double ns_strength = 0.0;   // spectral-subtraction oversubtraction alpha
  double ns_floor = 0.1;      // spectral floor beta
  int aec_taps = 0;           // 0 disables echo cancellation
  std::optional<double> agc_target_dbfs;  // nullopt disables both AGC stages
  Codec codec = Codec::kMulaw;
  int codec_bits = 8;         // used by subband_q only
  double packet_ms = 20.0;
  LossModel loss;
  Plc plc = Plc::kZeroFill;
  double band_limit_hz = 8000.0;
  std::uint64_t seed = 0;

  // Throws ConfigError on any violated invariant.
  void Validate(int sample_rate_hz = kCanonicalRate) const;
  int PacketSamples(int sample_rate_hz = kCanonicalRate) const;
};

// Transparent settings: no enhancement, mu-law, lossless, full band.
ChannelProfile IdentityProfile(std::uint64_t seed = 0);

struct PacketRecord {
  std::size_t index = 0;
  bool sent = true;
  double arrival_jitter_ms = 0.0;
};

struct TransmissionLog {
  std::vector<PacketRecord> packets;
  std::size_t total_delay_samples = 0;
  std::string profile_id;
  std::uint64_t seed = 0;

  std::size_t lost_count() const;
};

struct Transmission {
  AudioClip audio;
  TransmissionLog log;
};

// Spectral subtraction: |Y| = max(|X| - alpha * N, beta * |X|), where N is the
// per-bin 10th-percentile magnitude over the utterance. 512-point periodic
// Hann STFT, hop 256, phase reused, overlap-add resynthesis.
AudioClip NoiseSuppress(const AudioClip& clip, double alpha, double beta);

inline constexpr int kStftSize = 512;

// NLMS echo canceller, output = mic - estimated echo. far_end is zero-padded
// or truncated to mic's length. Adaptation pauses when |mic| exceeds half the
// far-end peak over the filter span (Geigel double-talk detector).
AudioClip EchoCancel(const AudioClip& mic, const AudioClip& far_end, int taps,
                     double mu = 0.1);

// Automatic gain control. A one-pole mean-square level tracker (400 ms)
// yields the desired gain target / level, clamped to [0.1, 10]; the applied
// gain follows it with the attack time constant when it must fall and the
// release constant when it may rise. Below -50 dBFS the gain is held, and
// the starting gain is 1 unless the first 100 ms is above that gate.
AudioClip Agc(const AudioClip& clip, double target_dbfs, double attack_ms = 10.0,
              double release_ms = 200.0);

// Zero-phase FIR low-pass; a no-op at or above Nyquist.
AudioClip BandLimit(const AudioClip& clip, double cutoff_hz);

// Sent flags of the loss chain for `num_packets`, replayed from profile.seed.
std::vector<bool> ReplayLoss(const ChannelProfile& profile, std::size_t num_packets);

// Platform delay in samples drawn from the profile seed: uniform 20..120 ms.
std::size_t DrawPlatformDelay(const ChannelProfile& profile, int sample_rate_hz);

// Packetizes, drops per the loss chain, conceals per profile.plc and
// prepends the platform delay. Output length = input length + delay.
Transmission PacketizeAndImpair(const AudioClip& clip, const ChannelProfile& profile);

// Seed-derived far-end talker used to inject echo ahead of the canceller.
AudioClip SyntheticFarEnd(std::uint64_t seed, std::size_t length, int sample_rate_hz);
// Seed-derived sparse echo path whose support lies inside `taps`.
std::vector<double> SyntheticEchoPath(std::uint64_t seed, int taps);

// Full chain: noise_suppress -> echo (inject + cancel) -> AGC -> band limit ->
// codec -> packet network -> receiver AGC. Pure function of its inputs.
Transmission Transmit(const AudioClip& clip, const ChannelProfile& profile);

// Seven stand-in platforms P01..P07 ordered from mild to severe.
std::vector<ChannelProfile> BuiltinProfiles();

// Profile config: multi-document YAML, one document per profile, every
// field explicit. Unknown or missing keys raise ConfigError.
std::vector<ChannelProfile> LoadProfiles(const std::filesystem::path& path);
std::vector<ChannelProfile> ParseProfiles(const std::string& yaml_text);
std::string ProfilesToYaml(const std::vector<ChannelProfile>& profiles);
void SaveProfiles(const std::vector<ChannelProfile>& profiles,
                  const std::filesystem::path& path);

// Tab-separated packet_index, sent, jitter_ms with a header row.
void WriteTransmissionLog(const TransmissionLog& log, const std::filesystem::path& path);
std::string TransmissionLogToTsv(const TransmissionLog& log);

}  // namespace rtcdd

#endif  // RTCDD_CHANNEL_H_
