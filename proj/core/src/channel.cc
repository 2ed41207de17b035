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

#include "rtcdd/channel.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "rtcdd/dsp.h"
#include "rtcdd/error.h"
#include "rtcdd/rng.h"

namespace rtcdd {

std::string_view PlcName(Plc plc) {
  return plc == Plc::kZeroFill ? "zero_fill" : "repeat_fade";
}

Plc ParsePlc(std::string_view name) {
  if (name == "zero_fill") return Plc::kZeroFill;
  if (name == "repeat_fade") return Plc::kRepeatFade;
  throw ConfigError("unknown plc '" + std::string(name) + "'");
}

int ChannelProfile::PacketSamples(int sample_rate_hz) const {
  return static_cast<int>(std::lround(packet_ms * sample_rate_hz / 1000.0));
}

void ChannelProfile::Validate(int sample_rate_hz) const {
  const std::string who = "profile " + profile_id + ": ";
  if (!(ns_strength >= 0.0)) throw ConfigError(who + "ns_strength must be >= 0");
  if (!(ns_floor >= 0.0 && ns_floor <= 1.0)) throw ConfigError(who + "ns_floor must be in [0,1]");
  if (aec_taps < 0) throw ConfigError(who + "aec_taps must be >= 0");
  if (agc_target_dbfs && (*agc_target_dbfs < -40.0 || *agc_target_dbfs > 0.0)) {
    throw ConfigError(who + "agc_target_dbfs must be in [-40, 0]");
  }
  if (codec == Codec::kSubbandQ && (codec_bits < 2 || codec_bits > 8)) {
    throw ConfigError(who + "codec_bits must be in [2, 8] for subband_q");
  }
  const double exact = packet_ms * sample_rate_hz / 1000.0;
  if (!(packet_ms > 0.0) || std::abs(exact - std::round(exact)) > 1e-9) {
    throw ConfigError(who + "packet_ms must map to a whole number of samples");
  }
  if (!(loss.p_loss >= 0.0 && loss.p_loss <= 1.0)) throw ConfigError(who + "p_loss must be in [0,1]");
  if (!(loss.burst_len_mean >= 1.0)) throw ConfigError(who + "burst_len_mean must be >= 1");
  if (loss.p_loss > 0.0 && loss.p_loss < 1.0) {
    const double good_to_bad =
        loss.p_loss / (1.0 - loss.p_loss) / loss.burst_len_mean;
    if (good_to_bad > 1.0) {
      throw ConfigError(who + "p_loss too high for burst_len_mean (no valid chain)");
    }
  }
  if (!(band_limit_hz > 0.0 && band_limit_hz <= sample_rate_hz / 2.0)) {
    throw ConfigError(who + "band_limit_hz must be in (0, Nyquist]");
  }
}

ChannelProfile IdentityProfile(std::uint64_t seed) {
  ChannelProfile p;
  p.profile_id = "ID";
  p.ns_strength = 0.0;
  p.ns_floor = 1.0;
  p.aec_taps = 0;
  p.agc_target_dbfs.reset();
  p.codec = Codec::kMulaw;
  p.packet_ms = 20.0;
  p.loss = {0.0, 1.0};
  p.plc = Plc::kZeroFill;
  p.band_limit_hz = kCanonicalRate / 2.0;
  p.seed = seed;
  return p;
}

std::size_t TransmissionLog::lost_count() const {
  return static_cast<std::size_t>(std::count_if(
      packets.begin(), packets.end(), [](const PacketRecord& p) { return !p.sent; }));
}

AudioClip NoiseSuppress(const AudioClip& clip, double alpha, double beta) {
  if (alpha < 0.0 || beta < 0.0 || beta > 1.0) {
    throw ConfigError("noise_suppress needs alpha >= 0 and beta in [0,1]");
  }
  constexpr std::size_t kWin = kStftSize;
  constexpr std::size_t kHop = kWin / 2;
  constexpr std::size_t kBins = kWin / 2 + 1;
  const std::size_t n = clip.size();
  if (n < kWin) {
    throw TooShortError("noise_suppress needs at least " + std::to_string(kWin) +
                        " samples, got " + std::to_string(n));
  }
  const std::size_t padded_len = kHop * ((n + kHop - 1) / kHop + 2);
  std::vector<double> padded(padded_len, 0.0);
  std::copy(clip.samples.begin(), clip.samples.end(), padded.begin() + kHop);
  const auto window = dsp::HannPeriodic(kWin);

  std::vector<std::vector<std::complex<double>>> spectra;
  for (std::size_t start = 0; start + kWin <= padded_len; start += kHop) {
    std::vector<std::complex<double>> buf(kWin);
    for (std::size_t i = 0; i < kWin; ++i) buf[i] = padded[start + i] * window[i];
    dsp::Fft(buf);
    spectra.push_back(std::move(buf));
  }
  const std::size_t frames = spectra.size();

  std::vector<double> floor_mag(kBins);
  std::vector<double> column(frames);
  const std::size_t pct_index = static_cast<std::size_t>(0.1 * static_cast<double>(frames - 1));
  for (std::size_t k = 0; k < kBins; ++k) {
    for (std::size_t f = 0; f < frames; ++f) column[f] = std::abs(spectra[f][k]);
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(pct_index),
                     column.end());
    floor_mag[k] = column[pct_index];
  }

  std::vector<double> out(padded_len, 0.0);
  for (std::size_t f = 0; f < frames; ++f) {
    auto& spec = spectra[f];
    for (std::size_t k = 0; k < kBins; ++k) {
      const double mag = std::abs(spec[k]);
      if (mag <= 0.0) continue;
      const double target = std::max(mag - alpha * floor_mag[k], beta * mag);
      const double g = target / mag;
      spec[k] *= g;
      if (k != 0 && k != kWin / 2) spec[kWin - k] *= g;
    }
    dsp::Fft(spec, /*inverse=*/true);
    const std::size_t start = f * kHop;
    for (std::size_t i = 0; i < kWin; ++i) out[start + i] += spec[i].real();
  }

  AudioClip result;
  result.sample_rate_hz = clip.sample_rate_hz;
  result.id = clip.id;
  result.samples.assign(out.begin() + kHop, out.begin() + static_cast<std::ptrdiff_t>(kHop + n));
  ClipInPlace(result.samples);
  return result;
}

AudioClip EchoCancel(const AudioClip& mic, const AudioClip& far_end, int taps,
                     double mu) {
  RequireSameRate(mic, far_end);
  if (taps < 1) throw ConfigError("echo_cancel needs taps >= 1");
  if (!(mu > 0.0 && mu < 2.0)) throw ConfigError("echo_cancel needs 0 < mu < 2");
  constexpr double kEps = 1e-6;
  constexpr double kGeigel = 0.5;
  const std::size_t n = mic.size();
  const auto t = static_cast<std::size_t>(taps);
  std::vector<double> far(n, 0.0);
  std::copy_n(far_end.samples.begin(), std::min(n, far_end.size()), far.begin());

  std::vector<double> w(t, 0.0);
  AudioClip out;
  out.sample_rate_hz = mic.sample_rate_hz;
  out.id = mic.id;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t kmax = std::min(t, i + 1);
    double estimate = 0.0, energy = 0.0, far_peak = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) {
      const double v = far[i - k];
      estimate += w[k] * v;
      energy += v * v;
      far_peak = std::max(far_peak, std::abs(v));
    }
    const double e = mic.samples[i] - estimate;
    // Geigel double-talk detector: hold the filter while the near end dominates.
    const bool double_talk = std::abs(mic.samples[i]) > kGeigel * far_peak;
    const double step = double_talk ? 0.0 : mu * e / (energy + kEps);
    if (step != 0.0) {
      for (std::size_t k = 0; k < kmax; ++k) w[k] += step * far[i - k];
    }
    out.samples[i] = e;
  }
  ClipInPlace(out.samples);
  return out;
}

AudioClip Agc(const AudioClip& clip, double target_dbfs, double attack_ms,
              double release_ms) {
  if (target_dbfs < -40.0 || target_dbfs > 0.0) {
    throw ConfigError("agc target_dbfs must be in [-40, 0]");
  }
  if (!(attack_ms > 0.0 && release_ms > 0.0)) {
    throw ConfigError("agc attack/release must be positive");
  }
  const bool silent = std::all_of(clip.samples.begin(), clip.samples.end(),
                                  [](double s) { return s == 0.0; });
  if (silent) return clip;

  constexpr double kGainMin = 0.1, kGainMax = 10.0;
  constexpr double kGateMeanSquare = 1e-5;  // -50 dBFS; room noise never drives the gain
  const double sr = clip.sample_rate_hz;
  auto coef = [sr](double ms) { return 1.0 - std::exp(-1000.0 / (ms * sr)); };
  const double level_coef = coef(400.0);
  const double attack = coef(attack_ms);
  const double release = coef(release_ms);
  const double target = DbToLinear(target_dbfs);

  const std::size_t n = clip.size();
  const std::size_t init_len = std::min<std::size_t>(n, static_cast<std::size_t>(MsToSamples(100.0, clip.sample_rate_hz)));
  double level = 0.0;
  for (std::size_t i = 0; i < init_len; ++i) level += clip.samples[i] * clip.samples[i];
  level /= static_cast<double>(std::max<std::size_t>(init_len, 1));
  double gain = level > kGateMeanSquare
                    ? std::clamp(target / std::sqrt(level), kGainMin, kGainMax)
                    : 1.0;

  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.id = clip.id;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = clip.samples[i];
    level += level_coef * (x * x - level);
    if (level > kGateMeanSquare) {
      const double desired = std::clamp(target / std::sqrt(level), kGainMin, kGainMax);
      gain += (desired < gain ? attack : release) * (desired - gain);
    }
    out.samples[i] = x * gain;
  }
  ClipInPlace(out.samples);
  return out;
}

AudioClip BandLimit(const AudioClip& clip, double cutoff_hz) {
  if (cutoff_hz >= clip.sample_rate_hz / 2.0) return clip;
  constexpr int kTaps = 101;
  const auto h = dsp::LowPassFir(cutoff_hz, clip.sample_rate_hz, kTaps);
  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.id = clip.id;
  out.samples = dsp::FilterCentered(clip.samples, h);
  ClipInPlace(out.samples);
  return out;
}

std::vector<bool> ReplayLoss(const ChannelProfile& profile, std::size_t num_packets) {
  std::vector<bool> sent(num_packets, true);
  const double p_loss = profile.loss.p_loss;
  if (p_loss <= 0.0) return sent;
  if (p_loss >= 1.0) {
    std::fill(sent.begin(), sent.end(), false);
    return sent;
  }
  const double bad_to_good = 1.0 / profile.loss.burst_len_mean;
  const double good_to_bad = bad_to_good * p_loss / (1.0 - p_loss);
  Rng rng(DeriveSeed(profile.seed, "gilbert-elliott"));
  bool bad = rng.Uniform() < p_loss;
  for (std::size_t i = 0; i < num_packets; ++i) {
    sent[i] = !bad;
    const double u = rng.Uniform();
    bad = bad ? !(u < bad_to_good) : (u < good_to_bad);
  }
  return sent;
}

std::size_t DrawPlatformDelay(const ChannelProfile& profile, int sample_rate_hz) {
  Rng rng(DeriveSeed(profile.seed, "platform-delay"));
  const double ms = rng.Uniform(20.0, 120.0);
  return static_cast<std::size_t>(MsToSamples(ms, sample_rate_hz));
}

Transmission PacketizeAndImpair(const AudioClip& clip, const ChannelProfile& profile) {
  profile.Validate(clip.sample_rate_hz);
  const auto packet = static_cast<std::size_t>(profile.PacketSamples(clip.sample_rate_hz));
  const std::size_t n = clip.size();
  const std::size_t num_packets = (n + packet - 1) / packet;
  const std::size_t delay = DrawPlatformDelay(profile, clip.sample_rate_hz);
  const auto sent = ReplayLoss(profile, num_packets);

  Transmission tx;
  tx.log.profile_id = profile.profile_id;
  tx.log.seed = profile.seed;
  tx.log.total_delay_samples = delay;
  tx.log.packets.resize(num_packets);

  Rng jitter_rng(DeriveSeed(profile.seed, "jitter"));
  const double delay_ms = 1000.0 * static_cast<double>(delay) / clip.sample_rate_hz;

  tx.audio.sample_rate_hz = clip.sample_rate_hz;
  tx.audio.id = clip.id;
  tx.audio.samples.assign(delay + n, 0.0);
  std::vector<double> last_good;
  int consecutive_losses = 0;
  for (std::size_t p = 0; p < num_packets; ++p) {
    const std::size_t begin = p * packet;
    const std::size_t len = std::min(packet, n - begin);
    tx.log.packets[p] = {p, sent[p], jitter_rng.Uniform(0.0, 0.5 * delay_ms)};
    double* dst = tx.audio.samples.data() + delay + begin;
    if (sent[p]) {
      std::copy_n(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin), len, dst);
      last_good.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                       clip.samples.begin() + static_cast<std::ptrdiff_t>(begin + len));
      consecutive_losses = 0;
      continue;
    }
    ++consecutive_losses;
    if (profile.plc == Plc::kRepeatFade && !last_good.empty()) {
      const double fade = std::pow(0.7, consecutive_losses);
      for (std::size_t i = 0; i < len; ++i) {
        dst[i] = i < last_good.size() ? fade * last_good[i] : 0.0;
      }
    }
  }
  return tx;
}

AudioClip SyntheticFarEnd(std::uint64_t seed, std::size_t length, int sample_rate_hz) {
  Rng rng(DeriveSeed(seed, "far-end"));
  std::vector<double> mix(length, 0.0);
  for (int talker = 0; talker < 3; ++talker) {
    std::vector<double> noise(length);
    for (double& v : noise) v = rng.Normal();
    const double center = rng.Uniform(300.0, 2500.0);
    auto band = dsp::BandPass(noise, center, 2.0, sample_rate_hz);
    const double rate = rng.Uniform(3.0, 5.0);
    const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t i = 0; i < length; ++i) {
      const double t = static_cast<double>(i) / sample_rate_hz;
      mix[i] += band[i] * std::abs(std::sin(std::numbers::pi * rate * t + phase));
    }
  }
  const double rms = Rms(mix);
  const double scale = rms > 0.0 ? DbToLinear(-40.0) / rms : 0.0;
  for (double& v : mix) v *= scale;
  AudioClip out;
  out.sample_rate_hz = sample_rate_hz;
  out.id = "far-end";
  out.samples = std::move(mix);
  ClipInPlace(out.samples);
  return out;
}

std::vector<double> SyntheticEchoPath(std::uint64_t seed, int taps) {
  Rng rng(DeriveSeed(seed, "echo-path"));
  std::vector<double> h(static_cast<std::size_t>(std::max(taps, 1)), 0.0);
  const int last = static_cast<int>(h.size()) - 1;
  const int delay = static_cast<int>(rng.UniformInt(1, std::max(1, last / 4)));
  constexpr double kGains[] = {0.35, -0.15, 0.06};
  int pos = delay;
  for (double g : kGains) {
    if (pos > last) break;
    h[static_cast<std::size_t>(pos)] += g;
    pos += static_cast<int>(rng.UniformInt(1, std::max(1, last / 8)));
  }
  return h;
}

Transmission Transmit(const AudioClip& clip, const ChannelProfile& profile) {
  profile.Validate(clip.sample_rate_hz);
  AudioClip x = clip;
  if (profile.ns_strength > 0.0) {
    x = NoiseSuppress(x, profile.ns_strength, profile.ns_floor);
  }
  if (profile.aec_taps > 0) {
    const AudioClip far = SyntheticFarEnd(profile.seed, x.size(), x.sample_rate_hz);
    const auto path = SyntheticEchoPath(profile.seed, profile.aec_taps);
    const auto echo = dsp::FilterCausal(far.samples, path);
    AudioClip mic = x;
    for (std::size_t i = 0; i < mic.size(); ++i) mic.samples[i] += echo[i];
    ClipInPlace(mic.samples);
    x = EchoCancel(mic, far, profile.aec_taps);
  }
  if (profile.agc_target_dbfs) x = Agc(x, *profile.agc_target_dbfs);
  x = BandLimit(x, profile.band_limit_hz);
  x = CodecRoundTrip(x, profile.codec, profile.codec_bits);
  Transmission tx = PacketizeAndImpair(x, profile);
  if (profile.agc_target_dbfs) tx.audio = Agc(tx.audio, *profile.agc_target_dbfs);
  tx.audio.id = clip.id;
  return tx;
}

std::vector<ChannelProfile> BuiltinProfiles() {
  auto make = [](const char* id, double alpha, double beta, int aec,
                 std::optional<double> agc, Codec codec, int bits, double packet_ms,
                 double p_loss, double burst, Plc plc, double band,
                 std::uint64_t seed) {
    ChannelProfile p;
    p.profile_id = id;
    p.ns_strength = alpha;
    p.ns_floor = beta;
    p.aec_taps = aec;
    p.agc_target_dbfs = agc;
    p.codec = codec;
    p.codec_bits = bits;
    p.packet_ms = packet_ms;
    p.loss = {p_loss, burst};
    p.plc = plc;
    p.band_limit_hz = band;
    p.seed = seed;
    return p;
  };
  using enum Codec;
  return {
      make("P01", 0.0, 1.0, 0, -26.0, kMulaw, 8, 20, 0.003, 1.0, Plc::kRepeatFade, 8000, 1001),
      make("P02", 1.0, 0.3, 0, -26.0, kMulaw, 8, 20, 0.005, 1.0, Plc::kRepeatFade, 3400, 1002),
      make("P03", 1.5, 0.15, 32, -26.0, kAdpcmIma, 4, 20, 0.01, 1.5, Plc::kRepeatFade, 7000, 1003),
      make("P04", 2.0, 0.1, 64, -26.0, kAdpcmIma, 4, 20, 0.015, 1.5, Plc::kRepeatFade, 6000, 1004),
      make("P05", 2.5, 0.06, 64, -26.0, kAdpcmIma, 4, 40, 0.03, 2.0, Plc::kZeroFill, 5000, 1005),
      make("P06", 2.5, 0.05, 128, -26.0, kSubbandQ, 3, 20, 0.05, 2.5, Plc::kRepeatFade, 4000, 1006),
      make("P07", 3.0, 0.05, 128, -26.0, kSubbandQ, 2, 40, 0.08, 3.0, Plc::kRepeatFade, 4000, 1007),
  };
}

namespace {

const std::vector<std::string>& ProfileKeys() {
  static const std::vector<std::string> keys = {
      "profile_id",  "ns_strength", "ns_floor",       "aec_taps",
      "agc_target_dbfs", "codec",   "codec_bits",     "packet_ms",
      "p_loss",      "burst_len_mean", "plc",         "band_limit_hz",
      "seed"};
  return keys;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

ChannelProfile ProfileFromNode(const YAML::Node& node, std::size_t index) {
  const std::string where = "profile document " + std::to_string(index) + ": ";
  if (!node.IsMap()) throw ConfigError(where + "expected a mapping");
  const auto& keys = ProfileKeys();
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(where + "unknown key '" + key + "'");
    }
  }
  for (const auto& key : keys) {
    if (!node[key]) throw ConfigError(where + "missing key '" + key + "'");
  }
  try {
    ChannelProfile p;
    p.profile_id = node["profile_id"].as<std::string>();
    p.ns_strength = node["ns_strength"].as<double>();
    p.ns_floor = node["ns_floor"].as<double>();
    p.aec_taps = node["aec_taps"].as<int>();
    const auto agc = node["agc_target_dbfs"];
    if (agc.IsNull() || agc.as<std::string>() == "none") {
      p.agc_target_dbfs.reset();
    } else {
      p.agc_target_dbfs = agc.as<double>();
    }
    p.codec = ParseCodec(node["codec"].as<std::string>());
    p.codec_bits = node["codec_bits"].as<int>();
    p.packet_ms = node["packet_ms"].as<double>();
    p.loss.p_loss = node["p_loss"].as<double>();
    p.loss.burst_len_mean = node["burst_len_mean"].as<double>();
    p.plc = ParsePlc(node["plc"].as<std::string>());
    p.band_limit_hz = node["band_limit_hz"].as<double>();
    p.seed = node["seed"].as<std::uint64_t>();
    p.Validate();
    return p;
  } catch (const YAML::Exception& e) {
    throw ConfigError(where + e.what());
  }
}

}  // namespace

std::vector<ChannelProfile> ParseProfiles(const std::string& yaml_text) {
  std::vector<YAML::Node> docs;
  try {
    docs = YAML::LoadAll(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("profile config: ") + e.what());
  }
  std::vector<ChannelProfile> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].IsNull()) continue;
    out.push_back(ProfileFromNode(docs[i], i));
  }
  std::set<std::string> ids;
  for (const auto& p : out) {
    if (!ids.insert(p.profile_id).second) {
      throw ConfigError("duplicate profile_id " + p.profile_id);
    }
  }
  return out;
}

std::vector<ChannelProfile> LoadProfiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseProfiles(ss.str());
}

std::string ProfilesToYaml(const std::vector<ChannelProfile>& profiles) {
  std::ostringstream os;
  for (const auto& p : profiles) {
    os << "---\n"
       << "profile_id: " << p.profile_id << '\n'
       << "ns_strength: " << FormatDouble(p.ns_strength) << '\n'
       << "ns_floor: " << FormatDouble(p.ns_floor) << '\n'
       << "aec_taps: " << p.aec_taps << '\n'
       << "agc_target_dbfs: "
       << (p.agc_target_dbfs ? FormatDouble(*p.agc_target_dbfs) : std::string("null")) << '\n'
       << "codec: " << CodecName(p.codec) << '\n'
       << "codec_bits: " << p.codec_bits << '\n'
       << "packet_ms: " << FormatDouble(p.packet_ms) << '\n'
       << "p_loss: " << FormatDouble(p.loss.p_loss) << '\n'
       << "burst_len_mean: " << FormatDouble(p.loss.burst_len_mean) << '\n'
       << "plc: " << PlcName(p.plc) << '\n'
       << "band_limit_hz: " << FormatDouble(p.band_limit_hz) << '\n'
       << "seed: " << p.seed << '\n';
  }
  return os.str();
}

void SaveProfiles(const std::vector<ChannelProfile>& profiles,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << ProfilesToYaml(profiles);
}

std::string TransmissionLogToTsv(const TransmissionLog& log) {
  std::ostringstream os;
  os << "packet_index\tsent\tjitter_ms\n";
  for (const auto& p : log.packets) {
    os << p.index << '\t' << (p.sent ? 1 : 0) << '\t' << FormatDouble(p.arrival_jitter_ms)
       << '\n';
  }
  return os.str();
}

void WriteTransmissionLog(const TransmissionLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << TransmissionLogToTsv(log);
}

}  // namespace rtcdd
