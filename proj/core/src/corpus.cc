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

#include "rtcdd/corpus.h"

#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rtcdd/error.h"
#include "rtcdd/features.h"
#include "rtcdd/parallel.h"
#include "rtcdd/rng.h"

namespace rtcdd {

Concatenation ConcatForTransmission(std::span<const AudioClip> clips, double gap_ms) {
  if (clips.empty()) throw EmptyBatchError("concat_for_transmission: no clips");
  if (gap_ms < 100.0) throw ConfigError("guard gap must be at least 100 ms");
  const int sr = clips.front().sample_rate_hz;
  const auto gap = static_cast<std::size_t>(MsToSamples(gap_ms, sr));
  Concatenation out;
  out.clip.sample_rate_hz = sr;
  out.clip.id = clips.front().id + "+" + std::to_string(clips.size() - 1);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    RequireSameRate(clips.front(), clips[i]);
    if (i > 0) out.clip.samples.insert(out.clip.samples.end(), gap, 0.0);
    const std::size_t start = out.clip.samples.size();
    out.clip.samples.insert(out.clip.samples.end(), clips[i].samples.begin(),
                            clips[i].samples.end());
    out.timestamps.push_back({start, out.clip.samples.size()});
  }
  return out;
}

std::vector<AudioClip> SegmentReceived(const AudioClip& received,
                                       std::span<const Span> timestamps, long lag) {
  if (lag < 0) throw SegmentationError("negative lag");
  const auto shift = static_cast<std::size_t>(lag);
  std::vector<AudioClip> out;
  out.reserve(timestamps.size());
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    const Span& s = timestamps[i];
    if (s.end < s.start || s.end + shift > received.size()) {
      throw SegmentationError("segment " + std::to_string(i) + " [" +
                              std::to_string(s.start) + ", " + std::to_string(s.end) +
                              ") + lag " + std::to_string(lag) + " exceeds " +
                              std::to_string(received.size()) + " received samples");
    }
    AudioClip seg;
    seg.sample_rate_hz = received.sample_rate_hz;
    seg.id = received.id + "#" + std::to_string(i);
    seg.samples.assign(received.samples.begin() + static_cast<std::ptrdiff_t>(s.start + shift),
                       received.samples.begin() + static_cast<std::ptrdiff_t>(s.end + shift));
    out.push_back(std::move(seg));
  }
  return out;
}

namespace {

bool IsSilent(const AudioClip& c) {
  return std::all_of(c.samples.begin(), c.samples.end(), [](double s) { return s == 0.0; });
}

double Pearson(const std::vector<double>& a, const std::vector<double>& b, long lag) {
  // Correlates a[i] with b[i + lag].
  const auto na = static_cast<long>(a.size()), nb = static_cast<long>(b.size());
  const long lo = std::max(0L, -lag), hi = std::min(na, nb - lag);
  const long n = hi - lo;
  if (n < 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (long i = lo; i < hi; ++i) {
    ma += a[static_cast<std::size_t>(i)];
    mb += b[static_cast<std::size_t>(i + lag)];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (long i = lo; i < hi; ++i) {
    const double da = a[static_cast<std::size_t>(i)] - ma;
    const double db = b[static_cast<std::size_t>(i + lag)] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

// Contours are floored 50 dB below their peak so digital silence and
// concealment dropouts do not dominate the correlation.
std::vector<double> FlooredContour(const AudioClip& clip) {
  auto e = FrameLogEnergy(clip);
  if (e.empty()) return e;
  const double peak = *std::max_element(e.begin(), e.end());
  for (double& v : e) v = std::max(v, peak - 50.0);
  return e;
}

}  // namespace

Verification VerifyContent(const AudioClip& original, const AudioClip& recovered,
                           double threshold) {
  if (IsSilent(original) || IsSilent(recovered)) {
    return {false, 0.0, "silent audio"};
  }
  const auto a = FlooredContour(original);
  const auto b = FlooredContour(recovered);
  if (a.size() < 2 || b.size() < 2) return {false, 0.0, "too short to verify"};
  double best = 0.0;
  for (long lag = -5; lag <= 5; ++lag) best = std::max(best, Pearson(a, b, lag));
  const double score = std::clamp(best, 0.0, 1.0);
  Verification v{score >= threshold, score, ""};
  if (!v.passed) {
    std::ostringstream os;
    os << "energy-contour correlation " << score << " below " << threshold;
    v.reason = os.str();
  }
  return v;
}

ChannelProfile BatchProfile(const ChannelProfile& profile, std::size_t batch_index) {
  ChannelProfile p = profile;
  p.seed = DeriveSeed(profile.seed, static_cast<std::uint64_t>(batch_index));
  return p;
}

BatchTransmission TransmitBatch(std::span<const AudioClip> clips,
                                const ChannelProfile& profile,
                                const CorpusOptions& options) {
  const Concatenation cat = ConcatForTransmission(clips, options.gap_ms);
  // A trailing guard gap keeps the last segment inside the received audio
  // when the lag estimate overshoots by a few samples.
  AudioClip sent = cat.clip;
  sent.samples.resize(sent.samples.size() +
                      static_cast<std::size_t>(MsToSamples(options.gap_ms, sent.sample_rate_hz)));
  Transmission tx = Transmit(sent, profile);
  BatchTransmission out;
  out.log = std::move(tx.log);
  // Lags that would push the last segment past the received audio are not
  // candidates; at those offsets the overlap is short and the normalized
  // correlation is unreliable.
  const std::size_t headroom =
      tx.audio.samples.size() > cat.clip.samples.size()
          ? tx.audio.samples.size() - cat.clip.samples.size()
          : 0;
  const double headroom_ms =
      1000.0 * static_cast<double>(headroom) / static_cast<double>(sent.sample_rate_hz);
  out.measured_lag = AlignLag(cat.clip, tx.audio, std::min(options.max_lag_ms, headroom_ms));
  out.recovered = SegmentReceived(tx.audio, cat.timestamps, out.measured_lag);
  out.checks.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    out.recovered[i].id = clips[i].id;
    out.checks.push_back(VerifyContent(clips[i], out.recovered[i], options.verify_threshold));
  }
  return out;
}

OnlineCorpus BuildOnlineCorpus(const Manifest& offline,
                               const std::filesystem::path& manifest_path,
                               const std::vector<ChannelProfile>& profiles,
                               const CorpusOptions& options,
                               const std::filesystem::path& out_dir) {
  OnlineCorpus corpus;
  corpus.online.subset = offline.subset;
  if (offline.records.empty()) return corpus;
  for (const auto& r : offline.records) {
    if (!r.is_offline()) {
      throw ConfigError("build_online_corpus expects an offline-only manifest; " + r.utt_id +
                        " is on platform " + r.platform_id);
    }
  }
  if (options.batch_size == 0) throw ConfigError("batch_size must be positive");

  std::vector<AudioClip> audio(offline.records.size());
  ParallelFor(audio.size(), options.workers, [&](std::size_t i) {
    audio[i] = ReadWav(ResolveAudioPath(manifest_path, offline.records[i]));
    audio[i].id = offline.records[i].utt_id;
  });

  const std::size_t num_batches =
      (offline.records.size() + options.batch_size - 1) / options.batch_size;
  const std::string subset(SubsetName(offline.subset));
  for (const auto& p : profiles) {
    std::filesystem::create_directories(out_dir / subset / p.profile_id);
    std::filesystem::create_directories(out_dir / "logs" / subset / p.profile_id);
  }

  struct Job {
    std::size_t profile;
    std::size_t batch;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    for (std::size_t b = 0; b < num_batches; ++b) jobs.push_back({p, b});
  }
  std::vector<BatchTransmission> results(jobs.size());
  ParallelFor(jobs.size(), options.workers, [&](std::size_t j) {
    const auto& job = jobs[j];
    const std::size_t begin = job.batch * options.batch_size;
    const std::size_t end = std::min(begin + options.batch_size, audio.size());
    const auto& profile = profiles[job.profile];
    results[j] = TransmitBatch(std::span(audio).subspan(begin, end - begin),
                               BatchProfile(profile, job.batch), options);
    const std::string& pid = profile.profile_id;
    WriteTransmissionLog(results[j].log, out_dir / "logs" / subset / pid /
                                             ("batch" + std::to_string(job.batch) + ".tsv"));
    for (std::size_t i = 0; i < results[j].recovered.size(); ++i) {
      if (!results[j].checks[i].passed) continue;
      const auto& src = offline.records[begin + i];
      WriteWav(results[j].recovered[i],
               out_dir / subset / pid / (src.utt_id + "_" + pid + ".wav"));
    }
  });

  // Serialized, in (profile, batch, position) order.
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& job = jobs[j];
    const auto& pid = profiles[job.profile].profile_id;
    auto& stats = corpus.stats[pid];
    const std::size_t begin = job.batch * options.batch_size;
    for (std::size_t i = 0; i < results[j].recovered.size(); ++i) {
      const auto& src = offline.records[begin + i];
      const auto& check = results[j].checks[i];
      ++stats.attempted;
      if (!check.passed) {
        spdlog::warn("dropping {} on {}: {}", src.utt_id, pid, check.reason);
        corpus.dropped.push_back({src.utt_id, pid, check.score, check.reason});
        continue;
      }
      ++stats.passed;
      UtteranceRecord r = src;
      r.utt_id = src.utt_id + "_" + pid;
      r.audio_path = (std::filesystem::path(subset) / pid / (r.utt_id + ".wav")).generic_string();
      r.platform_id = pid;
      r.pair_id = src.utt_id;
      corpus.online.records.push_back(std::move(r));
    }
  }
  return corpus;
}

PartitionScheme PartitionScheme::ReferenceRanges(std::set<std::string> train_speakers,
                                                 std::set<std::string> dev_speakers,
                                                 std::set<std::string> eval_speakers) {
  auto ids = [](char prefix, std::initializer_list<int> nums) {
    std::set<std::string> out;
    for (int n : nums) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "%c%02d", prefix, n);
      out.insert(buf);
    }
    return out;
  };
  PartitionScheme s;
  s.train = {std::move(train_speakers), ids('G', {1, 2, 3, 4, 8, 9}), ids('P', {1, 2})};
  s.dev = {std::move(dev_speakers), ids('G', {1, 2, 3, 4, 8, 9}), ids('P', {1, 2, 3})};
  s.eval = {std::move(eval_speakers), ids('G', {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}),
            ids('P', {1, 2, 3, 4, 5, 6, 7})};
  return s;
}

namespace {

SubsetRule RuleFromNode(const YAML::Node& node, const std::string& name) {
  if (!node || !node.IsMap()) throw ConfigError("partition scheme: missing subset '" + name + "'");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (key != "speakers" && key != "gen_ids" && key != "platform_ids") {
      throw ConfigError("partition scheme: unknown key '" + name + "." + key + "'");
    }
  }
  auto set_of = [&](const char* key) {
    std::set<std::string> out;
    if (node[key]) {
      for (const auto& v : node[key]) out.insert(v.as<std::string>());
    }
    return out;
  };
  return {set_of("speakers"), set_of("gen_ids"), set_of("platform_ids")};
}

}  // namespace

PartitionScheme ParsePartitionScheme(const std::string& yaml_text) {
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    for (const auto& kv : root) {
      const auto key = kv.first.as<std::string>();
      if (key != "train" && key != "dev" && key != "eval") {
        throw ConfigError("partition scheme: unknown subset '" + key + "'");
      }
    }
    return {RuleFromNode(root["train"], "train"), RuleFromNode(root["dev"], "dev"),
            RuleFromNode(root["eval"], "eval")};
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("partition scheme: ") + e.what());
  }
}

PartitionScheme LoadPartitionScheme(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open partition scheme " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParsePartitionScheme(ss.str());
}

Partition PartitionRecords(const std::vector<UtteranceRecord>& records,
                           const PartitionScheme& scheme) {
  const std::pair<const SubsetRule*, Subset> rules[] = {
      {&scheme.train, Subset::kTrain}, {&scheme.dev, Subset::kDev}, {&scheme.eval, Subset::kEval}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      for (const auto& spk : rules[i].first->speakers) {
        if (rules[j].first->speakers.count(spk)) {
          throw SchemeError("speaker " + spk + " is assigned to both " +
                            std::string(SubsetName(rules[i].second)) + " and " +
                            std::string(SubsetName(rules[j].second)));
        }
      }
    }
  }
  Partition out;
  out.train.subset = Subset::kTrain;
  out.dev.subset = Subset::kDev;
  out.eval.subset = Subset::kEval;
  Manifest* targets[] = {&out.train, &out.dev, &out.eval};
  for (const auto& r : records) {
    bool placed = false;
    for (std::size_t i = 0; i < 3 && !placed; ++i) {
      const SubsetRule& rule = *rules[i].first;
      if (!rule.speakers.count(r.speaker_id)) continue;
      const bool gen_ok = !r.gen_id || rule.gen_ids.empty() || rule.gen_ids.count(*r.gen_id);
      const bool platform_ok =
          r.is_offline() || rule.platform_ids.empty() || rule.platform_ids.count(r.platform_id);
      if (gen_ok && platform_ok) {
        targets[i]->records.push_back(r);
        placed = true;
      } else {
        break;
      }
    }
    if (!placed) out.unassigned.push_back(r);
  }
  return out;
}

PartitionScheme DefaultPartitionScheme(const std::vector<UtteranceRecord>& records) {
  std::set<std::string> speakers;
  for (const auto& r : records) speakers.insert(r.speaker_id);
  const std::vector<std::string> sorted(speakers.begin(), speakers.end());
  const std::size_t n = sorted.size();
  const auto n_train = static_cast<std::size_t>(std::llround(0.6 * static_cast<double>(n)));
  const auto n_dev = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n)));
  std::set<std::string> train, dev, eval;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_train) {
      train.insert(sorted[i]);
    } else if (i < n_train + n_dev) {
      dev.insert(sorted[i]);
    } else {
      eval.insert(sorted[i]);
    }
  }
  return PartitionScheme::ReferenceRanges(std::move(train), std::move(dev), std::move(eval));
}

}  // namespace rtcdd
