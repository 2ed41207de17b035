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

#ifndef RTCDD_CORPUS_H_
#define RTCDD_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rtcdd/audio.h"
#include "rtcdd/channel.h"
#include "rtcdd/manifest.h"

namespace rtcdd {

// Half-open sample range [start, end) of one utterance inside a concatenation.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
};

struct Concatenation {
  AudioClip clip;
  std::vector<Span> timestamps;
};

// clip1 + gap + clip2 + ... ; gap_ms must be >= 100. Throws EmptyBatchError
// for an empty list.
Concatenation ConcatForTransmission(std::span<const AudioClip> clips, double gap_ms);

// received[start + lag, end + lag) for every timestamp. Throws
// SegmentationError when a segment runs past the received audio.
std::vector<AudioClip> SegmentReceived(const AudioClip& received,
                                       std::span<const Span> timestamps, long lag);

struct Verification {
  bool passed = false;
  double score = 0.0;
  std::string reason;
};

inline constexpr double kDefaultVerifyThreshold = 0.6;

// Peak Pearson correlation of the two frame log-energy contours over a
// +/-5 frame residual lag, clipped to [0, 1]. Silence scores 0 and fails.
Verification VerifyContent(const AudioClip& original, const AudioClip& recovered,
                           double threshold = kDefaultVerifyThreshold);

struct CorpusOptions {
  std::size_t batch_size = 4;
  double gap_ms = 200.0;
  double verify_threshold = kDefaultVerifyThreshold;
  double max_lag_ms = 500.0;
  int workers = 1;
};

struct BatchTransmission {
  std::vector<AudioClip> recovered;
  std::vector<Verification> checks;
  TransmissionLog log;
  long measured_lag = 0;
};

// Seed for batch `batch_index` of `profile`; scheduling-independent.
ChannelProfile BatchProfile(const ChannelProfile& profile, std::size_t batch_index);

// concat -> transmit -> align -> segment -> verify for one batch.
BatchTransmission TransmitBatch(std::span<const AudioClip> clips,
                                const ChannelProfile& profile,
                                const CorpusOptions& options = {});

struct DroppedRecord {
  std::string utt_id;
  std::string platform_id;
  double score = 0.0;
  std::string reason;
};

struct PlatformStats {
  std::size_t attempted = 0;
  std::size_t passed = 0;
  double pass_rate() const {
    return attempted ? static_cast<double>(passed) / static_cast<double>(attempted) : 0.0;
  }
};

struct OnlineCorpus {
  Manifest online;  // audio paths relative to out_dir
  std::vector<DroppedRecord> dropped;
  std::map<std::string, PlatformStats> stats;
};

// For every profile: batch the offline records, transmit, segment, verify,
// write {out_dir}/{subset}/{platform_id}/{utt_id}.wav and per-batch
// transmission logs under {out_dir}/logs/. Online utt_id is
// "{offline utt_id}_{platform_id}". Verification failures are dropped, not
// fatal. `manifest_path` anchors relative audio paths of `offline`.
OnlineCorpus BuildOnlineCorpus(const Manifest& offline,
                               const std::filesystem::path& manifest_path,
                               const std::vector<ChannelProfile>& profiles,
                               const CorpusOptions& options,
                               const std::filesystem::path& out_dir);

// An empty gen_ids or platform_ids set places no restriction.
struct SubsetRule {
  std::set<std::string> speakers;
  std::set<std::string> gen_ids;       // fake records must use one of these
  std::set<std::string> platform_ids;  // online records must use one of these
};

struct PartitionScheme {
  SubsetRule train, dev, eval;

  // Generator/platform ranges of the reference corpus: train and dev use
  // G01-G04 and G08-G09 over P01-P02 (train) / P01-P03 (dev); eval covers
  // G01-G10 over P01-P07.
  static PartitionScheme ReferenceRanges(std::set<std::string> train_speakers,
                                         std::set<std::string> dev_speakers,
                                         std::set<std::string> eval_speakers);
};

PartitionScheme LoadPartitionScheme(const std::filesystem::path& path);
PartitionScheme ParsePartitionScheme(const std::string& yaml_text);

struct Partition {
  Manifest train, dev, eval;
  // Records whose speaker is in no subset, or whose gen/platform ID lies
  // outside their speaker's subset ranges.
  std::vector<UtteranceRecord> unassigned;
};

// Routes each record by speaker and checks the subset's ID ranges. Throws
// SchemeError when a speaker is listed in two subsets.
Partition PartitionRecords(const std::vector<UtteranceRecord>& records,
                           const PartitionScheme& scheme);

// Sorted-speaker split used when no scheme file is given: first 60% train,
// next 20% dev, remainder eval, with the reference ID ranges.
PartitionScheme DefaultPartitionScheme(const std::vector<UtteranceRecord>& records);

}  // namespace rtcdd

#endif  // RTCDD_CORPUS_H_
