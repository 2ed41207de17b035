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

#include "rtcdd/dataset.h"

#include <atomic>

#include <spdlog/spdlog.h>

#include "rtcdd/experiment.h"
#include "rtcdd/features.h"
#include "rtcdd/manifest.h"
#include "rtcdd/parallel.h"

namespace rtcdd {

Dataset LoadDataset(const std::vector<std::filesystem::path>& manifests,
                    const std::map<std::string, PhonemeSegmentation>& boundaries, int workers) {
  struct Source {
    std::filesystem::path manifest;
    UtteranceRecord record;
  };
  std::vector<Source> sources;
  std::vector<UtteranceRecord> records;
  for (const auto& path : manifests) {
    for (auto& r : ReadManifest(path).records) {
      records.push_back(r);
      sources.push_back({path, std::move(r)});
    }
  }
  ValidateRecords(records);

  Dataset data(sources.size());
  std::atomic<std::size_t> segmented{0};
  ParallelFor(sources.size(), workers, [&](std::size_t i) {
    const auto& [manifest, r] = sources[i];
    Utterance& u = data[i];
    u.utt_id = r.utt_id;
    u.label = r.label;
    u.platform_id = r.platform_id;
    u.noise_id = r.noise_id;
    u.speaker_id = r.speaker_id;
    u.pair_id = r.pair_id;
    FeatureSequence f = LogMelFeatures(ReadWav(ResolveAudioPath(manifest, r)));
    f.source_id = r.utt_id;
    if (u.is_offline()) {
      const auto it = boundaries.find(r.utt_id);
      if (it != boundaries.end()) {
        u.segmentation = AlignSegmentations(it->second, 0, f.num_frames());
      } else {
        u.segmentation = EnergySegmenter(f);
        ++segmented;
      }
    }
    u.features = std::move(f.frames);
  });
  if (segmented > 0) {
    spdlog::warn("{} offline utterance(s) had no phone boundaries; used the energy segmenter",
                 segmented.load());
  }
  return data;
}

std::vector<SimilarityPair> SimilarityPairs(const Dataset& data) {
  std::map<std::string, const Utterance*> offline;
  for (const auto& u : data) {
    if (u.is_offline()) offline.emplace(u.utt_id, &u);
  }
  std::vector<SimilarityPair> pairs;
  for (const auto& on : data) {
    if (on.is_offline() || !on.pair_id) continue;
    const auto it = offline.find(*on.pair_id);
    if (it == offline.end()) continue;
    const Utterance& off = *it->second;
    SimilarityPair p;
    p.offline = MeanNormalize(off.features);
    p.online = MeanNormalize(on.features);
    p.seg_offline = off.segmentation;
    p.seg_online = AlignSegmentations(off.segmentation, 0, on.features.rows());
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace rtcdd
