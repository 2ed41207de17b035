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

#ifndef RTCDD_DATASET_H_
#define RTCDD_DATASET_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rtcdd/phoneme.h"
#include "rtcdd/trainer.h"

namespace rtcdd {

// Reads each manifest, loads its audio (relative paths resolve against the
// manifest's directory) and extracts log-mel features. Offline utterances
// take their segmentation from `boundaries` when it has an entry, clipped
// to the feature length; otherwise the energy segmenter fills in. Records
// are validated across all manifests together.
Dataset LoadDataset(const std::vector<std::filesystem::path>& manifests,
                    const std::map<std::string, PhonemeSegmentation>& boundaries = {},
                    int workers = 1);

// Offline/online pairs found inside one dataset, with per-utterance
// mean-normalized frames and the offline boundaries carried onto the online
// grid. Online records whose source is absent are skipped.
std::vector<SimilarityPair> SimilarityPairs(const Dataset& data);

}  // namespace rtcdd

#endif  // RTCDD_DATASET_H_
