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

#ifndef RTCDD_MANIFEST_H_
#define RTCDD_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rtcdd {

enum class Label { kBonafide = 0, kFake = 1 };

std::string_view LabelName(Label label);
Label ParseLabel(std::string_view name);

enum class Subset { kTrain, kDev, kEval };

std::string_view SubsetName(Subset subset);
Subset ParseSubset(std::string_view name);

inline constexpr std::string_view kOfflinePlatform = "offline";

struct UtteranceRecord {
  std::string utt_id;
  std::string audio_path;
  Label label = Label::kBonafide;
  std::optional<std::string> gen_id;   // G01..G10; none for bonafide
  std::string platform_id{kOfflinePlatform};
  std::string noise_id = "S01";
  std::string speaker_id;
  std::string lang_id = "en";
  std::string text;
  std::optional<std::string> pair_id;  // offline counterpart, online only

  bool is_offline() const { return platform_id == kOfflinePlatform; }
};

struct Manifest {
  std::vector<UtteranceRecord> records;
  Subset subset = Subset::kTrain;
};

// Column order of the tab-separated manifest file. Absent optional values
// are written as "-".
inline constexpr const char* kManifestColumns[] = {
    "utt_id", "audio_path", "label", "gen_id",  "platform_id",
    "noise_id", "speaker_id", "lang_id", "text", "pair_id"};

// Throws FormatError on malformed rows, IoError when unreadable.
Manifest ReadManifest(const std::filesystem::path& path, Subset subset = Subset::kTrain);
Manifest ParseManifest(const std::string& tsv, Subset subset = Subset::kTrain);
std::string ManifestToTsv(const Manifest& manifest);
void WriteManifest(const Manifest& manifest, const std::filesystem::path& path);

// audio_path is stored relative to the manifest's directory unless absolute.
std::filesystem::path ResolveAudioPath(const std::filesystem::path& manifest_path,
                                       const UtteranceRecord& record);

// Record-level invariants: unique utt_ids, bonafide <=> no gen_id, offline
// <=> no pair_id. Throws FormatError naming the first violation.
void ValidateRecords(const std::vector<UtteranceRecord>& records);

// Every online record's pair_id must resolve into `offline` with identical
// label, gen_id, speaker_id and text.
void ValidatePairs(const std::vector<UtteranceRecord>& online,
                   const std::vector<UtteranceRecord>& offline);

}  // namespace rtcdd

#endif  // RTCDD_MANIFEST_H_
