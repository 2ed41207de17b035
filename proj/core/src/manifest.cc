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

#include "rtcdd/manifest.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rtcdd/error.h"

namespace rtcdd {

std::string_view LabelName(Label label) {
  return label == Label::kBonafide ? "bonafide" : "fake";
}

Label ParseLabel(std::string_view name) {
  if (name == "bonafide") return Label::kBonafide;
  if (name == "fake" || name == "spoof") return Label::kFake;
  throw FormatError("unknown label '" + std::string(name) + "'");
}

std::string_view SubsetName(Subset subset) {
  switch (subset) {
    case Subset::kTrain: return "train";
    case Subset::kDev: return "dev";
    case Subset::kEval: return "eval";
  }
  return "?";
}

Subset ParseSubset(std::string_view name) {
  if (name == "train") return Subset::kTrain;
  if (name == "dev") return Subset::kDev;
  if (name == "eval") return Subset::kEval;
  throw ConfigError("unknown subset '" + std::string(name) + "'");
}

namespace {

constexpr std::string_view kNone = "-";
constexpr std::size_t kNumColumns = std::size(kManifestColumns);

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::optional<std::string> OptionalField(const std::string& v) {
  if (v.empty() || v == kNone) return std::nullopt;
  return v;
}

void CheckField(const std::string& v, const char* column) {
  if (v.find_first_of("\t\n\r") != std::string::npos) {
    throw FormatError(std::string("manifest field '") + column +
                      "' contains a tab or newline");
  }
}

}  // namespace

Manifest ParseManifest(const std::string& tsv, Subset subset) {
  Manifest manifest;
  manifest.subset = subset;
  std::istringstream in(tsv);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("manifest is missing its header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitTabs(line);
  if (header.size() != kNumColumns) throw FormatError("manifest header has wrong column count");
  for (std::size_t i = 0; i < kNumColumns; ++i) {
    if (header[i] != kManifestColumns[i]) {
      throw FormatError("manifest header column " + std::to_string(i) + " is '" +
                        header[i] + "', expected '" + kManifestColumns[i] + "'");
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = SplitTabs(line);
    if (f.size() != kNumColumns) {
      throw FormatError("manifest line " + std::to_string(line_no) + " has " +
                        std::to_string(f.size()) + " fields");
    }
    UtteranceRecord r;
    r.utt_id = f[0];
    r.audio_path = f[1];
    r.label = ParseLabel(f[2]);
    r.gen_id = OptionalField(f[3]);
    r.platform_id = f[4];
    r.noise_id = f[5];
    r.speaker_id = f[6];
    r.lang_id = f[7];
    r.text = f[8];
    r.pair_id = OptionalField(f[9]);
    manifest.records.push_back(std::move(r));
  }
  ValidateRecords(manifest.records);
  return manifest;
}

Manifest ReadManifest(const std::filesystem::path& path, Subset subset) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return ParseManifest(ss.str(), subset);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string ManifestToTsv(const Manifest& manifest) {
  std::ostringstream os;
  for (std::size_t i = 0; i < kNumColumns; ++i) {
    os << (i ? "\t" : "") << kManifestColumns[i];
  }
  os << '\n';
  for (const auto& r : manifest.records) {
    const std::string gen = r.gen_id.value_or(std::string(kNone));
    const std::string pair = r.pair_id.value_or(std::string(kNone));
    const std::string* fields[] = {&r.utt_id,     &r.audio_path, nullptr,
                                   &gen,          &r.platform_id, &r.noise_id,
                                   &r.speaker_id, &r.lang_id,     &r.text,
                                   &pair};
    for (std::size_t i = 0; i < kNumColumns; ++i) {
      if (i) os << '\t';
      if (fields[i] == nullptr) {
        os << LabelName(r.label);
      } else {
        CheckField(*fields[i], kManifestColumns[i]);
        os << *fields[i];
      }
    }
    os << '\n';
  }
  return os.str();
}

void WriteManifest(const Manifest& manifest, const std::filesystem::path& path) {
  const std::string text = ManifestToTsv(manifest);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << text;
}

std::filesystem::path ResolveAudioPath(const std::filesystem::path& manifest_path,
                                       const UtteranceRecord& record) {
  const std::filesystem::path p(record.audio_path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

void ValidateRecords(const std::vector<UtteranceRecord>& records) {
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (r.utt_id.empty()) throw FormatError("record with empty utt_id");
    if (!ids.insert(r.utt_id).second) throw FormatError("duplicate utt_id " + r.utt_id);
    if ((r.label == Label::kBonafide) == r.gen_id.has_value()) {
      throw FormatError("record " + r.utt_id +
                        ": bonafide records must have no gen_id and fake records must have one");
    }
    if (r.is_offline() && r.pair_id) {
      throw FormatError("offline record " + r.utt_id + " carries a pair_id");
    }
  }
}

void ValidatePairs(const std::vector<UtteranceRecord>& online,
                   const std::vector<UtteranceRecord>& offline) {
  std::map<std::string, const UtteranceRecord*> by_id;
  for (const auto& r : offline) by_id[r.utt_id] = &r;
  for (const auto& r : online) {
    if (r.is_offline()) continue;
    if (!r.pair_id) throw FormatError("online record " + r.utt_id + " has no pair_id");
    const auto it = by_id.find(*r.pair_id);
    if (it == by_id.end()) {
      throw FormatError("online record " + r.utt_id + " pairs with unknown " + *r.pair_id);
    }
    const auto& src = *it->second;
    if (src.label != r.label || src.gen_id != r.gen_id ||
        src.speaker_id != r.speaker_id || src.text != r.text) {
      throw FormatError("online record " + r.utt_id + " disagrees with its source " +
                        src.utt_id);
    }
  }
}

}  // namespace rtcdd
