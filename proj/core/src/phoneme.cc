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

#include "rtcdd/phoneme.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rtcdd/error.h"

namespace rtcdd {

void PhonemeSegmentation::Validate(Eigen::Index num_frames) const {
  Eigen::Index prev_end = 0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    if (s.start < prev_end || s.start >= s.end || s.end > num_frames) {
      throw BoundsError("utterance " + utt_id + ": segment " + std::to_string(k) + " [" +
                        std::to_string(s.start) + ", " + std::to_string(s.end) +
                        ") is out of order or outside [0, " + std::to_string(num_frames) + ")");
    }
    prev_end = s.end;
  }
}

Matrix PoolRows(const Matrix& frames, const PhonemeSegmentation& seg) {
  if (seg.segments.empty()) throw EmptyError("utterance " + seg.utt_id + " has no segments");
  seg.Validate(frames.rows());
  Matrix out(static_cast<Eigen::Index>(seg.segments.size()), frames.cols());
  for (std::size_t k = 0; k < seg.segments.size(); ++k) {
    const auto& s = seg.segments[k];
    out.row(static_cast<Eigen::Index>(k)) =
        frames.middleRows(s.start, s.length()).colwise().sum() / static_cast<double>(s.length());
  }
  return out;
}

PhonemeReps PoolPhonemes(const FeatureSequence& features, const PhonemeSegmentation& seg) {
  PhonemeReps out;
  out.reps = PoolRows(features.frames, seg);
  out.source_id = features.source_id;
  out.labels.reserve(seg.segments.size());
  for (const auto& s : seg.segments) out.labels.push_back(s.label);
  return out;
}

PhonemeSegmentation AlignSegmentations(const PhonemeSegmentation& offline,
                                       Eigen::Index lag_frames, Eigen::Index online_frames) {
  if (lag_frames < 0) throw AlignmentError("lag_frames must be >= 0");
  PhonemeSegmentation out;
  out.utt_id = offline.utt_id;
  std::size_t dropped = 0;
  for (const auto& s : offline.segments) {
    PhoneSegment shifted{s.start + lag_frames, std::min(s.end + lag_frames, online_frames),
                         s.label};
    if (shifted.start >= shifted.end) {
      ++dropped;
      continue;
    }
    out.segments.push_back(std::move(shifted));
  }
  if (dropped > 0) {
    spdlog::info("align_segmentations({}): dropped {} segment(s) past frame {}", offline.utt_id,
                 dropped, online_frames);
  }
  if (out.segments.empty()) {
    throw AlignmentError("utterance " + offline.utt_id + ": every segment fell outside " +
                         std::to_string(online_frames) + " online frames");
  }
  return out;
}

PhonemeSegmentation EnergySegmenter(const FeatureSequence& features, int min_seg_frames) {
  if (min_seg_frames < 1) throw ConfigError("min_seg_frames must be >= 1");
  const Matrix& h = features.frames;
  const Eigen::Index frames = h.rows();
  constexpr double kFlux = 2.0;
  constexpr int kMedianWindow = 10;
  const double log_floor = std::log(kLogFloor);

  std::vector<double> energy_db(static_cast<std::size_t>(frames));
  std::vector<bool> at_floor(static_cast<std::size_t>(frames));
  for (Eigen::Index t = 0; t < frames; ++t) {
    const double peak = h.row(t).maxCoeff();
    const double lse = peak + std::log((h.row(t).array() - peak).exp().sum());
    energy_db[static_cast<std::size_t>(t)] = 10.0 / std::log(10.0) * lse;
    at_floor[static_cast<std::size_t>(t)] = peak <= log_floor + 1e-9;
  }
  const double max_db = frames > 0 ? *std::max_element(energy_db.begin(), energy_db.end()) : 0.0;

  std::vector<double> flux(static_cast<std::size_t>(frames), 0.0);
  for (Eigen::Index t = 1; t < frames; ++t) {
    flux[static_cast<std::size_t>(t)] = (h.row(t) - h.row(t - 1)).norm();
  }

  PhonemeSegmentation seg;
  seg.utt_id = features.source_id;
  Eigen::Index open_start = -1;
  auto close = [&](Eigen::Index end) {
    if (open_start >= 0) {
      seg.segments.push_back({open_start, end, "seg" + std::to_string(seg.segments.size())});
    }
    open_start = -1;
  };
  std::vector<double> window;
  for (Eigen::Index t = 0; t < frames; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    const bool silent = at_floor[ti] || energy_db[ti] < max_db - 40.0;
    if (silent) {
      close(t);
      continue;
    }
    if (open_start < 0) {
      open_start = t;
      continue;
    }
    window.clear();
    for (Eigen::Index k = std::max<Eigen::Index>(1, t - kMedianWindow); k < t; ++k) {
      window.push_back(flux[static_cast<std::size_t>(k)]);
    }
    double median = 0.0;
    if (!window.empty()) {
      auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      median = *mid;
    }
    const bool change = flux[ti] > kFlux * median + 1e-9;
    if (change && t - open_start >= min_seg_frames) {
      close(t);
      open_start = t;
    }
  }
  close(frames);
  if (seg.segments.empty()) {
    throw EmptyError("energy_segmenter(" + features.source_id + "): every frame is silent");
  }
  return seg;
}

double PclLoss(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("pcl_loss: widths differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.cols()) + ")");
  }
  const Eigen::Index k = std::min(a.rows(), b.rows());
  if (a.rows() != b.rows()) {
    spdlog::warn("pcl_loss: segment counts differ ({} vs {}), truncating to {}", a.rows(),
                 b.rows(), k);
  }
  if (k == 0 || a.cols() == 0) throw EmptyError("pcl_loss: no phoneme representations");
  return (a.topRows(k) - b.topRows(k)).squaredNorm() / static_cast<double>(k * a.cols());
}

double PclLoss(const PhonemeReps& a, const PhonemeReps& b) { return PclLoss(a.reps, b.reps); }

double FclLoss(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ShapeError("fcl_loss: feature widths differ");
  const Eigen::Index t = std::min(a.rows(), b.rows());
  if (t == 0 || a.cols() == 0) throw EmptyError("fcl_loss: no overlapping frames");
  return (a.topRows(t) - b.topRows(t)).squaredNorm() / static_cast<double>(t * a.cols());
}

double FclLoss(const FeatureSequence& a, const FeatureSequence& b) {
  return FclLoss(a.frames, b.frames);
}

double Cosine(const Eigen::Ref<const RowVector>& a, const Eigen::Ref<const RowVector>& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

SimilarityStats ComputeSimilarityStats(std::span<const std::pair<Matrix, Matrix>> pairs) {
  if (pairs.empty()) throw EmptyError("similarity_stats: no pairs");
  SimilarityStats stats;
  stats.per_pair.reserve(pairs.size());
  for (const auto& [offline, online] : pairs) {
    if (offline.cols() != online.cols()) throw ShapeError("similarity_stats: widths differ");
    const Eigen::Index units = std::min(offline.rows(), online.rows());
    if (units == 0) throw EmptyError("similarity_stats: pair without units");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < units; ++i) acc += Cosine(offline.row(i), online.row(i));
    stats.per_pair.push_back(acc / static_cast<double>(units));
  }
  const auto n = static_cast<double>(stats.per_pair.size());
  for (double v : stats.per_pair) stats.mean += v;
  stats.mean /= n;
  for (double v : stats.per_pair) stats.variance += (v - stats.mean) * (v - stats.mean);
  stats.variance /= n;
  return stats;
}

std::map<std::string, PhonemeSegmentation> ParseBoundaries(const std::string& text) {
  std::map<std::string, PhonemeSegmentation> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string utt, label;
    long long start = 0, end = 0;
    if (line_no == 1 && line.rfind("utt_id", 0) == 0) continue;  // header row
    if (!(fields >> utt >> start >> end >> label)) {
      throw FormatError("boundary file line " + std::to_string(line_no) + " is malformed");
    }
    auto& seg = out[utt];
    seg.utt_id = utt;
    if (!seg.segments.empty() && start < seg.segments.back().end) {
      throw FormatError("boundary file line " + std::to_string(line_no) +
                        ": segments of " + utt + " are not sorted");
    }
    if (start >= end || start < 0) {
      throw FormatError("boundary file line " + std::to_string(line_no) + ": empty segment");
    }
    seg.segments.push_back({start, end, label});
  }
  return out;
}

std::map<std::string, PhonemeSegmentation> ReadBoundaries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open boundary file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseBoundaries(ss.str());
}

void WriteBoundaries(const std::vector<PhonemeSegmentation>& segs,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "utt_id\tstart_frame\tend_frame\tphone_label\n";
  for (const auto& seg : segs) {
    for (const auto& s : seg.segments) {
      out << seg.utt_id << '\t' << s.start << '\t' << s.end << '\t' << s.label << '\n';
    }
  }
}

}  // namespace rtcdd
