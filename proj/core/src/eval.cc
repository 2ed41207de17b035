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

#include "rtcdd/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rtcdd/error.h"
#include "rtcdd/parallel.h"

namespace rtcdd {

namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string FormatCell(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string("undefined");
}

}  // namespace

double ComputeEer(std::span<const ScoredTrial> trials) {
  std::vector<double> bona, fake;
  for (const auto& t : trials) {
    if (!std::isfinite(t.score)) throw UndefinedMetricError("non-finite score for " + t.utt_id);
    (t.label == Label::kBonafide ? bona : fake).push_back(t.score);
  }
  if (bona.empty() || fake.empty()) {
    throw UndefinedMetricError("EER needs at least one bonafide and one fake trial (got " +
                               std::to_string(bona.size()) + " bonafide, " +
                               std::to_string(fake.size()) + " fake)");
  }
  std::sort(bona.begin(), bona.end());
  std::sort(fake.begin(), fake.end());
  std::vector<double> thresholds(bona);
  thresholds.insert(thresholds.end(), fake.begin(), fake.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const auto nb = static_cast<long long>(bona.size());
  const auto nf = static_cast<long long>(fake.size());
  long long best_gap = -1, best_fa = 0, best_fr = 0;
  std::size_t ib = 0, ifk = 0;
  for (double theta : thresholds) {
    while (ib < bona.size() && bona[ib] < theta) ++ib;
    while (ifk < fake.size() && fake[ifk] < theta) ++ifk;
    const long long fr = static_cast<long long>(ib);
    const long long fa = nf - static_cast<long long>(ifk);
    const long long gap = std::llabs(fa * nb - fr * nf);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best_fa = fa;
      best_fr = fr;
    }
  }
  return (static_cast<double>(best_fa) / static_cast<double>(nf) +
          static_cast<double>(best_fr) / static_cast<double>(nb)) /
         2.0;
}

EerCell EerOf(std::span<const ScoredTrial> trials) {
  EerCell cell;
  for (const auto& t : trials) (t.label == Label::kBonafide ? cell.n_bonafide : cell.n_fake)++;
  if (cell.n_bonafide > 0 && cell.n_fake > 0) cell.eer = ComputeEer(trials);
  return cell;
}

std::map<std::string, EerCell> GroupEer(
    std::span<const ScoredTrial> trials,
    const std::function<std::string(const ScoredTrial&)>& key) {
  std::map<std::string, std::vector<ScoredTrial>> groups;
  for (const auto& t : trials) groups[key(t)].push_back(t);
  std::map<std::string, EerCell> out;
  for (const auto& [k, members] : groups) out[k] = EerOf(members);
  return out;
}

EvalReport Breakdown(std::span<const ScoredTrial> trials) {
  EvalReport report;
  report.all = EerOf(trials);
  auto platforms = GroupEer(trials, [](const ScoredTrial& t) { return t.platform_id; });
  if (auto it = platforms.find(std::string(kOfflinePlatform)); it != platforms.end()) {
    report.offline = it->second;
    platforms.erase(it);
  }
  report.per_platform = std::move(platforms);
  report.per_noise = GroupEer(trials, [](const ScoredTrial& t) { return t.noise_id; });
  double sum = 0.0;
  std::size_t defined = 0;
  for (const auto& [pid, cell] : report.per_platform) {
    if (cell.eer) {
      sum += *cell.eer;
      ++defined;
    }
  }
  if (defined > 0) report.online_avg = sum / static_cast<double>(defined);
  return report;
}

std::string EvalReportToTsv(const EvalReport& report) {
  std::ostringstream out;
  out << "group\tkey\teer\tn_bonafide\tn_fake\n";
  auto row = [&](std::string_view group, std::string_view key, const EerCell& cell) {
    out << group << '\t' << key << '\t' << FormatCell(cell.eer) << '\t' << cell.n_bonafide
        << '\t' << cell.n_fake << '\n';
  };
  row("condition", "offline", report.offline);
  for (const auto& [pid, cell] : report.per_platform) row("platform", pid, cell);
  out << "condition\tavg\t" << FormatCell(report.online_avg) << "\t-\t-\n";
  row("condition", "all", report.all);
  for (const auto& [nid, cell] : report.per_noise) row("noise", nid, cell);
  return out.str();
}

void WriteEvalReport(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << EvalReportToTsv(report);
}

std::string ScoresToTsv(std::span<const ScoredTrial> trials) {
  std::ostringstream out;
  out << "utt_id\tscore\tlabel\tplatform_id\tnoise_id\n";
  for (const auto& t : trials) {
    out << t.utt_id << '\t' << FormatDouble(t.score) << '\t' << LabelName(t.label) << '\t'
        << t.platform_id << '\t' << t.noise_id << '\n';
  }
  return out.str();
}

std::vector<ScoredTrial> ParseScores(const std::string& tsv) {
  std::istringstream in(tsv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("utt_id\tscore\t", 0) != 0) {
    throw FormatError("score file must start with the utt_id/score header");
  }
  std::vector<ScoredTrial> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (std::size_t tab; (tab = line.find('\t', pos)) != std::string::npos; pos = tab + 1) {
      f.push_back(line.substr(pos, tab - pos));
    }
    f.push_back(line.substr(pos));
    if (f.size() != 5) {
      throw FormatError("score file line " + std::to_string(line_no) + " needs 5 columns");
    }
    ScoredTrial t;
    t.utt_id = f[0];
    const auto [end, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), t.score);
    if (ec != std::errc() || end != f[1].data() + f[1].size() || !std::isfinite(t.score)) {
      throw FormatError("score file line " + std::to_string(line_no) + ": bad score '" + f[1] +
                        "'");
    }
    t.label = ParseLabel(f[2]);
    t.platform_id = f[3];
    t.noise_id = f[4];
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<ScoredTrial> ReadScores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseScores(text.str());
}

std::string_view RegimeName(Regime regime) {
  switch (regime) {
    case Regime::kOff: return "off";
    case Regime::kOn: return "on";
    case Regime::kMix: return "mix";
    case Regime::kPcl: return "pcl";
    case Regime::kFcl: return "fcl";
  }
  return "?";
}

Regime ParseRegime(std::string_view name) {
  for (Regime r : {Regime::kOff, Regime::kOn, Regime::kMix, Regime::kPcl, Regime::kFcl}) {
    if (RegimeName(r) == name) return r;
  }
  throw ConfigError("unknown regime '" + std::string(name) + "' (off, on, mix, pcl, fcl)");
}

std::vector<SweepRow> LambdaSweep(const TrainEvalFn& fn, std::span<const double> lambdas,
                                  std::span<const std::uint64_t> seeds,
                                  std::span<const Regime> regimes, int workers) {
  if (seeds.empty()) throw ConfigError("lambda sweep needs at least one seed");
  if (lambdas.empty() || regimes.empty()) throw ConfigError("lambda sweep grid is empty");
  const std::size_t per_row = seeds.size();
  const std::size_t rows = lambdas.size() * regimes.size();
  std::vector<double> results(rows * per_row);
  ParallelFor(results.size(), workers, [&](std::size_t job) {
    const std::size_t row = job / per_row;
    results[job] = fn(regimes[row % regimes.size()], lambdas[row / regimes.size()],
                      seeds[job % per_row]);
  });
  std::vector<SweepRow> out;
  out.reserve(rows);
  for (std::size_t row = 0; row < rows; ++row) {
    SweepRow r;
    r.lambda = lambdas[row / regimes.size()];
    r.regime = regimes[row % regimes.size()];
    r.per_seed.assign(results.begin() + static_cast<std::ptrdiff_t>(row * per_row),
                      results.begin() + static_cast<std::ptrdiff_t>((row + 1) * per_row));
    r.min = *std::min_element(r.per_seed.begin(), r.per_seed.end());
    r.max = *std::max_element(r.per_seed.begin(), r.per_seed.end());
    for (double v : r.per_seed) r.mean += v;
    r.mean /= static_cast<double>(per_row);
    out.push_back(std::move(r));
  }
  return out;
}

std::string SweepToTsv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "lambda\tregime\tmean_eer\tmin_eer\tmax_eer\tn_seeds\n";
  for (const auto& r : rows) {
    out << FormatDouble(r.lambda) << '\t' << RegimeName(r.regime) << '\t'
        << FormatDouble(r.mean) << '\t' << FormatDouble(r.min) << '\t' << FormatDouble(r.max)
        << '\t' << r.per_seed.size() << '\n';
  }
  return out.str();
}

std::string SweepPlotData(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "regime\tx\tmean\tmin\tmax\n";
  for (Regime regime : {Regime::kOff, Regime::kOn, Regime::kMix, Regime::kPcl, Regime::kFcl}) {
    for (const auto& r : rows) {
      if (r.regime != regime) continue;
      out << RegimeName(r.regime) << '\t' << FormatDouble(r.lambda) << '\t'
          << FormatDouble(r.mean) << '\t' << FormatDouble(r.min) << '\t'
          << FormatDouble(r.max) << '\n';
    }
  }
  return out.str();
}

namespace {

LevelStats MakeLevel(SimilarityLevel level, std::span<const std::pair<Matrix, Matrix>> pairs,
                     int bins) {
  LevelStats out;
  out.level = level;
  out.stats = ComputeSimilarityStats(pairs);
  out.histogram.assign(static_cast<std::size_t>(bins), 0);
  for (double v : out.stats.per_pair) {
    auto bin = static_cast<long>(std::floor((v + 1.0) / 2.0 * bins));
    bin = std::clamp<long>(bin, 0, bins - 1);
    ++out.histogram[static_cast<std::size_t>(bin)];
  }
  return out;
}

}  // namespace

StabilityReport ComputeStability(std::span<const SimilarityPair> pairs, int bins) {
  if (pairs.empty()) throw EmptyError("stability report: no pairs");
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  std::vector<std::pair<Matrix, Matrix>> frames, phones;
  frames.reserve(pairs.size());
  phones.reserve(pairs.size());
  for (const auto& p : pairs) {
    frames.emplace_back(p.offline, p.online);
    phones.emplace_back(PoolRows(p.offline, p.seg_offline), PoolRows(p.online, p.seg_online));
  }
  return {MakeLevel(SimilarityLevel::kFrame, frames, bins),
          MakeLevel(SimilarityLevel::kPhoneme, phones, bins)};
}

std::string StabilityToTsv(const StabilityReport& report) {
  std::ostringstream out;
  out << "level\tmean\tvariance\tn_pairs\thistogram\n";
  for (const LevelStats* l : {&report.frame, &report.phoneme}) {
    out << (l->level == SimilarityLevel::kFrame ? "frame" : "phoneme") << '\t'
        << FormatDouble(l->stats.mean) << '\t' << FormatDouble(l->stats.variance) << '\t'
        << l->stats.per_pair.size() << '\t';
    for (std::size_t i = 0; i < l->histogram.size(); ++i) {
      out << (i ? "," : "") << l->histogram[i];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rtcdd
