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

#include "commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/fmt/fmt.h>

#include "rtcdd/channel.h"
#include "rtcdd/corpus.h"
#include "rtcdd/dataset.h"
#include "rtcdd/error.h"
#include "rtcdd/eval.h"
#include "rtcdd/manifest.h"
#include "rtcdd/model.h"
#include "rtcdd/phoneme.h"
#include "rtcdd/rng.h"
#include "rtcdd/synth.h"
#include "rtcdd/trainer.h"

namespace rtcdd::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  fs::path out_dir;
  int workers = 1;
};

void AddCommon(CLI::App* sub, Common& c) {
  sub->add_option("--out-dir", c.out_dir, "Directory receiving every output")->required();
  sub->add_option("--workers", c.workers, "Worker threads; never changes outputs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed for " + path.string());
}

// Resolved options next to the outputs, replayable with --config. Defaults
// are first fed back as results so they print the same way as values given
// on the command line or in a config file. workers is left out on purpose:
// the snapshot, like every other output, must not depend on it.
void WriteSnapshot(CLI::App& sub, const fs::path& dir) {
  for (CLI::Option* opt : sub.get_options()) {
    if (opt->count() > 0 || opt->get_default_str().empty()) continue;
    std::string def = opt->get_default_str();
    if (def.size() >= 2 && def.front() == '[' && def.back() == ']') {
      std::istringstream items(def.substr(1, def.size() - 2));
      for (std::string item; std::getline(items, item, ',');) opt->add_result(item);
    } else {
      opt->add_result(def);
    }
  }
  std::istringstream in(sub.config_to_str(false, false));
  std::ostringstream kept;
  kept << '[' << sub.get_name() << "]\n";
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("workers=", 0) == 0 || line.rfind("config=", 0) == 0) continue;
    kept << line << '\n';
  }
  WriteText(dir / "run_config.toml", kept.str());
}

fs::path PrepareOutDir(const fs::path& dir) {
  fs::create_directories(dir);
  return dir;
}

std::string Fmt(double v) { return fmt::format("{:.6f}", v); }

std::string FmtCell(const EerCell& c) { return c.eer ? Fmt(*c.eer) : "undefined"; }

std::map<std::string, PhonemeSegmentation> LoadAllBoundaries(
    const std::vector<fs::path>& files) {
  std::map<std::string, PhonemeSegmentation> all;
  for (const auto& f : files) all.merge(ReadBoundaries(f));
  return all;
}

// ---- training flags, shared by train and the eval sweep ----

struct TrainFlags {
  std::string preset = "desk";
  std::string regime = "off";
  double lambda = 0.0;
  double lr = TrainConfig{}.lr;
  double weight_decay = TrainConfig{}.weight_decay;
  int max_epochs = TrainConfig{}.max_epochs;
  int patience = TrainConfig{}.patience;
  int batch_size = TrainConfig{}.batch_size;
  int hidden = static_cast<int>(kDefaultHidden);
  std::uint64_t seed = 0;
};

void AddTrainFlags(CLI::App* sub, TrainFlags& t, bool with_regime) {
  sub->add_option("--preset", t.preset, "Base hyper-parameters: desk or reference (lr 1e-6)")
      ->check(CLI::IsMember({"desk", "reference"}))
      ->capture_default_str();
  if (with_regime) {
    sub->add_option("--regime", t.regime, "off, on, mix, pcl or fcl")
        ->check(CLI::IsMember({"off", "on", "mix", "pcl", "fcl"}))
        ->capture_default_str();
    sub->add_option("--lambda", t.lambda, "Consistency weight (pcl/fcl only)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }
  sub->add_option("--lr", t.lr, "AdamW learning rate")->capture_default_str();
  sub->add_option("--weight-decay", t.weight_decay, "AdamW decoupled weight decay")
      ->capture_default_str();
  sub->add_option("--max-epochs", t.max_epochs, "Epoch budget")->capture_default_str();
  sub->add_option("--patience", t.patience, "Epochs without dev improvement before stopping")
      ->capture_default_str();
  sub->add_option("--batch-size", t.batch_size, "Training items per step")->capture_default_str();
  sub->add_option("--hidden", t.hidden, "Hidden width")->capture_default_str();
  sub->add_option("--seed", t.seed, "Initialization and shuffling seed")->capture_default_str();
}

// Values not given explicitly come from the preset. Their recorded defaults
// are rewritten too, so the snapshot shows what actually ran.
TrainConfig ResolveTrainConfig(CLI::App* sub, const TrainFlags& t) {
  const TrainConfig base = t.preset == "reference" ? TrainConfig::ReferenceConfig() : TrainConfig{};
  TrainConfig c = base;
  auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
  auto pick = [&](const char* name, auto flag, auto& field) {
    if (given(name)) {
      field = flag;
    } else {
      sub->get_option(name)->default_str(fmt::format("{}", field));
    }
  };
  pick("--lr", t.lr, c.lr);
  pick("--weight-decay", t.weight_decay, c.weight_decay);
  pick("--max-epochs", t.max_epochs, c.max_epochs);
  pick("--patience", t.patience, c.patience);
  pick("--batch-size", t.batch_size, c.batch_size);
  c.hidden = t.hidden;
  c.seed = t.seed;
  if (sub->get_option_no_throw("--regime") != nullptr) {
    c.regime = ParseRegime(t.regime);
    c.lambda = t.lambda;
  }
  c.Validate();
  return c;
}

}  // namespace

// ---- make-synth ----

Command AddMakeSynth(CLI::App& root, const Context& ctx) {
  auto* sub = root.add_subcommand("make-synth", "Write the synthetic offline corpus");
  auto common = std::make_shared<Common>();
  auto o = std::make_shared<SynthOptions>();
  AddCommon(sub, *common);
  sub->add_option("--speakers", o->speakers, "Number of speakers")->capture_default_str();
  sub->add_option("--bonafide-per-cell", o->bonafide_per_cell,
                  "Bonafide utterances per (speaker, noise)")
      ->capture_default_str();
  sub->add_option("--fake-per-cell", o->fake_per_cell,
                  "Fake utterances per (generator, speaker, noise)")
      ->capture_default_str();
  sub->add_option("--gen-ids", o->gen_ids, "Generator IDs")->capture_default_str();
  sub->add_option("--noise-ids", o->noise_ids, "Noise condition IDs S01..S05")
      ->capture_default_str();
  sub->add_option("--noise-snr-db", o->noise_snr_db, "SNR of injected noise")
      ->capture_default_str();
  sub->add_option("--min-phones", o->min_phones)->capture_default_str();
  sub->add_option("--max-phones", o->max_phones)->capture_default_str();
  sub->add_option("--comb-gain", o->comb_gain, "Strength of the fake comb signature")
      ->capture_default_str();
  sub->add_option("--buzz-level-db", o->buzz_level_db, "Fake high-band buzz level")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Corpus seed")->capture_default_str();

  return {sub, [sub, common, o, ctx] {
            o->Validate();
            const auto dir = PrepareOutDir(common->out_dir);
            const auto corpus = GenerateSynthCorpus(*o, common->workers);
            WriteSynthCorpus(corpus, dir);
            WriteSnapshot(*sub, dir);
            std::size_t fakes = 0;
            for (const auto& u : corpus) fakes += u.record.label == Label::kFake;
            ctx.out << "wrote " << corpus.size() << " utterances (" << corpus.size() - fakes
                    << " bonafide, " << fakes << " fake) to " << (dir / "manifest.tsv").string()
                    << '\n';
          }};
}

// ---- simulate ----

namespace {

struct SimulateFlags {
  fs::path manifest;
  fs::path profiles;
  std::vector<std::string> profile_ids;
  std::string subset = "train";
  CorpusOptions corpus;
  std::uint64_t seed = 0;
};

std::vector<ChannelProfile> SelectProfiles(const SimulateFlags& f) {
  std::vector<ChannelProfile> all = f.profiles.empty() ? BuiltinProfiles() : LoadProfiles(f.profiles);
  if (!f.profile_ids.empty()) {
    std::vector<ChannelProfile> chosen;
    for (const auto& id : f.profile_ids) {
      const auto it = std::find_if(all.begin(), all.end(),
                                   [&](const ChannelProfile& p) { return p.profile_id == id; });
      if (it == all.end()) throw ConfigError("--profile-ids: unknown profile '" + id + "'");
      chosen.push_back(*it);
    }
    all = std::move(chosen);
  }
  if (all.empty()) throw ConfigError("no channel profiles selected");
  if (f.seed != 0) {
    for (auto& p : all) p.seed = DeriveSeed(p.seed, f.seed);
  }
  return all;
}

}  // namespace

Command AddSimulate(CLI::App& root, const Context& ctx) {
  auto* sub = root.add_subcommand("simulate", "Transmit an offline corpus through RTC profiles");
  auto common = std::make_shared<Common>();
  auto f = std::make_shared<SimulateFlags>();
  AddCommon(sub, *common);
  sub->add_option("--manifest", f->manifest, "Offline manifest")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--profiles", f->profiles, "Profile YAML; built-in P01..P07 when omitted")
      ->check(CLI::ExistingFile);
  sub->add_option("--profile-ids", f->profile_ids, "Restrict to these profile IDs");
  sub->add_option("--subset", f->subset, "Subset name used in the output layout")
      ->check(CLI::IsMember({"train", "dev", "eval"}))
      ->capture_default_str();
  sub->add_option("--batch-size", f->corpus.batch_size, "Utterances per transmitted batch")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--gap-ms", f->corpus.gap_ms, "Silence between batched utterances")
      ->capture_default_str();
  sub->add_option("--verify-threshold", f->corpus.verify_threshold,
                  "Minimum content score to keep a recovered utterance")
      ->capture_default_str();
  sub->add_option("--max-lag-ms", f->corpus.max_lag_ms, "Lag search limit")->capture_default_str();
  sub->add_option("--seed", f->seed, "Mixed into every profile seed when nonzero")
      ->capture_default_str();

  return {sub, [sub, common, f, ctx] {
            const auto dir = PrepareOutDir(common->out_dir);
            const auto profiles = SelectProfiles(*f);
            Manifest offline = ReadManifest(f->manifest, ParseSubset(f->subset));
            CorpusOptions opts = f->corpus;
            opts.workers = common->workers;
            const OnlineCorpus corpus = BuildOnlineCorpus(offline, f->manifest, profiles, opts, dir);

            WriteManifest(corpus.online, dir / "online.tsv");
            std::ostringstream dropped;
            dropped << "utt_id\tplatform_id\tscore\treason\n";
            for (const auto& d : corpus.dropped) {
              dropped << d.utt_id << '\t' << d.platform_id << '\t' << Fmt(d.score) << '\t'
                      << d.reason << '\n';
            }
            WriteText(dir / "dropped.tsv", dropped.str());
            std::ostringstream rates;
            rates << "platform_id\tattempted\tpassed\tpass_rate\n";
            for (const auto& p : profiles) {
              const auto& s = corpus.stats.at(p.profile_id);
              rates << p.profile_id << '\t' << s.attempted << '\t' << s.passed << '\t'
                    << Fmt(s.pass_rate()) << '\n';
              ctx.out << p.profile_id << ": " << s.passed << '/' << s.attempted << " passed ("
                      << fmt::format("{:.1f}", 100.0 * s.pass_rate()) << "%)\n";
            }
            WriteText(dir / "pass_rates.tsv", rates.str());
            SaveProfiles(profiles, dir / "profiles.yaml");
            WriteSnapshot(*sub, dir);
          }};
}

// ---- build-corpus ----

Command AddBuildCorpus(CLI::App& root, const Context& ctx) {
  auto* sub = root.add_subcommand("build-corpus", "Partition records into train/dev/eval");
  auto common = std::make_shared<Common>();
  auto manifests = std::make_shared<std::vector<fs::path>>();
  auto scheme_path = std::make_shared<fs::path>();
  AddCommon(sub, *common);
  sub->add_option("--manifest", *manifests, "Input manifests (offline and online)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--scheme", *scheme_path,
                  "Partition scheme YAML; speakers split 60/20/20 when omitted")
      ->check(CLI::ExistingFile);

  return {sub, [sub, common, manifests, scheme_path, ctx] {
            const auto dir = PrepareOutDir(common->out_dir);
            const auto base = fs::absolute(dir);
            std::vector<UtteranceRecord> records;
            for (const auto& m : *manifests) {
              for (auto r : ReadManifest(m).records) {
                // Rebase so the partition manifests resolve from out-dir.
                r.audio_path =
                    fs::absolute(ResolveAudioPath(m, r)).lexically_proximate(base).generic_string();
                records.push_back(std::move(r));
              }
            }
            ValidateRecords(records);
            const PartitionScheme scheme = scheme_path->empty()
                                               ? DefaultPartitionScheme(records)
                                               : LoadPartitionScheme(*scheme_path);
            Partition part = PartitionRecords(records, scheme);
            part.train.subset = Subset::kTrain;
            part.dev.subset = Subset::kDev;
            part.eval.subset = Subset::kEval;
            WriteManifest(part.train, dir / "train.tsv");
            WriteManifest(part.dev, dir / "dev.tsv");
            WriteManifest(part.eval, dir / "eval.tsv");
            WriteManifest(Manifest{part.unassigned, Subset::kTrain}, dir / "unassigned.tsv");
            WriteSnapshot(*sub, dir);
            ctx.out << "train " << part.train.records.size() << ", dev "
                    << part.dev.records.size() << ", eval " << part.eval.records.size()
                    << ", unassigned " << part.unassigned.size() << '\n';
          }};
}

// ---- train ----

namespace {

struct DataFlags {
  std::vector<fs::path> train, dev, eval, boundaries;
};

}  // namespace

Command AddTrain(CLI::App& root, const Context& ctx) {
  auto* sub = root.add_subcommand("train", "Train a detector under one regime");
  auto common = std::make_shared<Common>();
  auto t = std::make_shared<TrainFlags>();
  auto d = std::make_shared<DataFlags>();
  AddCommon(sub, *common);
  sub->add_option("--train", d->train, "Training manifests")->required()->check(CLI::ExistingFile);
  sub->add_option("--dev", d->dev, "Dev manifests for early stopping")
      ->check(CLI::ExistingFile);
  sub->add_option("--boundaries", d->boundaries, "Phone boundary files")
      ->check(CLI::ExistingFile);
  AddTrainFlags(sub, *t, true);

  return {sub, [sub, common, t, d, ctx] {
            TrainConfig config = ResolveTrainConfig(sub, *t);
            config.workers = common->workers;
            if (sub->get_option("--lambda")->count() > 0 && config.regime != Regime::kPcl &&
                config.regime != Regime::kFcl) {
              ctx.err << "warning: --lambda is ignored under regime " << t->regime << '\n';
            }
            const auto dir = PrepareOutDir(common->out_dir);
            const auto bounds = LoadAllBoundaries(d->boundaries);
            const Dataset train = LoadDataset(d->train, bounds, common->workers);
            const Dataset dev = d->dev.empty() ? Dataset{} : LoadDataset(d->dev, bounds, common->workers);
            const TrainResult result = Train(train, dev, config);
            SaveCheckpoint(result.best, dir / "model.ckpt");
            WriteText(dir / "history.tsv", HistoryToTsv(result.history));
            WriteSnapshot(*sub, dir);
            ctx.out << "trained " << RegimeName(config.regime) << " for " << result.history.size()
                    << " epoch(s)";
            if (!dev.empty()) ctx.out << ", best dev EER " << Fmt(result.state.best_dev_eer);
            ctx.out << '\n';
          }};
}

// ---- eval ----

namespace {

struct EvalFlags {
  fs::path checkpoint;
  fs::path scores;
  bool stability = false;
  int bins = 20;
  std::vector<double> sweep_lambdas;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
};

void RunSweep(CLI::App* sub, const TrainFlags& t, const DataFlags& d, const EvalFlags& e,
              int workers, const std::map<std::string, PhonemeSegmentation>& bounds,
              const fs::path& dir, const Context& ctx) {
  if (d.train.empty() || d.eval.empty()) {
    throw ConfigError("--sweep-lambda needs --train and --eval manifests");
  }
  const TrainConfig base = ResolveTrainConfig(sub, t);
  const Dataset train = LoadDataset(d.train, bounds, workers);
  const Dataset dev = d.dev.empty() ? Dataset{} : LoadDataset(d.dev, bounds, workers);
  const Dataset eval = LoadDataset(d.eval, bounds, workers);
  const auto fn = [&](Regime regime, double lambda, std::uint64_t seed) {
    TrainConfig c = base;
    c.regime = regime;
    c.lambda = lambda;
    c.seed = seed;
    c.workers = 1;  // parallelism is across sweep cells
    const auto report = Breakdown(ScoreDataset(Train(train, dev, c).best, eval));
    if (!report.all.eer) throw UndefinedMetricError("sweep eval set lacks one class");
    return *report.all.eer;
  };
  const auto rows = LambdaSweep(fn, e.sweep_lambdas, e.seeds, kSweepRegimes, workers);
  WriteText(dir / "sweep.tsv", SweepToTsv(rows));
  WriteText(dir / "sweep_plot.tsv", SweepPlotData(rows));
  for (const auto& r : rows) {
    ctx.out << RegimeName(r.regime) << " lambda=" << fmt::format("{}", r.lambda) << ": mean "
            << Fmt(r.mean) << ", range " << Fmt(r.range()) << '\n';
  }
}

}  // namespace

Command AddEval(CLI::App& root, const Context& ctx) {
  auto* sub = root.add_subcommand("eval", "Score an eval set and write EER reports");
  auto common = std::make_shared<Common>();
  auto e = std::make_shared<EvalFlags>();
  auto d = std::make_shared<DataFlags>();
  auto t = std::make_shared<TrainFlags>();
  AddCommon(sub, *common);
  auto* ckpt = sub->add_option("--checkpoint", e->checkpoint, "Trained model")
                   ->check(CLI::ExistingFile);
  auto* scores = sub->add_option("--scores", e->scores, "Precomputed scores.tsv")
                     ->check(CLI::ExistingFile);
  ckpt->excludes(scores);
  sub->add_option("--eval", d->eval, "Eval manifests")->check(CLI::ExistingFile);
  sub->add_option("--boundaries", d->boundaries, "Phone boundary files")
      ->check(CLI::ExistingFile);
  sub->add_flag("--stability", e->stability, "Also write frame vs phoneme similarity stats");
  sub->add_option("--bins", e->bins, "Similarity histogram bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* sweep = sub->add_option("--sweep-lambda", e->sweep_lambdas,
                                "Train fcl and pcl at each lambda and seed");
  sub->add_option("--seeds", e->seeds, "Seeds for the sweep")->capture_default_str()->needs(sweep);
  sub->add_option("--train", d->train, "Training manifests for the sweep")
      ->check(CLI::ExistingFile)
      ->needs(sweep);
  sub->add_option("--dev", d->dev, "Dev manifests for the sweep")
      ->check(CLI::ExistingFile)
      ->needs(sweep);
  AddTrainFlags(sub, *t, false);

  return {sub, [sub, common, e, d, t, ctx] {
            const bool scoring = !e->checkpoint.empty() || !e->scores.empty();
            if (!scoring && e->sweep_lambdas.empty() && !e->stability) {
              throw ConfigError("nothing to do: give --checkpoint, --scores, --sweep-lambda or --stability");
            }
            if ((!e->checkpoint.empty() || e->stability) && d->eval.empty()) {
              throw ConfigError("--eval manifests are required with --checkpoint or --stability");
            }
            const auto dir = PrepareOutDir(common->out_dir);
            const auto bounds = LoadAllBoundaries(d->boundaries);
            const bool need_eval = !e->checkpoint.empty() || e->stability;
            const Dataset eval = need_eval ? LoadDataset(d->eval, bounds, common->workers) : Dataset{};

            if (scoring) {
              std::vector<ScoredTrial> trials;
              if (!e->checkpoint.empty()) {
                trials = ScoreDataset(LoadCheckpoint(e->checkpoint), eval, common->workers);
                WriteText(dir / "scores.tsv", ScoresToTsv(trials));
              } else {
                trials = ReadScores(e->scores);
              }
              const EvalReport report = Breakdown(trials);
              if (!report.all.eer) {
                throw UndefinedMetricError("eval set has " + std::to_string(report.all.n_bonafide) +
                                           " bonafide and " + std::to_string(report.all.n_fake) +
                                           " fake trials; EER needs both classes");
              }
              WriteEvalReport(report, dir / "report.tsv");
              ctx.out << "All EER " << FmtCell(report.all) << ", offline " << FmtCell(report.offline)
                      << ", online avg "
                      << (report.online_avg ? Fmt(*report.online_avg) : std::string("undefined"))
                      << '\n';
              for (const auto& [pid, cell] : report.per_platform) {
                ctx.out << "  " << pid << ' ' << FmtCell(cell) << '\n';
              }
            }
            if (e->stability) {
              const auto pairs = SimilarityPairs(eval);
              if (pairs.empty()) throw PairingError("--stability found no offline/online pairs");
              const auto st = ComputeStability(pairs, e->bins);
              WriteText(dir / "stability.tsv", StabilityToTsv(st));
              ctx.out << "similarity frame mean " << Fmt(st.frame.stats.mean) << " var "
                      << Fmt(st.frame.stats.variance) << ", phoneme mean "
                      << Fmt(st.phoneme.stats.mean) << " var " << Fmt(st.phoneme.stats.variance)
                      << '\n';
            }
            if (!e->sweep_lambdas.empty()) {
              RunSweep(sub, *t, *d, *e, common->workers, bounds, dir, ctx);
            }
            WriteSnapshot(*sub, dir);
          }};
}

// ---- analyze-similarity ----

Command AddAnalyzeSimilarity(CLI::App& root, const Context& ctx) {
  auto* sub = root.add_subcommand("analyze-similarity",
                                  "Frame vs phoneme cosine similarity of offline/online pairs");
  auto common = std::make_shared<Common>();
  auto d = std::make_shared<DataFlags>();
  auto bins = std::make_shared<int>(20);
  AddCommon(sub, *common);
  sub->add_option("--manifest", d->eval, "Manifests holding both sides of each pair")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--boundaries", d->boundaries, "Phone boundary files")
      ->check(CLI::ExistingFile);
  sub->add_option("--bins", *bins, "Histogram bins")->check(CLI::PositiveNumber)->capture_default_str();

  return {sub, [sub, common, d, bins, ctx] {
            const auto dir = PrepareOutDir(common->out_dir);
            const Dataset data =
                LoadDataset(d->eval, LoadAllBoundaries(d->boundaries), common->workers);
            const auto pairs = SimilarityPairs(data);
            if (pairs.empty()) throw PairingError("no offline/online pairs in the manifests");
            const auto st = ComputeStability(pairs, *bins);
            WriteText(dir / "stability.tsv", StabilityToTsv(st));
            WriteSnapshot(*sub, dir);
            ctx.out << pairs.size() << " pairs; frame mean " << Fmt(st.frame.stats.mean) << " var "
                    << Fmt(st.frame.stats.variance) << "; phoneme mean "
                    << Fmt(st.phoneme.stats.mean) << " var " << Fmt(st.phoneme.stats.variance)
                    << '\n';
          }};
}

}  // namespace rtcdd::cli
