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

#include "rtcdd/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "rtcdd/error.h"
#include "rtcdd/parallel.h"
#include "rtcdd/rng.h"

namespace rtcdd {

Params Params::Zeros(Eigen::Index d, Eigen::Index m) {
  return Params{Matrix::Zero(d, m), RowVector::Zero(m), Matrix::Zero(m, 2), RowVector::Zero(2)};
}

std::size_t Params::size() const {
  return static_cast<std::size_t>(w_proj.size() + b_proj.size() + w_cls.size() + b_cls.size());
}

bool Params::AllFinite() const {
  return w_proj.allFinite() && b_proj.allFinite() && w_cls.allFinite() && b_cls.allFinite();
}

double Params::SquaredNorm() const {
  return w_proj.squaredNorm() + b_proj.squaredNorm() + w_cls.squaredNorm() +
         b_cls.squaredNorm();
}

Params& Params::operator+=(const Params& other) {
  w_proj += other.w_proj;
  b_proj += other.b_proj;
  w_cls += other.w_cls;
  b_cls += other.b_cls;
  return *this;
}

Params& Params::operator*=(double s) {
  w_proj *= s;
  b_proj *= s;
  w_cls *= s;
  b_cls *= s;
  return *this;
}

std::vector<double> Params::Flatten() const {
  std::vector<double> flat;
  flat.reserve(size());
  auto push = [&](const auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
    }
  };
  push(w_proj);
  push(b_proj);
  push(w_cls);
  push(b_cls);
  return flat;
}

void Params::Unflatten(const std::vector<double>& flat) {
  if (flat.size() != size()) throw ShapeError("parameter vector has the wrong length");
  std::size_t i = 0;
  auto pull = [&](auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = flat[i++];
    }
  };
  pull(w_proj);
  pull(b_proj);
  pull(w_cls);
  pull(b_cls);
}

DetectorModel DetectorModel::Init(Eigen::Index d, Eigen::Index m, std::uint64_t seed) {
  if (d < 1 || m < 1) throw ConfigError("model dimensions must be positive");
  DetectorModel model;
  model.params = Params::Zeros(d, m);
  Rng rng(DeriveSeed(seed, "init"));
  const double sd_proj = std::sqrt(2.0 / static_cast<double>(d));
  const double sd_cls = std::sqrt(1.0 / static_cast<double>(m));
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) model.params.w_proj(r, c) = rng.Normal(0.0, sd_proj);
  }
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) model.params.w_cls(r, c) = rng.Normal(0.0, sd_cls);
  }
  model.input_mean = RowVector::Zero(d);
  model.input_scale = RowVector::Ones(d);
  return model;
}

ForwardResult Forward(const DetectorModel& model, const Matrix& frames) {
  const Params& p = model.params;
  if (frames.cols() != p.input_dim()) {
    throw ShapeError("feature width " + std::to_string(frames.cols()) +
                     " does not match model input " + std::to_string(p.input_dim()));
  }
  if (frames.rows() == 0) throw TooShortError("forward: zero frames");
  ForwardResult out;
  out.params = &p;
  out.standardized = (frames.rowwise() - model.input_mean).array().rowwise() *
                     model.input_scale.array();
  out.hidden = ((out.standardized * p.w_proj).rowwise() + p.b_proj).cwiseMax(0.0);
  const RowVector embedding = out.hidden.colwise().mean();
  out.logits = embedding * p.w_cls + p.b_cls;
  return out;
}

ForwardResult Forward(const DetectorModel& model, const FeatureSequence& features) {
  return Forward(model, features.frames);
}

namespace {

RowVector Softmax(const RowVector& z) {
  const double peak = z.maxCoeff();
  RowVector e = (z.array() - peak).exp().matrix();
  return e / e.sum();
}

// dz is dL/dlogits; extra (if non-null) is an additional dL/dhidden.
void Backprop(const Params& p, const ForwardResult& f, const RowVector& dz, const Matrix* extra,
              Params& g) {
  const auto frames = static_cast<double>(f.hidden.rows());
  const RowVector embedding = f.hidden.colwise().mean();
  g.w_cls.noalias() += embedding.transpose() * dz;
  g.b_cls += dz;
  const RowVector de = dz * p.w_cls.transpose() / frames;
  Matrix dh = de.replicate(f.hidden.rows(), 1);
  if (extra != nullptr) dh += *extra;
  dh = (f.hidden.array() > 0.0).select(dh, 0.0);
  g.w_proj.noalias() += f.standardized.transpose() * dh;
  g.b_proj += dh.colwise().sum();
}

RowVector CeGrad(const RowVector& logits, Label label, double weight) {
  RowVector dz = Softmax(logits);
  dz(static_cast<int>(label)) -= 1.0;
  return dz * weight;
}

// Consistency value and its gradients with respect to both hidden matrices.
struct ConsistencyTerm {
  double value = 0.0;
  Matrix grad_a, grad_b;
};

ConsistencyTerm ComputeConsistency(const PairItem& item, const Matrix& ha, const Matrix& hb,
                                   Consistency kind, bool with_grad) {
  ConsistencyTerm out;
  if (kind == Consistency::kNone) return out;
  if (kind == Consistency::kFrame) {
    out.value = FclLoss(ha, hb);
    if (with_grad) {
      const Eigen::Index t = std::min(ha.rows(), hb.rows());
      const double scale = 2.0 / static_cast<double>(t * ha.cols());
      const Matrix diff = (ha.topRows(t) - hb.topRows(t)) * scale;
      out.grad_a = Matrix::Zero(ha.rows(), ha.cols());
      out.grad_b = Matrix::Zero(hb.rows(), hb.cols());
      out.grad_a.topRows(t) = diff;
      out.grad_b.topRows(t) = -diff;
    }
    return out;
  }
  if (item.seg_offline == nullptr || item.seg_online == nullptr) {
    throw PairingError("phoneme consistency needs segmentations for both sides of a pair");
  }
  const Matrix pa = PoolRows(ha, *item.seg_offline);
  const Matrix pb = PoolRows(hb, *item.seg_online);
  out.value = PclLoss(pa, pb);
  if (with_grad) {
    const Eigen::Index k = std::min(pa.rows(), pb.rows());
    const double scale = 2.0 / static_cast<double>(k * pa.cols());
    const Matrix dp = (pa.topRows(k) - pb.topRows(k)) * scale;
    auto spread = [&](const PhonemeSegmentation& seg, const Matrix& h, double sign) {
      Matrix g = Matrix::Zero(h.rows(), h.cols());
      for (Eigen::Index i = 0; i < k; ++i) {
        const auto& s = seg.segments[static_cast<std::size_t>(i)];
        const RowVector share = dp.row(i) * (sign / static_cast<double>(s.length()));
        g.middleRows(s.start, s.length()).rowwise() += share;
      }
      return g;
    };
    out.grad_a = spread(*item.seg_offline, ha, 1.0);
    out.grad_b = spread(*item.seg_online, hb, -1.0);
  }
  return out;
}

const Matrix& Checked(const Matrix* m) {
  if (m == nullptr) throw EmptyBatchError("batch item without features");
  return *m;
}

LossAndGradient ItemGradient(const DetectorModel& model, const Batch& batch, std::size_t i,
                             Consistency consistency, double lambda, bool with_grad) {
  const Params& p = model.params;
  LossAndGradient out;
  if (with_grad) out.grad = Params::Zeros(p.input_dim(), p.hidden_dim());
  if (i < batch.singles.size()) {
    const auto& item = batch.singles[i];
    const ForwardResult f = Forward(model, Checked(item.frames));
    out.loss = CrossEntropy(f.logits, item.label);
    if (with_grad) Backprop(p, f, CeGrad(f.logits, item.label, 1.0), nullptr, out.grad);
    return out;
  }
  const auto& item = batch.pairs[i - batch.singles.size()];
  const ForwardResult fa = Forward(model, Checked(item.offline));
  const ForwardResult fb = Forward(model, Checked(item.online));
  ConsistencyTerm term;
  if (lambda != 0.0) term = ComputeConsistency(item, fa.hidden, fb.hidden, consistency, with_grad);
  out.loss = JointLoss(fa.logits, fb.logits, item.label, term.value, lambda);
  if (with_grad) {
    const bool has_extra = lambda != 0.0 && consistency != Consistency::kNone;
    if (has_extra) {
      term.grad_a *= lambda;
      term.grad_b *= lambda;
    }
    Backprop(p, fa, CeGrad(fa.logits, item.label, 0.5), has_extra ? &term.grad_a : nullptr,
             out.grad);
    Backprop(p, fb, CeGrad(fb.logits, item.label, 0.5), has_extra ? &term.grad_b : nullptr,
             out.grad);
  }
  return out;
}

}  // namespace

double CrossEntropy(const RowVector& logits, Label label) {
  const double peak = logits.maxCoeff();
  const double lse = peak + std::log((logits.array() - peak).exp().sum());
  return lse - logits(static_cast<int>(label));
}

double JointLoss(const RowVector& z_a, const RowVector& z_b, Label label, double consistency,
                 double lambda) {
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  return 0.5 * (CrossEntropy(z_a, label) + CrossEntropy(z_b, label)) + lambda * consistency;
}

double BatchLoss(const DetectorModel& model, const Batch& batch, Consistency consistency,
                 double lambda) {
  if (batch.empty()) throw EmptyBatchError("empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    total += ItemGradient(model, batch, i, consistency, lambda, false).loss;
  }
  return total;
}

LossAndGradient BatchGradients(const DetectorModel& model, const Batch& batch,
                               Consistency consistency, double lambda, int workers) {
  if (batch.empty()) throw EmptyBatchError("empty batch");
  std::vector<LossAndGradient> parts(batch.size());
  ParallelFor(batch.size(), workers, [&](std::size_t i) {
    parts[i] = ItemGradient(model, batch, i, consistency, lambda, true);
  });
  LossAndGradient out;
  out.grad = Params::Zeros(model.input_dim(), model.hidden_dim());
  for (const auto& part : parts) {
    out.loss += part.loss;
    out.grad += part.grad;
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'R', 'T', 'C', 'D', 'D', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void PutLe(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T GetLe(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw FormatError("checkpoint is truncated");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void SaveCheckpoint(const DetectorModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  PutLe<std::uint32_t>(out, kVersion);
  PutLe<std::uint64_t>(out, static_cast<std::uint64_t>(model.input_dim()));
  PutLe<std::uint64_t>(out, static_cast<std::uint64_t>(model.hidden_dim()));
  for (double v : model.input_mean) PutLe(out, v);
  for (double v : model.input_scale) PutLe(out, v);
  for (double v : model.params.Flatten()) PutLe(out, v);
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

DetectorModel LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(path.string() + " is not an rtcdd checkpoint");
  }
  const auto version = GetLe<std::uint32_t>(in);
  if (version != kVersion) {
    throw UnsupportedError("checkpoint version " + std::to_string(version));
  }
  const auto d = GetLe<std::uint64_t>(in);
  const auto m = GetLe<std::uint64_t>(in);
  if (d == 0 || m == 0 || d > (1u << 20) || m > (1u << 20)) {
    throw FormatError("checkpoint has implausible shapes");
  }
  DetectorModel model;
  model.params = Params::Zeros(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
  model.input_mean.resize(static_cast<Eigen::Index>(d));
  model.input_scale.resize(static_cast<Eigen::Index>(d));
  for (auto& v : model.input_mean) v = GetLe<double>(in);
  for (auto& v : model.input_scale) v = GetLe<double>(in);
  std::vector<double> flat(model.params.size());
  for (auto& v : flat) v = GetLe<double>(in);
  model.params.Unflatten(flat);
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("checkpoint has trailing bytes");
  return model;
}

}  // namespace rtcdd
