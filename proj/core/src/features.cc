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

#include "rtcdd/features.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "rtcdd/dsp.h"
#include "rtcdd/error.h"

namespace rtcdd {

namespace {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

std::size_t NumFrames(std::size_t num_samples, std::size_t win, std::size_t hop) {
  if (num_samples < win || win == 0 || hop == 0) return 0;
  return (num_samples - win) / hop + 1;
}

Matrix MelFilterbank(int n_mels, std::size_t fft_size, int sample_rate_hz) {
  const std::size_t bins = fft_size / 2 + 1;
  Matrix fb = Matrix::Zero(n_mels, static_cast<Eigen::Index>(bins));
  const double mel_lo = HzToMel(0.0);
  const double mel_hi = HzToMel(sample_rate_hz / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_mels + 1));
  }
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges[static_cast<std::size_t>(m)];
    const double center = edges[static_cast<std::size_t>(m) + 1];
    const double right = edges[static_cast<std::size_t>(m) + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate_hz /
                       static_cast<double>(fft_size);
      double w = 0.0;
      if (f > left && f <= center) {
        w = (f - left) / (center - left);
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      fb(m, static_cast<Eigen::Index>(k)) = w;
    }
  }
  return fb;
}

FeatureSequence LogMelFeatures(const AudioClip& clip, const LogMelOptions& opts) {
  if (opts.n_mels < 1) throw ConfigError("n_mels must be positive");
  const auto win = static_cast<std::size_t>(MsToSamples(opts.win_ms, clip.sample_rate_hz));
  const auto hop = static_cast<std::size_t>(MsToSamples(opts.hop_ms, clip.sample_rate_hz));
  if (win == 0 || hop == 0) throw ConfigError("window and hop must be positive");
  const std::size_t frames = NumFrames(clip.size(), win, hop);
  if (frames == 0) {
    throw TooShortError("clip '" + clip.id + "' has " +
                        std::to_string(clip.size()) +
                        " samples, shorter than one window of " +
                        std::to_string(win));
  }
  const std::size_t fft_size = dsp::NextPow2(win);
  const Matrix fb = MelFilterbank(opts.n_mels, fft_size, clip.sample_rate_hz);
  const auto window = dsp::HannPeriodic(win);

  FeatureSequence out;
  out.frame_hop_ms = opts.hop_ms;
  out.frame_len_ms = opts.win_ms;
  out.source_id = clip.id;
  out.frames.resize(static_cast<Eigen::Index>(frames), opts.n_mels);

  std::vector<double> frame(win);
  Vector power(static_cast<Eigen::Index>(fft_size / 2 + 1));
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = clip.samples.data() + t * hop;
    for (std::size_t i = 0; i < win; ++i) frame[i] = src[i] * window[i];
    const auto spec = dsp::RealSpectrum(frame, fft_size);
    for (std::size_t k = 0; k < spec.size(); ++k) {
      power(static_cast<Eigen::Index>(k)) = std::norm(spec[k]);
    }
    const Vector mel = fb * power;
    for (int m = 0; m < opts.n_mels; ++m) {
      out.frames(static_cast<Eigen::Index>(t), m) = std::log(mel(m) + kLogFloor);
    }
  }
  return out;
}

std::vector<double> FrameLogEnergy(const AudioClip& clip, double win_ms,
                                   double hop_ms) {
  const auto win = static_cast<std::size_t>(MsToSamples(win_ms, clip.sample_rate_hz));
  const auto hop = static_cast<std::size_t>(MsToSamples(hop_ms, clip.sample_rate_hz));
  const std::size_t frames = NumFrames(clip.size(), win, hop);
  std::vector<double> out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < win; ++i) {
      const double s = clip.samples[t * hop + i];
      acc += s * s;
    }
    out[t] = 10.0 * std::log10(acc / static_cast<double>(win) + kLogFloor);
  }
  return out;
}

long AlignLag(const AudioClip& reference, const AudioClip& degraded,
              double max_lag_ms) {
  RequireSameRate(reference, degraded);
  const std::size_t min_len =
      static_cast<std::size_t>(MsToSamples(100.0, reference.sample_rate_hz));
  if (reference.size() < min_len || degraded.size() < min_len) {
    throw AlignmentError("align_lag needs at least 100 ms of audio per clip");
  }
  const auto& r = reference.samples;
  const auto& d = degraded.samples;
  const std::size_t nr = r.size(), nd = d.size();

  std::vector<double> er(nr + 1, 0.0), ed(nd + 1, 0.0);
  for (std::size_t i = 0; i < nr; ++i) er[i + 1] = er[i] + r[i] * r[i];
  for (std::size_t i = 0; i < nd; ++i) ed[i + 1] = ed[i] + d[i] * d[i];
  if (er[nr] <= 0.0 || ed[nd] <= 0.0) {
    throw AlignmentError("cannot align an all-zero clip");
  }

  const auto max_lag = static_cast<std::size_t>(
      std::max(0, MsToSamples(max_lag_ms, reference.sample_rate_hz)));
  const std::size_t last = std::min(max_lag, nd - 1);
  // Circular correlation equals the linear one for lags in [0, last] once
  // the transform covers nr + last samples.
  const std::size_t size = dsp::NextPow2(std::max(nd, nr + last + 1));
  // Both real signals share one complex transform: z = r + i d.
  std::vector<std::complex<double>> z(size);
  for (std::size_t i = 0; i < nr; ++i) z[i].real(r[i]);
  for (std::size_t i = 0; i < std::min(nd, size); ++i) z[i].imag(d[i]);
  dsp::Fft(z);
  std::vector<std::complex<double>> prod(size);
  for (std::size_t k = 0; k < size; ++k) {
    const std::complex<double> a = z[k];
    const std::complex<double> b = std::conj(z[(size - k) % size]);
    // R = (a + b) / 2, D = (a - b) / 2i; accumulate D * conj(R).
    const double rr = 0.5 * (a.real() + b.real()), ri = 0.5 * (a.imag() + b.imag());
    const double dr = 0.5 * (a.imag() - b.imag()), di = -0.5 * (a.real() - b.real());
    prod[k] = {dr * rr + di * ri, di * rr - dr * ri};
  }
  dsp::Fft(prod, /*inverse=*/true);
  const auto& fd = prod;

  long best_lag = -1;
  double best = -2.0;
  for (std::size_t k = 0; k <= last; ++k) {
    const std::size_t overlap = std::min(nr, nd - k);
    const double denom = std::sqrt(er[overlap] * (ed[k + overlap] - ed[k]));
    const double c = denom > 0.0 ? fd[k].real() / denom : 0.0;
    if (c > best + 1e-12) {
      best = c;
      best_lag = static_cast<long>(k);
    }
  }
  return best_lag;
}

}  // namespace rtcdd
