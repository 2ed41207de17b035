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

#include "rtcdd/dsp.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "rtcdd/error.h"

namespace rtcdd::dsp {

std::size_t NextPow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

// exp(-2 pi i k / n) for k < n / 2, each entry from cos/sin directly.
const std::vector<std::complex<double>>& Twiddles(std::size_t n) {
  thread_local std::map<std::size_t, std::vector<std::complex<double>>> cache;
  auto& tw = cache[n];
  if (tw.empty()) {
    tw.resize(n / 2);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
      tw[k] = {std::cos(step * static_cast<double>(k)), std::sin(step * static_cast<double>(k))};
    }
  }
  return tw;
}

}  // namespace

void Fft(std::vector<std::complex<double>>& x, bool inverse) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw ConfigError("FFT size must be a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  const auto& tw = Twiddles(n);
  const double sign = inverse ? -1.0 : 1.0;
  // Plain arithmetic instead of std::complex operator*, which routes through
  // the NaN-checking __muldc3.
  auto* data = reinterpret_cast<double*>(x.data());
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const double wr = tw[k * stride].real();
        const double wi = sign * tw[k * stride].imag();
        double* u = data + 2 * (base + k);
        double* v = data + 2 * (base + k + half);
        const double vr = v[0] * wr - v[1] * wi;
        const double vi = v[0] * wi + v[1] * wr;
        v[0] = u[0] - vr;
        v[1] = u[1] - vi;
        u[0] += vr;
        u[1] += vi;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : x) v *= scale;
  }
}

std::vector<std::complex<double>> RealSpectrum(std::span<const double> frame,
                                               std::size_t fft_size) {
  std::vector<std::complex<double>> buf(fft_size);
  const std::size_t n = std::min(frame.size(), fft_size);
  for (std::size_t i = 0; i < n; ++i) buf[i] = frame[i];
  Fft(buf);
  buf.resize(fft_size / 2 + 1);
  return buf;
}

std::vector<double> HannPeriodic(std::size_t len) {
  std::vector<double> w(len);
  for (std::size_t i = 0; i < len; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(len));
  }
  return w;
}

std::vector<double> LowPassFir(double cutoff_hz, int sample_rate_hz, int taps) {
  if (taps < 1 || taps % 2 == 0) throw ConfigError("FIR length must be odd");
  const double fc = cutoff_hz / sample_rate_hz;
  const int mid = taps / 2;
  std::vector<double> h(static_cast<std::size_t>(taps));
  double sum = 0.0;
  for (int i = 0; i < taps; ++i) {
    const int k = i - mid;
    const double ideal =
        k == 0 ? 2.0 * fc
               : std::sin(2.0 * std::numbers::pi * fc * k) / (std::numbers::pi * k);
    const double a = 2.0 * std::numbers::pi * i / (taps - 1);
    const double window =
        taps == 1 ? 1.0 : 0.42 - 0.5 * std::cos(a) + 0.08 * std::cos(2.0 * a);
    h[static_cast<std::size_t>(i)] = ideal * window;
    sum += h[static_cast<std::size_t>(i)];
  }
  for (double& v : h) v /= sum;
  return h;
}

std::vector<double> FilterCentered(std::span<const double> x,
                                   std::span<const double> taps) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto len = static_cast<std::ptrdiff_t>(taps.size());
  const std::ptrdiff_t mid = len / 2;
  std::vector<double> y(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = 0; k < len; ++k) {
      const std::ptrdiff_t j = i + mid - k;
      if (j >= 0 && j < n) acc += taps[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

std::vector<double> FilterCausal(std::span<const double> x,
                                 std::span<const double> taps) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double acc = 0.0;
    const std::size_t kmax = std::min(taps.size(), i + 1);
    for (std::size_t k = 0; k < kmax; ++k) acc += taps[k] * x[i - k];
    y[i] = acc;
  }
  return y;
}

std::vector<double> BandPass(std::span<const double> x, double center_hz,
                             double q, int sample_rate_hz) {
  const double w0 = 2.0 * std::numbers::pi * center_hz / sample_rate_hz;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  const double b0 = alpha / a0, b2 = -alpha / a0;
  const double a1 = -2.0 * std::cos(w0) / a0, a2 = (1.0 - alpha) / a0;
  std::vector<double> y(x.size());
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = b0 * x[i] + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x[i];
    y2 = y1;
    y1 = v;
    y[i] = v;
  }
  return y;
}

double SegmentalSnrDb(std::span<const double> reference,
                      std::span<const double> test, std::size_t frame_len,
                      double silence_floor) {
  const std::size_t n = std::min(reference.size(), test.size());
  double total = 0.0;
  std::size_t frames = 0;
  for (std::size_t start = 0; start + frame_len <= n; start += frame_len) {
    double sig = 0.0, err = 0.0;
    for (std::size_t i = start; i < start + frame_len; ++i) {
      sig += reference[i] * reference[i];
      const double e = reference[i] - test[i];
      err += e * e;
    }
    if (sig / static_cast<double>(frame_len) < silence_floor) continue;
    double snr = err <= 0.0 ? 35.0 : 10.0 * std::log10(sig / err);
    total += std::clamp(snr, -10.0, 35.0);
    ++frames;
  }
  return frames == 0 ? 35.0 : total / static_cast<double>(frames);
}

double SnrDb(std::span<const double> signal, std::span<const double> noise) {
  double s = 0.0, v = 0.0;
  for (double x : signal) s += x * x;
  for (double x : noise) v += x * x;
  return 10.0 * std::log10(s / v);
}

std::size_t PeakBin(std::span<const double> x, std::size_t fft_size) {
  const std::size_t n = std::min(x.size(), fft_size);
  std::vector<double> frame(n);
  const auto w = HannPeriodic(n);
  for (std::size_t i = 0; i < n; ++i) frame[i] = x[i] * w[i];
  const auto spec = RealSpectrum(frame, fft_size);
  std::size_t best = 0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  }
  return best;
}

}  // namespace rtcdd::dsp
