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

#ifndef RTCDD_DSP_H_
#define RTCDD_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rtcdd::dsp {

std::size_t NextPow2(std::size_t n);

// In-place iterative radix-2 FFT; size must be a power of two. The inverse
// transform includes the 1/N factor.
void Fft(std::vector<std::complex<double>>& x, bool inverse = false);

// Spectrum of a real frame zero-padded to `fft_size`; returns bins 0..N/2.
std::vector<std::complex<double>> RealSpectrum(std::span<const double> frame,
                                               std::size_t fft_size);

// Periodic Hann: w[n] = 0.5 - 0.5 cos(2 pi n / len). Sums to exactly 1 at
// 50% overlap.
std::vector<double> HannPeriodic(std::size_t len);

// Linear-phase windowed-sinc low-pass (Blackman), odd length `taps`.
std::vector<double> LowPassFir(double cutoff_hz, int sample_rate_hz, int taps);

// Convolution centered on the middle tap: output has the input's length and
// no group delay.
std::vector<double> FilterCentered(std::span<const double> x,
                                   std::span<const double> taps);

// Causal FIR, output length equals input length.
std::vector<double> FilterCausal(std::span<const double> x,
                                 std::span<const double> taps);

// Biquad band-pass (RBJ cookbook, constant 0 dB peak gain).
std::vector<double> BandPass(std::span<const double> x, double center_hz,
                             double q, int sample_rate_hz);

// Mean per-frame SNR in dB of `test` against `reference`, each frame clamped
// to [-10, 35] dB. Frames whose reference energy is below `silence_floor`
// (mean square) are skipped; returns 35 when every frame is skipped.
double SegmentalSnrDb(std::span<const double> reference,
                      std::span<const double> test, std::size_t frame_len = 320,
                      double silence_floor = 1e-8);

// Plain (global) SNR in dB: 10 log10(sum s^2 / sum n^2).
double SnrDb(std::span<const double> signal, std::span<const double> noise);

// Index of the largest-magnitude FFT bin of a Hann-windowed frame.
std::size_t PeakBin(std::span<const double> x, std::size_t fft_size);

}  // namespace rtcdd::dsp

#endif  // RTCDD_DSP_H_
