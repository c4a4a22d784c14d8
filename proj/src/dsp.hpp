#pragma once

// Small internal DSP kernels shared by the audio pipeline: an iterative
// radix-2 FFT over zero-padded buffers and Butterworth biquad sections with
// forward-backward application.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace keyfuse::dsp {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative Cooley-Tukey; size must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Magnitude spectrum of a real block, zero-padded to the next power of two.
// Returns bins 0..N/2 inclusive (one-sided).
inline std::vector<double> magnitude_spectrum(std::span<const double> block) {
  const std::size_t n = next_pow2(std::max<std::size_t>(block.size(), 2));
  std::vector<std::complex<double>> buf(n, {0.0, 0.0});
  for (std::size_t i = 0; i < block.size(); ++i) buf[i] = {block[i], 0.0};
  fft_inplace(buf);
  std::vector<double> mags(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) mags[k] = std::abs(buf[k]);
  return mags;
}

// One second-order section, transposed direct form II.
struct Biquad {
  double b0, b1, b2, a1, a2;

  void process(std::span<const double> in, std::vector<double>& out) const {
    out.resize(in.size());
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double x = in[i];
      const double y = b0 * x + s1;
      s1 = b1 * x - a1 * y + s2;
      s2 = b2 * x - a2 * y;
      out[i] = y;
    }
  }
};

// Butterworth (Q = 1/sqrt(2)) sections via the bilinear transform.
inline Biquad butterworth_lowpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / std::numbers::sqrt2;
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 - cw) / 2.0 / a0, (1.0 - cw) / a0, (1.0 - cw) / 2.0 / a0,
          -2.0 * cw / a0, (1.0 - alpha) / a0};
}

inline Biquad butterworth_highpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / std::numbers::sqrt2;
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 + cw) / 2.0 / a0, -(1.0 + cw) / a0, (1.0 + cw) / 2.0 / a0,
          -2.0 * cw / a0, (1.0 - alpha) / a0};
}

// Zero-phase filtering: run the cascade forward, reverse, run again, reverse.
inline std::vector<double> filtfilt(std::span<const double> in,
                                    const std::vector<Biquad>& sections) {
  std::vector<double> work(in.begin(), in.end());
  std::vector<double> tmp;
  for (int pass = 0; pass < 2; ++pass) {
    for (const Biquad& s : sections) {
      s.process(work, tmp);
      work.swap(tmp);
    }
    std::reverse(work.begin(), work.end());
  }
  return work;
}

}  // namespace keyfuse::dsp
