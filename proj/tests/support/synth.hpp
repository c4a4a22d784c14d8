#pragma once

// Synthetic keystroke audio for the tests: every key gets a distinct
// three-tone spectral signature inside the 400 Hz - 12 kHz analysis band,
// shaped by a fast exponential decay, so detection and classification have
// real structure to latch on to without any recorded data.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "keyfuse/audio.hpp"
#include "keyfuse/keys.hpp"

namespace synth {

struct KeyTones {
  double f1, f2, f3;
};

// Signature tones for a key, spread by alphabet index; all stay inside the
// band for every index 0..45.
inline KeyTones tones_of(keyfuse::Key key) {
  const auto i = static_cast<double>(keyfuse::alphabet_index(key));
  return {800.0 + 150.0 * i, (800.0 + 150.0 * i) * 1.37, 520.0 + 90.0 * i};
}

// One keystroke: tone mix with a sharp attack, ~12 ms decay, ~80 ms long,
// with small per-instance amplitude jitter so samples of a class differ.
inline std::vector<double> key_wave(keyfuse::Key key, double sample_rate,
                                    std::mt19937_64& rng) {
  const KeyTones tones = tones_of(key);
  std::uniform_real_distribution<double> jitter(0.8, 1.2);
  const double a1 = 1.0 * jitter(rng);
  const double a2 = 0.6 * jitter(rng);
  const double a3 = 0.4 * jitter(rng);

  const auto len = static_cast<std::size_t>(0.08 * sample_rate);
  std::vector<double> wave(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double envelope = std::exp(-t / 0.012) * (t < 0.002 ? t / 0.002 : 1.0);
    wave[i] = envelope * (a1 * std::sin(2.0 * std::numbers::pi * tones.f1 * t) +
                          a2 * std::sin(2.0 * std::numbers::pi * tones.f2 * t) +
                          a3 * std::sin(2.0 * std::numbers::pi * tones.f3 * t));
  }
  return wave;
}

// In-stroke RMS of the clean track (silence excluded), the reference level
// for the SNR definition below.
inline double stroke_rms(const std::vector<double>& signal) {
  double power = 0.0;
  std::size_t support = 0;
  for (double s : signal)
    if (s != 0.0) {
      power += s * s;
      ++support;
    }
  return support == 0 ? 0.0 : std::sqrt(power / static_cast<double>(support));
}

// Renders a typed password: keystrokes at the given press times plus white
// noise sized so that in-stroke RMS / noise RMS = 10^(snr_db/20).
inline keyfuse::audio::AudioClip render_password(const std::string& password,
                                                 const std::vector<double>& press_times,
                                                 double sample_rate, double snr_db,
                                                 std::mt19937_64& rng,
                                                 double tail = 0.3) {
  const double end = (press_times.empty() ? 0.0 : press_times.back()) + tail;
  keyfuse::audio::AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.assign(static_cast<std::size_t>(end * sample_rate), 0.0);

  for (std::size_t k = 0; k < password.size(); ++k) {
    const auto start = static_cast<std::size_t>(press_times[k] * sample_rate);
    const std::vector<double> wave = key_wave(password[k], sample_rate, rng);
    for (std::size_t i = 0; i < wave.size() && start + i < clip.samples.size(); ++i)
      clip.samples[start + i] += wave[i];
  }

  const double sigma = stroke_rms(clip.samples) * std::pow(10.0, -snr_db / 20.0);
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& s : clip.samples) s += noise(rng);
  }
  return clip;
}

// A single isolated keystroke clip (for corpus building), 100 ms long.
inline keyfuse::audio::AudioClip key_clip(keyfuse::Key key, double sample_rate,
                                          double snr_db, std::mt19937_64& rng,
                                          double length = 0.1) {
  keyfuse::audio::AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.assign(static_cast<std::size_t>(length * sample_rate), 0.0);
  const std::vector<double> wave = key_wave(key, sample_rate, rng);
  for (std::size_t i = 0; i < wave.size() && i < clip.samples.size(); ++i)
    clip.samples[i] = wave[i];
  const double sigma = stroke_rms(clip.samples) * std::pow(10.0, -snr_db / 20.0);
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& s : clip.samples) s += noise(rng);
  return clip;
}

}  // namespace synth
