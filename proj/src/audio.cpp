#include "keyfuse/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dsp.hpp"

namespace keyfuse::audio {

AudioClip bandpass(const AudioClip& clip, double low_hz, double high_hz) {
  if (clip.sample_rate <= 0.0) throw std::domain_error("sample_rate must be > 0");
  if (low_hz <= 0.0 || low_hz >= high_hz)
    throw std::domain_error("band edges must satisfy 0 < low < high");
  if (high_hz >= clip.sample_rate / 2.0)
    throw std::domain_error("band upper edge must be below Nyquist");

  const std::vector<dsp::Biquad> sections = {
      dsp::butterworth_highpass(low_hz, clip.sample_rate),
      dsp::butterworth_lowpass(high_hz, clip.sample_rate),
  };
  return {dsp::filtfilt(clip.samples, sections), clip.sample_rate};
}

EnergySeries energy_vector(const AudioClip& clip) {
  if (clip.sample_rate <= 0.0) throw std::domain_error("sample_rate must be > 0");
  const auto window_len =
      static_cast<std::size_t>(std::lround(0.002 * clip.sample_rate));
  if (window_len == 0 || clip.samples.size() < window_len)
    throw std::invalid_argument("clip shorter than one energy window");

  EnergySeries series;
  series.window_len = window_len;
  series.window_duration = static_cast<double>(window_len) / clip.sample_rate;

  const std::size_t count = clip.samples.size() / window_len;
  series.values.reserve(count);
  double peak = 0.0;
  for (std::size_t w = 0; w < count; ++w) {
    const std::span<const double> block(clip.samples.data() + w * window_len,
                                        window_len);
    const std::vector<double> mags = dsp::magnitude_spectrum(block);
    double sum = 0.0;
    for (std::size_t k = 1; k < mags.size(); ++k) sum += mags[k];  // skip DC
    series.values.push_back(sum);
    peak = std::max(peak, sum);
  }
  if (peak > 0.0)
    for (double& v : series.values) v /= peak;
  return series;
}

std::vector<KeystrokeBoundary> detect_keystrokes(const EnergySeries& energy,
                                                 const DetectorConfig& config) {
  if (config.press_threshold <= 0.0 || config.press_threshold >= 1.0)
    throw std::domain_error("press_threshold must be in (0,1)");
  if (config.release_rel_threshold <= 0.0 || config.release_rel_threshold >= 1.0)
    throw std::domain_error("release_rel_threshold must be in (0,1)");
  if (config.refractory <= 0.0) throw std::domain_error("refractory must be > 0");

  const auto& v = energy.values;
  const std::size_t refractory_windows = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.refractory / energy.window_duration)));

  // Press pass: positive deltas above threshold, with refractory suppression.
  std::vector<std::size_t> presses;
  std::size_t w = 1;
  while (w < v.size()) {
    if (v[w] - v[w - 1] > config.press_threshold) {
      presses.push_back(w);
      w += refractory_windows;
    } else {
      ++w;
    }
  }

  // Release pass: between a press and the next one, wait for the energy to
  // decay below the relative threshold, then take the first climb back above
  // it.
  std::vector<KeystrokeBoundary> out;
  out.reserve(presses.size());
  for (std::size_t i = 0; i < presses.size(); ++i) {
    const std::size_t begin = presses[i];
    const std::size_t end = (i + 1 < presses.size()) ? presses[i + 1] : v.size();

    double press_peak = 0.0;
    for (std::size_t j = begin; j < end; ++j) {
      if (j > begin && v[j] > v[j - 1] && press_peak >= v[j]) break;
      press_peak = std::max(press_peak, v[j]);
    }
    const double bar = config.release_rel_threshold * press_peak;

    KeystrokeBoundary b;
    b.press_time = energy.time_of(begin);
    bool decayed = false;
    for (std::size_t j = begin + 1; j < end; ++j) {
      if (!decayed) {
        decayed = v[j] < bar;
        continue;
      }
      if (v[j] > v[j - 1] && v[j] >= bar) {
        b.release_time = energy.time_of(j);
        break;
      }
    }
    out.push_back(b);
  }
  return out;
}

std::vector<KeystrokeSegment> split_segments(const AudioClip& clip,
                                             const std::vector<KeystrokeBoundary>& boundaries,
                                             double segment_len) {
  if (segment_len <= 0.0) throw std::domain_error("segment_len must be > 0");
  const auto len = static_cast<std::size_t>(std::lround(segment_len * clip.sample_rate));

  std::vector<KeystrokeSegment> segments;
  segments.reserve(boundaries.size());
  for (const KeystrokeBoundary& b : boundaries) {
    if (b.press_time < 0.0 || b.press_time > clip.duration())
      throw std::invalid_argument("boundary outside clip duration");
    const auto start = static_cast<std::size_t>(std::lround(b.press_time * clip.sample_rate));

    KeystrokeSegment seg;
    seg.press_time = b.press_time;
    seg.release_time = b.release_time;
    seg.clip.sample_rate = clip.sample_rate;
    seg.clip.samples.assign(len, 0.0);
    const std::size_t avail = start < clip.samples.size() ? clip.samples.size() - start : 0;
    const std::size_t n = std::min(len, avail);
    std::copy_n(clip.samples.begin() + static_cast<std::ptrdiff_t>(start), n,
                seg.clip.samples.begin());
    segments.push_back(std::move(seg));
  }
  return segments;
}

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filters, equally spaced on the mel scale from 0 to Nyquist.
std::vector<std::vector<double>> mel_filterbank(int filter_count,
                                                std::size_t spectrum_bins,
                                                double sample_rate,
                                                std::size_t fft_size) {
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(static_cast<std::size_t>(filter_count) + 2);
  for (std::size_t m = 0; m < edges.size(); ++m)
    edges[m] = mel_to_hz(mel_max * static_cast<double>(m) /
                         static_cast<double>(filter_count + 1));

  const double bin_hz = sample_rate / static_cast<double>(fft_size);
  std::vector<std::vector<double>> bank(static_cast<std::size_t>(filter_count));
  for (int f = 0; f < filter_count; ++f) {
    auto& filter = bank[static_cast<std::size_t>(f)];
    filter.assign(spectrum_bins, 0.0);
    const double lo = edges[static_cast<std::size_t>(f)];
    const double mid = edges[static_cast<std::size_t>(f) + 1];
    const double hi = edges[static_cast<std::size_t>(f) + 2];
    for (std::size_t k = 0; k < spectrum_bins; ++k) {
      const double hz = bin_hz * static_cast<double>(k);
      if (hz <= lo || hz >= hi) continue;
      filter[k] = hz <= mid ? (hz - lo) / (mid - lo) : (hi - hz) / (hi - mid);
    }
  }
  return bank;
}

constexpr double kLogFloor = 1e-30;

}  // namespace

FeatureVector mfcc(const AudioClip& clip, const MfccConfig& config) {
  if (clip.sample_rate <= 0.0) throw std::domain_error("sample_rate must be > 0");
  if (config.filter_count < 2 || config.coeff_count < 1 ||
      config.coeff_count > config.filter_count)
    throw std::domain_error("mfcc filter/coefficient counts out of range");

  const auto frame_len =
      static_cast<std::size_t>(std::lround(config.frame_duration * clip.sample_rate));
  const auto step =
      static_cast<std::size_t>(std::lround(config.frame_step * clip.sample_rate));
  if (frame_len == 0 || step == 0 || clip.samples.size() < frame_len)
    throw std::invalid_argument("segment shorter than one mfcc frame");

  const std::size_t fft_size = dsp::next_pow2(frame_len);
  const std::size_t spectrum_bins = fft_size / 2 + 1;
  const auto bank = mel_filterbank(config.filter_count, spectrum_bins,
                                   clip.sample_rate, fft_size);

  std::vector<double> hamming(frame_len);
  for (std::size_t i = 0; i < frame_len; ++i)
    hamming[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                        static_cast<double>(frame_len - 1));

  const std::size_t frame_count = (clip.samples.size() - frame_len) / step + 1;
  FeatureVector fv;
  fv.frame_count = frame_count;
  fv.coeffs_per_frame = static_cast<std::size_t>(config.coeff_count);
  fv.coefficients.reserve(frame_count * fv.coeffs_per_frame);

  std::vector<double> windowed(frame_len);
  const int m_count = config.filter_count;
  for (std::size_t f = 0; f < frame_count; ++f) {
    for (std::size_t i = 0; i < frame_len; ++i)
      windowed[i] = clip.samples[f * step + i] * hamming[i];

    const std::vector<double> mags = dsp::magnitude_spectrum(windowed);
    std::vector<double> log_energy(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
      double e = 0.0;
      const auto& filter = bank[static_cast<std::size_t>(m)];
      for (std::size_t k = 0; k < spectrum_bins; ++k)
        e += filter[k] * mags[k] * mags[k];
      log_energy[static_cast<std::size_t>(m)] = std::log(std::max(e, kLogFloor));
    }

    // Orthonormal DCT-II over the filter log-energies.
    for (int n = 0; n < config.coeff_count; ++n) {
      double c = 0.0;
      for (int m = 0; m < m_count; ++m)
        c += log_energy[static_cast<std::size_t>(m)] *
             std::cos(std::numbers::pi * static_cast<double>(n) *
                      (static_cast<double>(m) + 0.5) / static_cast<double>(m_count));
      const double scale = n == 0 ? std::sqrt(1.0 / m_count) : std::sqrt(2.0 / m_count);
      fv.coefficients.push_back(scale * c);
    }
  }
  return fv;
}

FeatureVector mfcc(const KeystrokeSegment& segment, const MfccConfig& config) {
  return mfcc(segment.clip, config);
}

std::vector<std::pair<std::size_t, double>> interkeystroke_timings(
    const std::vector<KeystrokeSegment>& segments) {
  std::vector<std::pair<std::size_t, double>> timings;
  if (segments.size() < 2) return timings;
  timings.reserve(segments.size() - 1);
  for (std::size_t i = 0; i + 1 < segments.size(); ++i)
    timings.emplace_back(i, segments[i + 1].press_time - segments[i].press_time);
  return timings;
}

}  // namespace keyfuse::audio
