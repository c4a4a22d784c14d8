#pragma once

// Acoustic keystroke pipeline: band-pass cleanup, windowed energy,
// press/release detection, fixed-length segment extraction, MFCC features
// and inter-keystroke timings.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace keyfuse::audio {

struct AudioClip {
  std::vector<double> samples;
  double sample_rate = 44100.0;  // Hz

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

struct EnergySeries {
  std::vector<double> values;  // normalized to [0,1], max = 1 unless all-zero
  std::size_t window_len = 0;  // samples per window (~2 ms)
  double window_duration = 0.0;  // s

  double time_of(std::size_t window_index) const {
    return static_cast<double>(window_index) * window_duration;
  }
};

struct KeystrokeBoundary {
  double press_time = 0.0;  // s
  std::optional<double> release_time;
};

struct KeystrokeSegment {
  double press_time = 0.0;
  std::optional<double> release_time;
  AudioClip clip;  // fixed-length slice starting at the press
};

struct FeatureVector {
  std::vector<double> coefficients;  // frames x coeffs, time-major
  std::size_t frame_count = 0;
  std::size_t coeffs_per_frame = 0;
};

struct DetectorConfig {
  double press_threshold = 0.15;       // positive energy delta declaring a press
  double refractory = 0.125;           // s of suppression after a press
  double release_rel_threshold = 0.3;  // fraction of the press peak
};

struct MfccConfig {
  double frame_duration = 0.010;  // s
  double frame_step = 0.0025;     // s
  int filter_count = 32;          // mel filterbank size
  int coeff_count = 32;           // DCT coefficients kept per frame
};

// 400 Hz - 12 kHz Butterworth band-pass (high-pass + low-pass biquads in
// cascade), applied forward-backward so press times are not shifted.
// Throws std::domain_error unless 0 < low < high < sample_rate / 2.
AudioClip bandpass(const AudioClip& clip, double low_hz = 400.0,
                   double high_hz = 12000.0);

// Per-window (~2 ms, round(0.002 * rate) samples) sum of one-sided FFT
// magnitudes excluding the DC bin, normalized so the maximum is 1.
// Throws std::invalid_argument when the clip is shorter than one window.
EnergySeries energy_vector(const AudioClip& clip);

// A press is declared where the positive delta between successive windows
// exceeds press_threshold; detection then sleeps for the refractory
// interval. A release is the next energy increase after a press that climbs
// back above release_rel_threshold times that press's peak.
std::vector<KeystrokeBoundary> detect_keystrokes(const EnergySeries& energy,
                                                 const DetectorConfig& config = {});

// Fixed-length clips starting at each press time, zero-padded at clip end.
std::vector<KeystrokeSegment> split_segments(const AudioClip& clip,
                                             const std::vector<KeystrokeBoundary>& boundaries,
                                             double segment_len = 0.1);

// MFCC over 10 ms frames with 2.5 ms step: Hamming window, power spectrum,
// 32 triangular mel filters up to Nyquist, log energies, DCT-II; frames are
// concatenated in time order. Throws std::invalid_argument when the segment
// is shorter than one frame.
FeatureVector mfcc(const KeystrokeSegment& segment, const MfccConfig& config = {});
FeatureVector mfcc(const AudioClip& clip, const MfccConfig& config = {});

// (pair index, press_time[i+1] - press_time[i]) for consecutive segments;
// empty when fewer than two segments.
std::vector<std::pair<std::size_t, double>> interkeystroke_timings(
    const std::vector<KeystrokeSegment>& segments);

}  // namespace keyfuse::audio
