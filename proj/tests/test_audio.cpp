#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "keyfuse/audio.hpp"
#include "keyfuse/wav.hpp"
#include "support/synth.hpp"

using namespace keyfuse;
using namespace keyfuse::audio;

namespace {

AudioClip tone(double freq, double rate, double seconds, double amplitude = 1.0) {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    clip.samples[i] =
        amplitude * std::sin(2.0 * std::numbers::pi * freq * double(i) / rate);
  return clip;
}

// RMS over the middle half, clear of filter edge transients.
double mid_rms(const AudioClip& clip) {
  const std::size_t begin = clip.samples.size() / 4;
  const std::size_t end = 3 * clip.samples.size() / 4;
  double power = 0.0;
  for (std::size_t i = begin; i < end; ++i) power += clip.samples[i] * clip.samples[i];
  return std::sqrt(power / double(end - begin));
}

double gain_db(const AudioClip& in, const AudioClip& out) {
  return 20.0 * std::log10(mid_rms(out) / mid_rms(in));
}

}  // namespace

TEST_CASE("band-pass keeps in-band tones and crushes out-of-band ones") {
  // 5 kHz sits mid-band: within 1 dB.
  const AudioClip mid = tone(5000.0, 44100.0, 1.0);
  CHECK(std::abs(gain_db(mid, bandpass(mid))) < 1.0);

  // 50 Hz is deep in the stop band.
  const AudioClip hum = tone(50.0, 44100.0, 1.0);
  CHECK(gain_db(hum, bandpass(hum)) < -24.0);

  // One octave below the low edge.
  const AudioClip low = tone(200.0, 44100.0, 1.0);
  CHECK(gain_db(low, bandpass(low)) < -24.0);

  // One octave above the high edge needs a rate where 24 kHz is representable.
  const AudioClip high = tone(24000.0, 96000.0, 1.0);
  CHECK(gain_db(high, bandpass(high)) < -24.0);
}

TEST_CASE("band-pass is zero-input stable and idempotent in-band") {
  AudioClip silence;
  silence.sample_rate = 44100.0;
  silence.samples.assign(4410, 0.0);
  const AudioClip out = bandpass(silence);
  for (double s : out.samples) CHECK(s == 0.0);

  // Already band-limited signal: filtering twice changes level < 1 dB.
  const AudioClip mid = tone(5000.0, 44100.0, 1.0);
  const AudioClip once = bandpass(mid);
  const AudioClip twice = bandpass(once);
  CHECK(std::abs(gain_db(once, twice)) < 1.0);
}

TEST_CASE("band-pass rejects invalid edges") {
  const AudioClip clip = tone(1000.0, 44100.0, 0.1);
  CHECK_THROWS_AS(bandpass(clip, 400.0, 44100.0 / 2.0), std::domain_error);
  CHECK_THROWS_AS(bandpass(clip, 400.0, 30000.0), std::domain_error);
  CHECK_THROWS_AS(bandpass(clip, 0.0, 12000.0), std::domain_error);
  CHECK_THROWS_AS(bandpass(clip, 12000.0, 400.0), std::domain_error);
}

TEST_CASE("energy windows are 2 ms and sum FFT magnitudes without DC") {
  // 8-sample windows at 4 kHz; cross-check both windows with a naive DFT.
  AudioClip clip;
  clip.sample_rate = 4000.0;
  clip.samples = {0.1, -0.4, 0.9,  0.3, -0.2, 0.6, -0.8, 0.5,
                  0.3, 0.1,  -0.5, 0.7, 0.2,  0.1, 0.4,  -0.1};
  const EnergySeries series = energy_vector(clip);
  CHECK(series.window_len == 8);
  CHECK(series.window_duration == doctest::Approx(0.002));
  REQUIRE(series.values.size() == 2);

  const auto naive_sum = [&clip](std::size_t first) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= 4; ++k) {  // one-sided bins of an 8-point DFT
      std::complex<double> acc(0.0, 0.0);
      for (std::size_t n = 0; n < 8; ++n)
        acc += clip.samples[first + n] *
               std::exp(std::complex<double>(
                   0.0, -2.0 * std::numbers::pi * double(k) * double(n) / 8.0));
      sum += std::abs(acc);
    }
    return sum;
  };
  const double n0 = naive_sum(0);
  const double n1 = naive_sum(8);
  const double peak = std::max(n0, n1);
  CHECK(series.values[0] == doctest::Approx(n0 / peak).epsilon(1e-9));
  CHECK(series.values[1] == doctest::Approx(n1 / peak).epsilon(1e-9));

  // A silent second window normalizes to exactly [1, 0].
  AudioClip padded = clip;
  for (std::size_t i = 8; i < 16; ++i) padded.samples[i] = 0.0;
  const EnergySeries two = energy_vector(padded);
  CHECK(two.values[0] == doctest::Approx(1.0));
  CHECK(two.values[1] == doctest::Approx(0.0));
}

TEST_CASE("silence yields an all-zero energy series") {
  AudioClip clip;
  clip.sample_rate = 44100.0;
  clip.samples.assign(8820, 0.0);
  for (double v : energy_vector(clip).values) CHECK(v == 0.0);
}

TEST_CASE("energy series is invariant to amplitude scaling") {
  std::mt19937_64 rng(3);
  AudioClip clip = synth::render_password("abc", {0.1, 0.4, 0.7}, 44100.0, 30.0, rng);
  AudioClip scaled = clip;
  for (double& s : scaled.samples) s *= 7.3;
  const auto a = energy_vector(clip);
  const auto b = energy_vector(scaled);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("a lone click lands in the argmax energy window") {
  AudioClip clip;
  clip.sample_rate = 44100.0;
  clip.samples.assign(44100, 0.0);
  const auto at = static_cast<std::size_t>(0.5 * clip.sample_rate);
  for (std::size_t i = 0; i < 40; ++i) clip.samples[at + i] = (i % 2 ? -0.9 : 0.9);

  const EnergySeries series = energy_vector(clip);
  const std::size_t argmax =
      std::max_element(series.values.begin(), series.values.end()) -
      series.values.begin();
  CHECK(series.time_of(argmax) <= 0.5);
  CHECK(series.time_of(argmax) + series.window_duration > 0.5);
}

TEST_CASE("energy series requires at least one window") {
  AudioClip clip;
  clip.sample_rate = 44100.0;
  clip.samples.assign(10, 0.1);  // < 88 samples
  CHECK_THROWS_AS(energy_vector(clip), std::invalid_argument);
}

TEST_CASE("two clicks produce two presses at the right times") {
  AudioClip clip;
  clip.sample_rate = 44100.0;
  clip.samples.assign(44100, 0.0);
  for (double t0 : {0.5, 0.8}) {  // window-aligned onsets, 0.3 s apart
    const auto at = static_cast<std::size_t>(t0 * clip.sample_rate);
    for (std::size_t i = 0; i < 200; ++i)
      clip.samples[at + i] = 0.9 * std::sin(2.0 * std::numbers::pi * 3000.0 *
                                            double(i) / clip.sample_rate);
  }
  const auto boundaries = detect_keystrokes(energy_vector(clip));
  REQUIRE(boundaries.size() == 2);
  CHECK(std::abs(boundaries[0].press_time - 0.5) <= 0.002);
  CHECK(std::abs(boundaries[1].press_time - 0.8) <= 0.002);
}

TEST_CASE("refractory interval suppresses a second nearby click") {
  AudioClip clip;
  clip.sample_rate = 44100.0;
  clip.samples.assign(44100, 0.0);
  for (double t0 : {0.5, 0.55}) {  // 50 ms apart, within the 125 ms refractory
    const auto at = static_cast<std::size_t>(t0 * clip.sample_rate);
    for (std::size_t i = 0; i < 200; ++i)
      clip.samples[at + i] = 0.9 * std::sin(2.0 * std::numbers::pi * 3000.0 *
                                            double(i) / clip.sample_rate);
  }
  CHECK(detect_keystrokes(energy_vector(clip)).size() == 1);
}

TEST_CASE("detected presses are never closer than the refractory interval") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_real_distribution<double> gap(0.02, 0.3);
    std::vector<double> times{0.1};
    while (times.back() < 1.5) times.push_back(times.back() + gap(rng));
    times.pop_back();
    const std::string password(times.size(), 'k');
    const AudioClip clip = synth::render_password(password, times, 44100.0, 25.0, rng);
    const DetectorConfig config;
    const auto boundaries = detect_keystrokes(energy_vector(bandpass(clip)), config);
    for (std::size_t i = 1; i < boundaries.size(); ++i)
      CHECK(boundaries[i].press_time - boundaries[i - 1].press_time >=
            config.refractory - 1e-9);
  }
}

TEST_CASE("detection on empty energy and silence") {
  AudioClip clip;
  clip.sample_rate = 44100.0;
  clip.samples.assign(8820, 0.0);
  CHECK(detect_keystrokes(energy_vector(clip)).empty());
}

TEST_CASE("keystroke count equals password length on noisy synthetic entries") {
  // The channel's length leak: across seeds, band-passed detection finds
  // exactly one press per typed key at a 20 dB in-stroke SNR.
  int exact = 0;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const std::string password = "spill.20";
    std::vector<double> times;
    for (std::size_t i = 0; i < password.size(); ++i)
      times.push_back(0.2 + 0.22 * double(i));
    const AudioClip clip = synth::render_password(password, times, 44100.0, 20.0, rng);
    const auto boundaries = detect_keystrokes(energy_vector(bandpass(clip)));
    if (boundaries.size() == password.size()) ++exact;
  }
  CHECK(exact >= 19);
}

TEST_CASE("release is the re-increase after decay below the relative bar") {
  EnergySeries series;
  series.window_len = 88;
  series.window_duration = 0.002;
  series.values = {0.0, 1.0, 0.5, 0.2, 0.05, 0.05, 0.4, 0.1, 0.0, 0.0};
  const auto boundaries = detect_keystrokes(series, {});
  REQUIRE(boundaries.size() == 1);
  CHECK(boundaries[0].press_time == doctest::Approx(0.002));
  REQUIRE(boundaries[0].release_time.has_value());
  CHECK(*boundaries[0].release_time == doctest::Approx(0.012));
  CHECK(*boundaries[0].release_time > boundaries[0].press_time);
}

TEST_CASE("release stays absent when the energy never returns") {
  EnergySeries series;
  series.window_len = 88;
  series.window_duration = 0.002;
  series.values = {0.0, 1.0, 0.5, 0.2, 0.05, 0.04, 0.03, 0.02};
  const auto boundaries = detect_keystrokes(series, {});
  REQUIRE(boundaries.size() == 1);
  CHECK_FALSE(boundaries[0].release_time.has_value());
}

TEST_CASE("detector validates its thresholds") {
  EnergySeries series;
  series.window_len = 88;
  series.window_duration = 0.002;
  series.values = {0.0, 1.0};
  DetectorConfig config;
  config.press_threshold = 0.0;
  CHECK_THROWS_AS(detect_keystrokes(series, config), std::domain_error);
  config = {};
  config.release_rel_threshold = 1.0;
  CHECK_THROWS_AS(detect_keystrokes(series, config), std::domain_error);
  config = {};
  config.refractory = 0.0;
  CHECK_THROWS_AS(detect_keystrokes(series, config), std::domain_error);
}

TEST_CASE("segments are fixed length, zero-padded at the clip end") {
  std::mt19937_64 rng(5);
  const AudioClip clip = synth::render_password("ab", {0.1, 0.35}, 44100.0, 30.0, rng);
  const std::vector<KeystrokeBoundary> boundaries = {
      {0.1, std::nullopt}, {0.35, 0.42}, {clip.duration() - 0.01, std::nullopt}};
  const auto segments = split_segments(clip, boundaries, 0.1);
  REQUIRE(segments.size() == 3);
  const std::size_t want = static_cast<std::size_t>(0.1 * 44100.0 + 0.5);
  for (const auto& s : segments) CHECK(s.clip.samples.size() == want);
  CHECK(segments[1].release_time == 0.42);

  // The last boundary had only 10 ms of audio left: the rest must be zeros.
  const auto& tail = segments[2].clip.samples;
  for (std::size_t i = want / 2; i < want; ++i) CHECK(tail[i] == 0.0);

  CHECK(split_segments(clip, {}, 0.1).empty());
  CHECK_THROWS_AS(split_segments(clip, {{clip.duration() + 1.0, std::nullopt}}, 0.1),
                  std::invalid_argument);
}

TEST_CASE("mfcc frame arithmetic matches the 10 ms / 2.5 ms configuration") {
  AudioClip clip;
  clip.sample_rate = 44100.0;
  clip.samples.assign(4410, 0.01);  // 100 ms
  const FeatureVector fv = mfcc(clip);
  CHECK(fv.frame_count == 37);  // (100 - 10) / 2.5 + 1
  CHECK(fv.coeffs_per_frame == 32);
  CHECK(fv.coefficients.size() == 37 * 32);

  AudioClip half;
  half.sample_rate = 16000.0;
  half.samples.assign(800, 0.01);  // 50 ms at 16 kHz
  const FeatureVector fv16 = mfcc(half);
  CHECK(fv16.frame_count == 17);  // (800 - 160) / 40 + 1
}

TEST_CASE("amplitude scaling moves only the zeroth coefficient") {
  std::mt19937_64 rng(17);
  const AudioClip clip = synth::key_clip('m', 44100.0, 35.0, rng);
  AudioClip scaled = clip;
  for (double& s : scaled.samples) s *= 10.0;

  const FeatureVector a = mfcc(clip);
  const FeatureVector b = mfcc(scaled);
  REQUIRE(a.coefficients.size() == b.coefficients.size());
  for (std::size_t f = 0; f < a.frame_count; ++f) {
    const std::size_t base = f * a.coeffs_per_frame;
    CHECK(std::abs(a.coefficients[base] - b.coefficients[base]) > 1e-3);
    for (std::size_t c = 1; c < a.coeffs_per_frame; ++c)
      CHECK(std::abs(a.coefficients[base + c] - b.coefficients[base + c]) < 1e-6);
  }
}

TEST_CASE("mfcc is deterministic and validates its input") {
  std::mt19937_64 rng(23);
  const AudioClip clip = synth::key_clip('f', 44100.0, 30.0, rng);
  const FeatureVector a = mfcc(clip);
  const FeatureVector b = mfcc(clip);
  CHECK(a.coefficients == b.coefficients);

  AudioClip tiny;
  tiny.sample_rate = 44100.0;
  tiny.samples.assign(100, 0.1);  // < one 10 ms frame
  CHECK_THROWS_AS(mfcc(tiny), std::invalid_argument);
}

TEST_CASE("interkeystroke timings are consecutive press deltas") {
  std::vector<KeystrokeSegment> segments(3);
  segments[0].press_time = 0.0;
  segments[1].press_time = 0.15;
  segments[2].press_time = 0.40;
  const auto timings = interkeystroke_timings(segments);
  REQUIRE(timings.size() == 2);
  CHECK(timings[0].first == 0);
  CHECK(timings[0].second == doctest::Approx(0.15));
  CHECK(timings[1].first == 1);
  CHECK(timings[1].second == doctest::Approx(0.25));

  CHECK(interkeystroke_timings({segments[0]}).empty());
  CHECK(interkeystroke_timings({}).empty());
}

TEST_CASE("wav files round-trip within quantization error") {
  std::mt19937_64 rng(29);
  const AudioClip clip = synth::key_clip('q', 44100.0, 30.0, rng);
  const auto path = (std::filesystem::temp_directory_path() / "kf_roundtrip.wav").string();
  write_wav(path, clip);
  const AudioClip back = read_wav(path);
  CHECK(back.sample_rate == clip.sample_rate);
  REQUIRE(back.samples.size() == clip.samples.size());
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const double expect =
        double(std::lround(std::clamp(clip.samples[i], -1.0, 1.0) * 32767.0)) /
        32768.0;
    CHECK(back.samples[i] == doctest::Approx(expect).epsilon(1e-12));
  }
  std::filesystem::remove(path);
}

TEST_CASE("stereo wav input is down-mixed by averaging") {
  // Hand-build a 2-channel, 2-frame PCM file: L = 8000/-8000, R = 4000/4000.
  const auto path = (std::filesystem::temp_directory_path() / "kf_stereo.wav").string();
  std::ofstream out(path, std::ios::binary);
  const auto u16 = [&out](std::uint16_t v) {
    out.put(char(v & 0xff));
    out.put(char(v >> 8));
  };
  const auto u32 = [&out](std::uint32_t v) {
    out.put(char(v & 0xff));
    out.put(char(v >> 8 & 0xff));
    out.put(char(v >> 16 & 0xff));
    out.put(char(v >> 24 & 0xff));
  };
  out.write("RIFF", 4);
  u32(36 + 8);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(1);
  u16(2);          // stereo
  u32(8000);       // rate
  u32(8000 * 4);   // byte rate
  u16(4);          // block align
  u16(16);         // bits
  out.write("data", 4);
  u32(8);
  u16(8000);
  u16(4000);
  u16(std::uint16_t(-8000));
  u16(4000);
  out.close();

  const AudioClip clip = read_wav(path);
  CHECK(clip.sample_rate == 8000.0);
  REQUIRE(clip.samples.size() == 2);
  CHECK(clip.samples[0] == doctest::Approx((8000.0 + 4000.0) / 2.0 / 32768.0));
  CHECK(clip.samples[1] == doctest::Approx((-8000.0 + 4000.0) / 2.0 / 32768.0));
  std::filesystem::remove(path);
}

TEST_CASE("corrupt wav headers are rejected") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bad = (dir / "kf_bad.wav").string();
  std::ofstream(bad) << "this is not audio";
  CHECK_THROWS_AS(read_wav(bad), std::runtime_error);
  std::filesystem::remove(bad);
  CHECK_THROWS_AS(read_wav((dir / "kf_missing.wav").string()), std::runtime_error);
}
