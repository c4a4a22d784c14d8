#include "keyfuse/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace keyfuse::audio {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void write_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>(v >> 8 & 0xff),
      static_cast<unsigned char>(v >> 16 & 0xff), static_cast<unsigned char>(v >> 24 & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

void write_u16(std::ofstream& out, std::uint16_t v) {
  const unsigned char bytes[2] = {static_cast<unsigned char>(v & 0xff),
                                  static_cast<unsigned char>(v >> 8 & 0xff)};
  out.write(reinterpret_cast<const char*>(bytes), 2);
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wav file: " + path);

  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (data.size() < 44 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    throw std::runtime_error("not a RIFF/WAVE file: " + path);

  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const std::uint32_t chunk_len = read_u32(data.data() + pos + 4);
    if (pos + 8 + chunk_len > data.size())
      throw std::runtime_error("truncated wav chunk in " + path);
    if (std::memcmp(data.data() + pos, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw std::runtime_error("malformed fmt chunk in " + path);
      const unsigned char* fmt = data.data() + pos + 8;
      if (read_u16(fmt) != 1)  // PCM
        throw std::runtime_error("unsupported wav encoding (PCM only): " + path);
      channels = read_u16(fmt + 2);
      rate = read_u32(fmt + 4);
      bits = read_u16(fmt + 14);
    } else if (std::memcmp(data.data() + pos, "data", 4) == 0) {
      pcm = data.data() + pos + 8;
      pcm_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }

  if (pcm == nullptr || rate == 0) throw std::runtime_error("missing wav chunks in " + path);
  if (bits != 16) throw std::runtime_error("unsupported bit depth (16-bit only): " + path);
  if (channels != 1 && channels != 2)
    throw std::runtime_error("unsupported channel count: " + path);

  const std::size_t frame_bytes = 2u * channels;
  const std::size_t frames = pcm_len / frame_bytes;

  AudioClip clip;
  clip.sample_rate = static_cast<double>(rate);
  clip.samples.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const auto raw = static_cast<std::int16_t>(read_u16(pcm + f * frame_bytes + 2u * c));
      acc += static_cast<double>(raw) / 32768.0;
    }
    clip.samples.push_back(acc / channels);
  }
  return clip;
}

void write_wav(const std::string& path, const AudioClip& clip) {
  if (clip.sample_rate <= 0.0) throw std::domain_error("sample_rate must be > 0");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot create wav file: " + path);

  const auto rate = static_cast<std::uint32_t>(std::lround(clip.sample_rate));
  const auto data_len = static_cast<std::uint32_t>(clip.samples.size() * 2);

  out.write("RIFF", 4);
  write_u32(out, 36 + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, rate);
  write_u32(out, rate * 2);
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_len);

  for (double s : clip.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
    write_u16(out, static_cast<std::uint16_t>(q));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace keyfuse::audio
