#pragma once

#include <string>

#include "keyfuse/audio.hpp"

namespace keyfuse::audio {

// 16-bit PCM only. Stereo input is down-mixed by averaging the channels.
// Throws std::runtime_error on missing files or malformed headers.
AudioClip read_wav(const std::string& path);

// Mono 16-bit PCM; samples are clamped to [-1, 1] before quantisation.
void write_wav(const std::string& path, const AudioClip& clip);

}  // namespace keyfuse::audio
