#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace sinest {

struct AudioBuffer {
  std::vector<double> samples;  // [-1, 1)
  std::uint32_t sample_rate = 16000;
};

/// RIFF/WAVE, 16-bit PCM. Stereo and wider files are averaged down to mono.
/// Chunks other than "fmt " and "data" are skipped.
AudioBuffer read_wav(const std::filesystem::path& path);

/// Mono 16-bit PCM; samples are rounded and saturated.
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

}  // namespace sinest
