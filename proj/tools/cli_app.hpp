#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sinest/model.hpp"

namespace sinest::cli {

/// Exit codes: 0 success, 1 runtime failure, 2 usage or I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct TrackRow {
  std::size_t frame_start = 0;
  SinusoidState state;
  double residual_rms = 0.0;
};

struct TrackFile {
  std::uint32_t sample_rate = 16000;
  std::size_t length = 0;
  std::size_t frame_length = 256;
  std::size_t hop = 192;
  ModelOrder order = ModelOrder::first;
  std::vector<TrackRow> rows;
};

void write_tracks(std::ostream& os, const TrackFile& tracks);
/// Throws parse-error naming the offending line.
TrackFile read_tracks(std::istream& is);

/// Overlap-add of the per-frame windowed resynthesis, windowed again and
/// normalised by the summed squared window.
std::vector<double> synthesize_tracks(const TrackFile& tracks);

}  // namespace sinest::cli
