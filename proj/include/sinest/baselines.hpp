#pragma once

// Seed frequencies from DFT peaks, and the matching-pursuits baseline.

#include <cstddef>
#include <span>
#include <vector>

#include "sinest/model.hpp"
#include "sinest/op_counter.hpp"

namespace sinest {

struct PeakPickConfig {
  std::size_t max_peaks = 20;
  std::size_t min_separation = 2;  // bins

  void validate() const;
};

/// Local maxima of |DFT(x_h)| over bins 1..L/2-1, taken greedily by
/// magnitude while suppressing bins closer than min_separation to an accepted
/// peak. Returns up to max_peaks frequencies 2 pi b / L in ascending order.
std::vector<double> dft_peak_pick(std::span<const double> x_h, const PeakPickConfig& config);

struct MpConfig {
  /// Dictionary step is 2 pi / (L P): pi/8192 at L = 256, P = 64.
  std::size_t oversampling = 64;
  std::size_t max_atoms = 20;
  /// With seeds, only consider dictionary entries within one DFT bin of a seed.
  bool clamp_to_seeds = true;
  /// Use exactly the seed frequencies as the dictionary.
  bool seeds_only = false;

  void validate() const;
};

struct MpResult {
  /// One entry per distinct dictionary frequency, in order of first selection.
  std::vector<SinusoidState> atoms;
  std::vector<double> residual;
  /// Residual energy before the first step and after each step.
  std::vector<double> residual_energy;
  OpCounter ops;
};

/// Greedy extraction over windowed, non-modulated cos/sin pairs. Each step
/// picks the frequency whose (cos, sin) projection captures the most residual
/// energy and subtracts that projection.
MpResult matching_pursuit(std::span<const double> x_h, std::span<const double> seeds,
                          const Window& window, const MpConfig& config,
                          bool count_ops = false);

/// Frequency grid the pursuit searches, after seed constraints.
std::vector<double> mp_dictionary(std::size_t frame_length, std::span<const double> seeds,
                                  const MpConfig& config);

}  // namespace sinest
