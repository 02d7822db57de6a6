#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sinest {

/// Linear chirp. The instantaneous frequency moves linearly from
/// theta_start at sample 0 to theta_end at the last sample.
struct ChirpSpec {
  double theta_start = 0.0;  // rad/sample
  double theta_end = 0.0;    // rad/sample
  double amplitude_db = 0.0;  // relative to 1.0
  double phase0 = 0.0;

  double amplitude() const noexcept;
};

/// Five chirps 0.05..0.25 -> 2.0..2.8 rad/sample at 0, -3, -6, -9, -12 dB.
std::vector<ChirpSpec> five_chirp_preset();

inline constexpr std::size_t kDefaultChirpLength = 16384;

/// Per-chirp phase is the running (left Riemann) sum of the per-sample
/// instantaneous frequency, so phase[i+1] - phase[i] equals the frequency at
/// sample i. Throws invalid-argument if a frequency leaves (0, pi).
std::vector<double> gen_chirp_mix(std::span<const ChirpSpec> specs, std::size_t total_length);

/// Phase track of one chirp (before the cosine).
std::vector<double> chirp_phase(const ChirpSpec& spec, std::size_t total_length);

/// Linear law at an integer sample index. Throws invalid-argument out of range.
double true_frequency_at(const ChirpSpec& spec, std::size_t total_length,
                         std::size_t sample_index);

/// Linear law at a fractional time.
double frequency_law(const ChirpSpec& spec, std::size_t total_length, double t) noexcept;

/// Phase derivative of the generated chirp at fractional time t. With a
/// left-Riemann phase track the derivative at t equals the law at t - 1/2.
double instantaneous_frequency(const ChirpSpec& spec, std::size_t total_length,
                               double t) noexcept;

/// Adds zero-mean white Gaussian noise at the requested SNR (in dB, signal
/// power over noise power). An infinite SNR returns the input unchanged.
std::vector<double> add_awgn(std::span<const double> signal, double snr_db, std::uint64_t seed);

struct FramePlan {
  std::size_t frame_length = 256;
  std::size_t hop = 192;

  void validate() const;
};

struct Frame {
  std::size_t start = 0;
  std::vector<double> samples;
};

/// Frames at 0, hop, 2 hop, ...; a trailing partial frame is dropped.
std::vector<Frame> frame_stream(std::span<const double> signal, const FramePlan& plan);

/// Number of whole frames frame_stream would produce.
std::size_t frame_count(std::size_t signal_length, const FramePlan& plan);

double signal_power(std::span<const double> x) noexcept;

}  // namespace sinest
