#include "sinest/signals.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sinest/error.hpp"
#include "sinest/model.hpp"

namespace sinest {

double ChirpSpec::amplitude() const noexcept { return std::pow(10.0, amplitude_db / 20.0); }

std::vector<ChirpSpec> five_chirp_preset() {
  return {
      {0.05, 2.0, 0.0, 0.0},   {0.10, 2.2, -3.0, 0.0}, {0.15, 2.4, -6.0, 0.0},
      {0.20, 2.6, -9.0, 0.0},  {0.25, 2.8, -12.0, 0.0},
  };
}

double frequency_law(const ChirpSpec& spec, std::size_t total_length, double t) noexcept {
  if (total_length < 2) return spec.theta_start;
  const double frac = t / static_cast<double>(total_length - 1);
  return spec.theta_start + (spec.theta_end - spec.theta_start) * frac;
}

double true_frequency_at(const ChirpSpec& spec, std::size_t total_length,
                         std::size_t sample_index) {
  if (sample_index >= total_length) {
    throw Error(ErrorKind::invalid_argument,
                "sample index " + std::to_string(sample_index) + " outside signal of length " +
                    std::to_string(total_length));
  }
  if (sample_index + 1 == total_length) return spec.theta_end;
  return frequency_law(spec, total_length, static_cast<double>(sample_index));
}

double instantaneous_frequency(const ChirpSpec& spec, std::size_t total_length,
                               double t) noexcept {
  return frequency_law(spec, total_length, t - 0.5);
}

std::vector<double> chirp_phase(const ChirpSpec& spec, std::size_t total_length) {
  if (total_length < 2) {
    throw Error(ErrorKind::invalid_argument, "chirp length must be at least 2");
  }
  for (double theta : {spec.theta_start, spec.theta_end}) {
    if (!(theta > 0.0 && theta < kPi)) {
      throw Error(ErrorKind::invalid_argument,
                  "chirp frequency " + std::to_string(theta) + " outside (0, pi)");
    }
  }
  std::vector<double> phase(total_length);
  double acc = spec.phase0;
  for (std::size_t i = 0; i < total_length; ++i) {
    phase[i] = acc;
    acc += true_frequency_at(spec, total_length, i);
  }
  return phase;
}

std::vector<double> gen_chirp_mix(std::span<const ChirpSpec> specs, std::size_t total_length) {
  if (total_length < 2) {
    throw Error(ErrorKind::invalid_argument, "chirp length must be at least 2");
  }
  std::vector<double> out(total_length, 0.0);
  for (const auto& spec : specs) {
    const auto phase = chirp_phase(spec, total_length);
    const double a = spec.amplitude();
    for (std::size_t i = 0; i < total_length; ++i) out[i] += a * std::cos(phase[i]);
  }
  return out;
}

double signal_power(std::span<const double> x) noexcept {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

std::vector<double> add_awgn(std::span<const double> signal, double snr_db, std::uint64_t seed) {
  std::vector<double> out(signal.begin(), signal.end());
  if (std::isinf(snr_db) && snr_db > 0.0) return out;
  if (std::isnan(snr_db)) throw Error(ErrorKind::invalid_argument, "SNR is NaN");
  const double power = signal_power(signal);
  if (!(power > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "cannot set a finite SNR on a silent signal");
  }
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (double& v : out) v += gauss(rng);
  return out;
}

void FramePlan::validate() const {
  if (frame_length < 2) throw Error(ErrorKind::invalid_argument, "frame length must be >= 2");
  if (hop < 1 || hop > frame_length) {
    throw Error(ErrorKind::invalid_argument, "hop must lie in [1, frame_length]");
  }
}

std::size_t frame_count(std::size_t signal_length, const FramePlan& plan) {
  plan.validate();
  if (signal_length < plan.frame_length) return 0;
  return (signal_length - plan.frame_length) / plan.hop + 1;
}

std::vector<Frame> frame_stream(std::span<const double> signal, const FramePlan& plan) {
  const std::size_t count = frame_count(signal.size(), plan);
  std::vector<Frame> frames;
  frames.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t start = f * plan.hop;
    const auto view = signal.subspan(start, plan.frame_length);
    frames.push_back({start, std::vector<double>(view.begin(), view.end())});
  }
  return frames;
}

}  // namespace sinest
