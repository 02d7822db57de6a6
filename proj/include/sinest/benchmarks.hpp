#pragma once

// Accuracy metrics and the experiment drivers that regenerate the
// convergence, region, chirp, iteration and complexity tables.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sinest/signals.hpp"
#include "sinest/table.hpp"

namespace sinest {

struct MatchPair {
  std::size_t estimate = 0;
  std::size_t truth = 0;
  double error = 0.0;  // estimate - truth
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::size_t unmatched_estimates = 0;
  std::size_t unmatched_truths = 0;
};

/// Greedy association, closest (estimate, truth) pair first. Each truth and
/// each estimate is used at most once; pairs further apart than max_distance
/// are left unmatched.
MatchReport match_nearest(std::span<const double> estimates, std::span<const double> truths,
                          double max_distance = std::numeric_limits<double>::infinity());

/// RMS of the matched frequency errors. Throws undefined-metric when nothing matched.
double freq_rms_error(std::span<const double> estimates, std::span<const double> truths);
double freq_rms_error(std::span<const MatchReport> reports);

/// |x_h - x_tilde| / sqrt(L). Throws invalid-argument on a length mismatch.
double residual_rms(std::span<const double> x_h, std::span<const double> x_tilde);
double reconstruction_rms_vs_clean(std::span<const double> x_tilde,
                                   std::span<const double> clean_windowed);

enum class Algorithm { mp, linear, nonlinear, second_order };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);
std::vector<Algorithm> all_algorithms();

/// Outer iterations used by an algorithm in the typical scenario (2, 3, 5).
int default_iterations(Algorithm a);

struct BenchConfig {
  FramePlan frames{};
  std::size_t signal_length = kDefaultChirpLength;
  std::vector<ChirpSpec> chirps = five_chirp_preset();
  std::size_t noise_trials = 20;
  std::uint64_t rng_seed = 1;
  /// Per-algorithm outer iteration override; 0 keeps default_iterations.
  int iterations = 0;
  double alpha = 1.0;
  /// Worker threads for independent cells; 0 uses the hardware count.
  unsigned threads = 0;

  void validate() const;
};

/// Single tone at 0.1 pi seeded at 0.095 pi. Rows: alpha, iteration, abs_error.
ExperimentTable run_convergence_experiment(std::span<const double> alphas,
                                           const BenchConfig& config, int iterations = 10);

/// Largest initial offset (bins, worst case over four phases and both
/// signs) from which 20 unclamped iterations land within 1e-4 bins of the
/// truth. Rows: theta, max_offset_bins.
ExperimentTable run_region_experiment(std::span<const double> theta_grid,
                                      const BenchConfig& config);

/// Frame-wise estimation on the noisy chirp mix. Estimates are paired with the
/// chirp frequencies at the frame centre, at most one bin apart.
/// Rows per (snr, algorithm):
/// snr_db, algorithm, iterations, freq_rms, recon_rms, residual_rms, matched,
/// unmatched_truths.
ExperimentTable run_chirp_experiment(std::span<const double> snr_list,
                                     std::span<const Algorithm> algorithms,
                                     const BenchConfig& config);

/// Residual RMS on the clean chirp mix for M = 1..max_iterations.
/// Rows: algorithm, iterations, residual_rms.
ExperimentTable run_iteration_sweep(const BenchConfig& config, int max_iterations = 10);

struct ComplexityScenario {
  std::size_t frame_length = 256;
  std::size_t sinusoids = 20;
  std::size_t oversampling = 64;
  double sample_rate = 16000.0;
  std::size_t hop = 192;
};

/// Formula and instrumented operation counts per frame, plus the Mflops the
/// formula implies for the scenario's frame rate.
ExperimentTable complexity_report(const ComplexityScenario& scenario = {});

}  // namespace sinest
