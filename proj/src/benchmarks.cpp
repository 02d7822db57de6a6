#include "sinest/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sinest/baselines.hpp"
#include "sinest/error.hpp"
#include "sinest/model.hpp"
#include "sinest/parallel.hpp"
#include "sinest/solvers.hpp"

namespace sinest {

namespace {

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::invalid_argument, "length mismatch: " + std::to_string(a.size()) +
                                                 " vs " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_sq(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

std::vector<double> subtract(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

struct FrameOutcome {
  std::vector<double> frequencies;
  std::vector<double> residual;  // x_h - reconstruction
};

SolverConfig solver_config(Algorithm a, int iterations, double alpha) {
  SolverConfig cfg;
  cfg.order = a == Algorithm::second_order ? ModelOrder::second : ModelOrder::first;
  cfg.iterations = iterations > 0 ? iterations : default_iterations(a);
  cfg.alpha = alpha;
  return cfg;
}

FrameOutcome run_algorithm(Algorithm a, std::span<const double> frame,
                           std::span<const double> x_h, std::span<const double> seeds,
                           const Window& window, int iterations, double alpha) {
  FrameOutcome out;
  switch (a) {
    case Algorithm::mp: {
      MpConfig mp;
      mp.max_atoms = seeds.size();
      auto r = matching_pursuit(x_h, seeds, window, mp);
      for (const auto& atom : r.atoms) out.frequencies.push_back(atom.frequency);
      out.residual = std::move(r.residual);
      break;
    }
    case Algorithm::linear: {
      auto r = linear_estimate(frame, seeds, window, solver_config(a, iterations, alpha));
      for (const auto& s : r.sinusoids) out.frequencies.push_back(s.refined_frequency());
      out.residual = std::move(r.residual);
      break;
    }
    case Algorithm::nonlinear:
    case Algorithm::second_order: {
      auto r = nonlinear_estimate(frame, seeds, window, solver_config(a, iterations, alpha));
      for (const auto& s : r.sinusoids) out.frequencies.push_back(s.frequency);
      out.residual = std::move(r.residual);
      break;
    }
  }
  return out;
}

struct ChirpFrames {
  std::vector<double> clean;
  std::vector<Frame> frames;
  std::vector<std::vector<double>> clean_windowed;
  std::vector<std::vector<double>> truths;
};

ChirpFrames prepare_chirp_frames(const BenchConfig& config, const Window& window) {
  ChirpFrames cf;
  cf.clean = gen_chirp_mix(config.chirps, config.signal_length);
  cf.frames = frame_stream(cf.clean, config.frames);
  const double centre_offset = static_cast<double>(config.frames.frame_length) / 2.0 - 0.5;
  for (const auto& f : cf.frames) {
    cf.clean_windowed.push_back(window.apply(f.samples));
    std::vector<double> truth;
    for (const auto& spec : config.chirps) {
      truth.push_back(instantaneous_frequency(spec, config.signal_length,
                                              static_cast<double>(f.start) + centre_offset));
    }
    cf.truths.push_back(std::move(truth));
  }
  return cf;
}

std::string snr_label(double snr) {
  if (std::isinf(snr)) return snr > 0 ? "inf" : "-inf";
  return format_number(snr);
}

}  // namespace

MatchReport match_nearest(std::span<const double> estimates, std::span<const double> truths,
                          double max_distance) {
  struct Candidate {
    double distance;
    std::size_t estimate;
    std::size_t truth;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(estimates.size() * truths.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    for (std::size_t j = 0; j < truths.size(); ++j) {
      const double d = std::abs(estimates[i] - truths[j]);
      if (d <= max_distance) candidates.push_back({d, i, j});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });

  MatchReport report;
  std::vector<bool> used_est(estimates.size(), false);
  std::vector<bool> used_truth(truths.size(), false);
  for (const auto& c : candidates) {
    if (used_est[c.estimate] || used_truth[c.truth]) continue;
    used_est[c.estimate] = used_truth[c.truth] = true;
    report.pairs.push_back({c.estimate, c.truth, estimates[c.estimate] - truths[c.truth]});
  }
  report.unmatched_estimates = estimates.size() - report.pairs.size();
  report.unmatched_truths = truths.size() - report.pairs.size();
  return report;
}

double freq_rms_error(std::span<const MatchReport> reports) {
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& r : reports) {
    for (const auto& p : r.pairs) acc += p.error * p.error;
    n += r.pairs.size();
  }
  if (n == 0) throw Error(ErrorKind::undefined_metric, "no matched frequency pairs");
  return std::sqrt(acc / static_cast<double>(n));
}

double freq_rms_error(std::span<const double> estimates, std::span<const double> truths) {
  const MatchReport r = match_nearest(estimates, truths);
  return freq_rms_error(std::span<const MatchReport>(&r, 1));
}

double residual_rms(std::span<const double> x_h, std::span<const double> x_tilde) {
  if (x_h.empty() && x_tilde.empty()) return 0.0;
  return std::sqrt(sum_sq_diff(x_h, x_tilde) / static_cast<double>(x_h.size()));
}

double reconstruction_rms_vs_clean(std::span<const double> x_tilde,
                                   std::span<const double> clean_windowed) {
  return residual_rms(clean_windowed, x_tilde);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::mp:
      return "mp";
    case Algorithm::linear:
      return "linear";
    case Algorithm::nonlinear:
      return "nonlinear";
    case Algorithm::second_order:
      return "second_order";
  }
  return "unknown";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (Algorithm a : all_algorithms()) {
    if (to_string(a) == name) return a;
  }
  throw Error(ErrorKind::invalid_argument, "unknown algorithm '" + name + "'");
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::mp, Algorithm::linear, Algorithm::nonlinear, Algorithm::second_order};
}

int default_iterations(Algorithm a) {
  switch (a) {
    case Algorithm::linear:
      return 2;
    case Algorithm::nonlinear:
      return 3;
    case Algorithm::second_order:
      return 5;
    case Algorithm::mp:
      return 0;
  }
  return 0;
}

void BenchConfig::validate() const {
  frames.validate();
  if (signal_length < frames.frame_length) {
    throw Error(ErrorKind::invalid_argument, "signal shorter than one frame");
  }
  if (chirps.empty()) throw Error(ErrorKind::invalid_argument, "no chirps configured");
  if (noise_trials == 0) throw Error(ErrorKind::invalid_argument, "noise_trials must be >= 1");
  if (iterations < 0) throw Error(ErrorKind::invalid_argument, "iterations must be >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must lie in (0, 1]");
  }
}

ExperimentTable run_convergence_experiment(std::span<const double> alphas,
                                           const BenchConfig& config, int iterations) {
  if (iterations < 1) throw Error(ErrorKind::invalid_argument, "iterations must be >= 1");
  const std::size_t L = config.frames.frame_length;
  const double theta = 0.1 * kPi;
  const double seed = 0.095 * kPi;
  const TimeGrid grid = make_time_grid(L);
  const Window window = make_sine_window(L);
  std::vector<double> x(L);
  for (std::size_t i = 0; i < L; ++i) x[i] = std::cos(theta * grid[i]);

  ExperimentTable table({"alpha", "iteration", "abs_error"});
  table.add_comment("theta=" + format_number(theta) + " seed=" + format_number(seed) +
                    " frame_length=" + std::to_string(L));
  for (double alpha : alphas) {
    SolverConfig cfg;
    cfg.iterations = iterations;
    cfg.alpha = alpha;
    const auto r = nonlinear_estimate(x, std::span<const double>(&seed, 1), window, cfg);
    for (std::size_t m = 0; m < r.history.size(); ++m) {
      table.add_row({alpha, static_cast<std::int64_t>(m + 1),
                     std::abs(r.history[m].frequencies[0] - theta)});
    }
  }
  return table;
}

ExperimentTable run_region_experiment(std::span<const double> theta_grid,
                                      const BenchConfig& config) {
  const std::size_t L = config.frames.frame_length;
  const double bin = 2.0 * kPi / static_cast<double>(L);
  const TimeGrid grid = make_time_grid(L);
  const Window window = make_sine_window(L);
  constexpr double kPhases[] = {0.0, 0.8, 1.6, 2.4};
  constexpr double kScanStep = 0.05;
  constexpr double kScanLimit = 4.0;

  for (double theta : theta_grid) {
    if (!(theta > 0.0 && theta < kPi)) {
      throw Error(ErrorKind::invalid_argument, "theta " + format_number(theta) + " outside (0, pi)");
    }
  }

  std::vector<double> result(theta_grid.size());
  parallel_for(theta_grid.size(), config.threads, [&](std::size_t t) {
    const double theta = theta_grid[t];
    std::vector<std::vector<double>> signals;
    for (double ph : kPhases) {
      std::vector<double> x(L);
      for (std::size_t i = 0; i < L; ++i) x[i] = std::cos(theta * grid[i] + ph);
      signals.push_back(std::move(x));
    }
    auto converges = [&](double offset_bins) {
      for (double sign : {-1.0, 1.0}) {
        const double seed = theta + sign * offset_bins * bin;
        if (!(seed > 0.0 && seed < kPi)) return false;
        for (const auto& x : signals) {
          SolverConfig cfg;
          cfg.iterations = 20;
          cfg.alpha = config.alpha;
          cfg.clamp_halfwidth = kPi;
          const auto r = nonlinear_estimate(x, std::span<const double>(&seed, 1), window, cfg);
          if (!(std::abs(r.sinusoids[0].frequency - theta) < 1e-4 * bin)) return false;
        }
      }
      return true;
    };
    double good = 0.0;
    double bad = kScanLimit;
    for (double off = kScanStep; off <= kScanLimit + 1e-12; off += kScanStep) {
      if (!converges(off)) {
        bad = off;
        break;
      }
      good = off;
    }
    if (good < kScanLimit) {
      for (int k = 0; k < 10; ++k) {
        const double mid = 0.5 * (good + bad);
        (converges(mid) ? good : bad) = mid;
      }
    }
    result[t] = good;
  });

  ExperimentTable table({"theta", "max_offset_bins"});
  table.add_comment("frame_length=" + std::to_string(L) +
                    " iterations=20 tolerance_bins=1e-4 clamp=off phases=0,0.8,1.6,2.4");
  for (std::size_t t = 0; t < theta_grid.size(); ++t) table.add_row({theta_grid[t], result[t]});
  return table;
}

ExperimentTable run_chirp_experiment(std::span<const double> snr_list,
                                     std::span<const Algorithm> algorithms,
                                     const BenchConfig& config) {
  config.validate();
  if (algorithms.empty()) throw Error(ErrorKind::invalid_argument, "no algorithms selected");
  const Window window = make_sine_window(config.frames.frame_length);
  const ChirpFrames cf = prepare_chirp_frames(config, window);
  const double L = static_cast<double>(config.frames.frame_length);
  const double bin = 2.0 * kPi / L;

  struct Accum {
    double freq_sq = 0.0;
    std::size_t pairs = 0;
    std::size_t unmatched_truths = 0;
    double recon_sq = 0.0;
    double resid_sq = 0.0;
    std::size_t frames = 0;
  };
  const std::size_t n_algo = algorithms.size();
  const std::size_t cells = snr_list.size() * config.noise_trials;
  std::vector<std::vector<Accum>> per_cell(cells, std::vector<Accum>(n_algo));

  PeakPickConfig peaks;
  peaks.max_peaks = config.chirps.size();

  parallel_for(cells, config.threads, [&](std::size_t c) {
    const double snr = snr_list[c / config.noise_trials];
    const std::uint64_t seed = config.rng_seed + c % config.noise_trials;
    const auto noisy = add_awgn(cf.clean, snr, seed);
    for (std::size_t f = 0; f < cf.frames.size(); ++f) {
      const std::span<const double> frame(noisy.data() + cf.frames[f].start,
                                          config.frames.frame_length);
      const auto x_h = window.apply(frame);
      const auto seeds = dft_peak_pick(x_h, peaks);
      if (seeds.empty()) continue;
      for (std::size_t a = 0; a < n_algo; ++a) {
        const auto out =
            run_algorithm(algorithms[a], frame, x_h, seeds, window, config.iterations, config.alpha);
        const auto recon = subtract(x_h, out.residual);
        const auto match = match_nearest(out.frequencies, cf.truths[f], bin);
        Accum& acc = per_cell[c][a];
        for (const auto& p : match.pairs) acc.freq_sq += p.error * p.error;
        acc.pairs += match.pairs.size();
        acc.unmatched_truths += match.unmatched_truths;
        acc.recon_sq += sum_sq_diff(recon, cf.clean_windowed[f]) / L;
        acc.resid_sq += sum_sq(out.residual) / L;
        ++acc.frames;
      }
    }
  });

  ExperimentTable table({"snr_db", "algorithm", "iterations", "freq_rms", "recon_rms",
                         "residual_rms", "matched", "unmatched_truths"});
  table.add_comment("rng_seed=" + std::to_string(config.rng_seed) +
                    " noise_trials=" + std::to_string(config.noise_trials) +
                    " match_gate_bins=1");
  table.add_comment("signal_length=" + std::to_string(config.signal_length) +
                    " frame_length=" + std::to_string(config.frames.frame_length) +
                    " hop=" + std::to_string(config.frames.hop) +
                    " chirps=" + std::to_string(config.chirps.size()));
  for (std::size_t s = 0; s < snr_list.size(); ++s) {
    for (std::size_t a = 0; a < n_algo; ++a) {
      Accum total;
      for (std::size_t t = 0; t < config.noise_trials; ++t) {
        const Accum& acc = per_cell[s * config.noise_trials + t][a];
        total.freq_sq += acc.freq_sq;
        total.pairs += acc.pairs;
        total.unmatched_truths += acc.unmatched_truths;
        total.recon_sq += acc.recon_sq;
        total.resid_sq += acc.resid_sq;
        total.frames += acc.frames;
      }
      if (total.pairs == 0 || total.frames == 0) {
        throw Error(ErrorKind::undefined_metric,
                    "no matched estimates at SNR " + snr_label(snr_list[s]));
      }
      const auto frames = static_cast<double>(total.frames);
      const int iters = algorithms[a] == Algorithm::mp ? 0
                        : config.iterations > 0   ? config.iterations
                                                  : default_iterations(algorithms[a]);
      table.add_row({snr_label(snr_list[s]), to_string(algorithms[a]),
                     static_cast<std::int64_t>(iters),
                     std::sqrt(total.freq_sq / static_cast<double>(total.pairs)),
                     std::sqrt(total.recon_sq / frames), std::sqrt(total.resid_sq / frames),
                     static_cast<std::int64_t>(total.pairs),
                     static_cast<std::int64_t>(total.unmatched_truths)});
    }
  }
  return table;
}

ExperimentTable run_iteration_sweep(const BenchConfig& config, int max_iterations) {
  config.validate();
  if (max_iterations < 1) throw Error(ErrorKind::invalid_argument, "max_iterations must be >= 1");
  const Window window = make_sine_window(config.frames.frame_length);
  const ChirpFrames cf = prepare_chirp_frames(config, window);
  const double L = static_cast<double>(config.frames.frame_length);
  const Algorithm algos[] = {Algorithm::linear, Algorithm::nonlinear, Algorithm::second_order};

  PeakPickConfig peaks;
  peaks.max_peaks = config.chirps.size();
  std::vector<std::vector<double>> seeds(cf.frames.size());
  std::vector<std::vector<double>> windowed(cf.frames.size());
  for (std::size_t f = 0; f < cf.frames.size(); ++f) {
    windowed[f] = window.apply(cf.frames[f].samples);
    seeds[f] = dft_peak_pick(windowed[f], peaks);
  }

  const std::size_t n_cells = std::size(algos) * static_cast<std::size_t>(max_iterations);
  std::vector<double> rms(n_cells);
  parallel_for(n_cells, config.threads, [&](std::size_t c) {
    const Algorithm a = algos[c / static_cast<std::size_t>(max_iterations)];
    const int m = static_cast<int>(c % static_cast<std::size_t>(max_iterations)) + 1;
    double acc = 0.0;
    std::size_t frames = 0;
    for (std::size_t f = 0; f < cf.frames.size(); ++f) {
      if (seeds[f].empty()) continue;
      const auto out =
          run_algorithm(a, cf.frames[f].samples, windowed[f], seeds[f], window, m, config.alpha);
      acc += sum_sq(out.residual) / L;
      ++frames;
    }
    rms[c] = frames ? std::sqrt(acc / static_cast<double>(frames)) : 0.0;
  });

  ExperimentTable table({"algorithm", "iterations", "residual_rms"});
  table.add_comment("clean chirp mix, signal_length=" + std::to_string(config.signal_length) +
                    " frame_length=" + std::to_string(config.frames.frame_length) +
                    " hop=" + std::to_string(config.frames.hop));
  for (std::size_t c = 0; c < n_cells; ++c) {
    const Algorithm a = algos[c / static_cast<std::size_t>(max_iterations)];
    const auto m = static_cast<std::int64_t>(c % static_cast<std::size_t>(max_iterations)) + 1;
    table.add_row({to_string(a), m, rms[c]});
  }
  return table;
}

ExperimentTable complexity_report(const ComplexityScenario& sc) {
  const std::size_t L = sc.frame_length;
  const std::size_t N = sc.sinusoids;
  if (L < 8 || N == 0 || sc.hop == 0 || !(sc.sample_rate > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "invalid complexity scenario");
  }
  const double bin = 2.0 * kPi / static_cast<double>(L);
  const double spacing = (kPi - 2.0 * bin) / static_cast<double>(N + 1);
  const TimeGrid grid = make_time_grid(L);
  const Window window = make_sine_window(L);

  std::vector<double> x(L, 0.0);
  std::vector<double> seeds(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double theta = bin + spacing * static_cast<double>(k + 1);
    seeds[k] = theta - 0.3 * bin;
    for (std::size_t i = 0; i < L; ++i) x[i] += std::cos(theta * grid[i] + 0.5 * static_cast<double>(k));
  }

  const double frames_per_second = sc.sample_rate / static_cast<double>(sc.hop);
  const double LN = static_cast<double>(L * N);
  ExperimentTable table({"algorithm", "iterations", "formula", "formula_ops", "measured_ops",
                         "ratio", "formula_mflops", "measured_mflops"});
  table.add_comment("L=" + std::to_string(L) + " N=" + std::to_string(N) +
                    " P=" + std::to_string(sc.oversampling) +
                    " fs=" + format_number(sc.sample_rate) + " hop=" + std::to_string(sc.hop));
  table.add_comment("direct matching pursuit appears as 2L^2NP in the comparison table and "
                    "2LN^2P in the prose; both rows are emitted");

  auto add = [&](const std::string& name, int m, const std::string& formula, double formula_ops,
                 double measured) {
    table.add_row({name, static_cast<std::int64_t>(m), formula, formula_ops, measured,
                   measured / formula_ops, formula_ops * frames_per_second / 1e6,
                   measured * frames_per_second / 1e6});
  };

  {
    SolverConfig cfg;
    cfg.iterations = default_iterations(Algorithm::linear);
    cfg.count_ops = true;
    const auto r = linear_estimate(x, seeds, window, cfg);
    const int m = cfg.iterations;
    add("linear", m, "(8M+5)LN", (8.0 * m + 5.0) * LN, static_cast<double>(r.ops.flops()));
  }
  {
    SolverConfig cfg;
    cfg.iterations = default_iterations(Algorithm::nonlinear);
    cfg.count_ops = true;
    const auto r = nonlinear_estimate(x, seeds, window, cfg);
    const int m = cfg.iterations;
    add("nonlinear", m, "(17M-4)LN", (17.0 * m - 4.0) * LN, static_cast<double>(r.ops.flops()));
  }
  {
    SolverConfig cfg;
    cfg.order = ModelOrder::second;
    cfg.iterations = default_iterations(Algorithm::second_order);
    cfg.count_ops = true;
    const auto r = nonlinear_estimate(x, seeds, window, cfg);
    const int m = cfg.iterations;
    add("second_order", m, "(24M-6)LN", (24.0 * m - 6.0) * LN,
        static_cast<double>(r.ops.flops()));
  }
  {
    MpConfig mp;
    mp.oversampling = sc.oversampling;
    mp.max_atoms = N;
    const auto x_h = window.apply(x);
    const auto r = matching_pursuit(x_h, {}, window, mp, true);
    const double measured = static_cast<double>(r.ops.flops());
    const double P = static_cast<double>(sc.oversampling);
    const double Ld = static_cast<double>(L);
    const double Nd = static_cast<double>(N);
    const int atoms = static_cast<int>(N);
    add("mp_direct_table", atoms, "2L^2NP", 2.0 * Ld * Ld * Nd * P, measured);
    add("mp_direct_text", atoms, "2LN^2P", 2.0 * Ld * Nd * Nd * P, measured);
  }
  return table;
}

}  // namespace sinest
