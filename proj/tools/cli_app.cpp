#include "cli_app.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sinest/baselines.hpp"
#include "sinest/benchmarks.hpp"
#include "sinest/error.hpp"
#include "sinest/parallel.hpp"
#include "sinest/signals.hpp"
#include "sinest/solvers.hpp"
#include "sinest/table.hpp"
#include "sinest/wav.hpp"

namespace sinest::cli {

namespace {

std::vector<std::string> track_columns(ModelOrder order) {
  if (order == ModelOrder::second) {
    return {"frame_start", "A", "theta", "phi", "A_dot", "A_ddot", "theta_dot", "residual_rms"};
  }
  return {"frame_start", "A", "theta", "phi", "A_dot", "residual_rms"};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& what) {
  throw Error(ErrorKind::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& text, std::size_t line_no) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    bad_line(line_no, "not a number: '" + t + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& text, std::size_t line_no) {
  const std::string t = trim(text);
  std::size_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    bad_line(line_no, "not a non-negative integer: '" + t + "'");
  }
  return v;
}

int default_iters(bool linear, ModelOrder order) {
  if (linear) return 2;
  return order == ModelOrder::second ? 5 : 3;
}

struct EstimateOptions {
  std::string input;
  std::string output;
  std::size_t frame_length = 256;
  std::size_t hop = 192;
  int order = 1;
  std::string mode = "nonlinear";
  int iters = 0;
  double alpha = 1.0;
  std::size_t max_sines = 20;
  unsigned threads = 0;
};

TrackFile estimate_tracks(const AudioBuffer& audio, const EstimateOptions& opt) {
  const FramePlan plan{opt.frame_length, opt.hop};
  plan.validate();
  const bool linear = opt.mode == "linear";
  SolverConfig cfg;
  cfg.order = model_order_from_int(opt.order);
  cfg.iterations = opt.iters > 0 ? opt.iters : default_iters(linear, cfg.order);
  cfg.alpha = opt.alpha;
  cfg.validate();
  PeakPickConfig peaks;
  peaks.max_peaks = opt.max_sines;
  peaks.validate();

  TrackFile tracks;
  tracks.sample_rate = audio.sample_rate;
  tracks.length = audio.samples.size();
  tracks.frame_length = plan.frame_length;
  tracks.hop = plan.hop;
  tracks.order = cfg.order;

  const Window window = make_sine_window(plan.frame_length);
  const std::size_t frames = frame_count(audio.samples.size(), plan);
  std::vector<std::vector<TrackRow>> per_frame(frames);
  parallel_for(frames, opt.threads, [&](std::size_t f) {
    const std::size_t start = f * plan.hop;
    const std::span<const double> x(audio.samples.data() + start, plan.frame_length);
    const auto seeds = dft_peak_pick(window.apply(x), peaks);
    if (seeds.empty()) return;
    auto& rows = per_frame[f];
    if (linear) {
      const auto r = linear_estimate(x, seeds, window, cfg);
      const double rms = residual_rms(r.residual, std::vector<double>(r.residual.size(), 0.0));
      for (const auto& s : r.sinusoids) {
        SinusoidState st = s.state;
        st.frequency = s.refined_frequency();
        rows.push_back({start, st, rms});
      }
    } else {
      const auto r = nonlinear_estimate(x, seeds, window, cfg);
      const double rms = residual_rms(r.residual, std::vector<double>(r.residual.size(), 0.0));
      for (const auto& s : r.sinusoids) rows.push_back({start, s, rms});
    }
  });
  for (auto& rows : per_frame) {
    for (auto& r : rows) tracks.rows.push_back(r);
  }
  return tracks;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : split(text, ',')) {
    const std::string t = trim(cell);
    if (t == "inf" || t == "+inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    out.push_back(parse_double(t, 1));
  }
  if (out.empty()) throw Error(ErrorKind::invalid_argument, "empty list");
  return out;
}

void write_table(const ExperimentTable& table, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io_error, "cannot create " + path);
  table.write_csv(os);
  if (!os) throw Error(ErrorKind::io_error, "failed writing " + path);
}

}  // namespace

void write_tracks(std::ostream& os, const TrackFile& tracks) {
  ExperimentTable table(track_columns(tracks.order));
  table.add_comment("sample_rate=" + std::to_string(tracks.sample_rate));
  table.add_comment("length=" + std::to_string(tracks.length));
  table.add_comment("frame_length=" + std::to_string(tracks.frame_length));
  table.add_comment("hop=" + std::to_string(tracks.hop));
  table.add_comment("order=" + std::to_string(static_cast<int>(tracks.order)));
  for (const auto& r : tracks.rows) {
    const auto& s = r.state;
    std::vector<Cell> row{static_cast<std::int64_t>(r.frame_start), s.amplitude, s.frequency,
                          s.phase, s.amplitude_slope};
    if (tracks.order == ModelOrder::second) {
      row.emplace_back(s.amplitude_curvature);
      row.emplace_back(s.quadratic_phase);
    }
    row.emplace_back(r.residual_rms);
    table.add_row(std::move(row));
  }
  table.write_csv(os);
}

TrackFile read_tracks(std::istream& is) {
  TrackFile tracks;
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> body;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string kv = trim(t.substr(1));
      const auto eq = kv.find('=');
      if (eq == std::string::npos) bad_line(line_no, "expected key=value comment");
      meta[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
      continue;
    }
    if (header.empty()) {
      for (const auto& c : split(t, ',')) header.push_back(trim(c));
      continue;
    }
    body.emplace_back(line_no, split(t, ','));
  }

  auto need = [&](const char* key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) {
      throw Error(ErrorKind::parse_error, std::string("missing '# ") + key + "=' header line");
    }
    return it->second;
  };
  tracks.sample_rate = static_cast<std::uint32_t>(parse_count(need("sample_rate"), 0));
  tracks.length = parse_count(need("length"), 0);
  tracks.frame_length = parse_count(need("frame_length"), 0);
  tracks.hop = parse_count(need("hop"), 0);
  const std::size_t order = parse_count(need("order"), 0);
  if (order != 1 && order != 2) throw Error(ErrorKind::parse_error, "order must be 1 or 2");
  tracks.order = order == 2 ? ModelOrder::second : ModelOrder::first;
  FramePlan{tracks.frame_length, tracks.hop}.validate();

  const auto expected = track_columns(tracks.order);
  if (!header.empty() && header != expected) {
    throw Error(ErrorKind::parse_error, "unexpected column header");
  }
  if (header.empty() && !body.empty()) throw Error(ErrorKind::parse_error, "missing column header");

  for (const auto& [no, cells] : body) {
    if (cells.size() != expected.size()) {
      bad_line(no, "expected " + std::to_string(expected.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    TrackRow r;
    r.frame_start = parse_count(cells[0], no);
    if (r.frame_start % tracks.hop != 0 || r.frame_start + tracks.frame_length > tracks.length) {
      bad_line(no, "frame_start " + std::to_string(r.frame_start) + " is not a frame position");
    }
    std::size_t i = 1;
    r.state.amplitude = parse_double(cells[i++], no);
    r.state.frequency = parse_double(cells[i++], no);
    r.state.phase = parse_double(cells[i++], no);
    r.state.amplitude_slope = parse_double(cells[i++], no);
    if (tracks.order == ModelOrder::second) {
      r.state.amplitude_curvature = parse_double(cells[i++], no);
      r.state.quadratic_phase = parse_double(cells[i++], no);
    }
    r.residual_rms = parse_double(cells[i], no);
    if (r.state.amplitude < 0.0 || !(r.state.frequency > 0.0 && r.state.frequency < kPi)) {
      bad_line(no, "amplitude must be >= 0 and theta inside (0, pi)");
    }
    tracks.rows.push_back(r);
  }
  return tracks;
}

std::vector<double> synthesize_tracks(const TrackFile& tracks) {
  const std::size_t L = tracks.frame_length;
  const TimeGrid grid = make_time_grid(L);
  const Window window = make_sine_window(L);
  std::vector<double> out(tracks.length, 0.0);
  std::vector<double> weight(tracks.length, 0.0);

  std::map<std::size_t, std::vector<SinusoidState>> by_frame;
  for (const auto& r : tracks.rows) by_frame[r.frame_start].push_back(r.state);

  const std::size_t frames = frame_count(tracks.length, {L, tracks.hop});
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * tracks.hop;
    for (std::size_t i = 0; i < L; ++i) weight[start + i] += window[i] * window[i];
    const auto it = by_frame.find(start);
    if (it == by_frame.end()) continue;
    const auto frame = synthesize_exact(it->second, grid, window, tracks.order);
    for (std::size_t i = 0; i < L; ++i) out[start + i] += window[i] * frame[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = weight[i] > 1e-10 ? out[i] / weight[i] : 0.0;
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sinusoidal parameter estimation with linearised Gauss-Seidel solvers"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Per-frame sinusoid tracks from a WAV file");
  estimate->add_option("-i,--input", est.input, "16-bit PCM WAV")->required();
  estimate->add_option("-o,--output", est.output, "Track CSV (stdout if omitted)");
  estimate->add_option("--frame-length", est.frame_length, "Frame length L")
      ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 20));
  estimate->add_option("--hop", est.hop, "Frame hop")->check(CLI::PositiveNumber);
  estimate->add_option("--order", est.order, "Model order")->check(CLI::IsMember({1, 2}));
  estimate->add_option("--mode", est.mode, "linear or nonlinear")
      ->check(CLI::IsMember({"linear", "nonlinear"}));
  estimate->add_option("--iters", est.iters,
                       "Iterations (0: 2 linear, 3 nonlinear, 5 second order)")
      ->check(CLI::NonNegativeNumber);
  estimate->add_option("--alpha", est.alpha, "Frequency update rate")
      ->check(CLI::Range(1e-6, 1.0));
  estimate->add_option("--max-sines", est.max_sines, "Peaks per frame")
      ->check(CLI::PositiveNumber);
  estimate->add_option("--threads", est.threads, "Worker threads (0: all cores)");

  std::string synth_in, synth_out;
  auto* synth = app.add_subcommand("synth", "Overlap-add resynthesis of a track CSV");
  synth->add_option("-i,--input", synth_in, "Track CSV")->required();
  synth->add_option("-o,--output", synth_out, "Output WAV")->required();

  std::string bench_name, bench_out, snr_text = "0,10,20,30,40,50,60",
                                     algo_text = "mp,linear,nonlinear,second_order";
  std::uint64_t bench_seed = 1;
  std::size_t trials = 20;
  unsigned bench_threads = 0;
  auto* bench = app.add_subcommand("bench", "Regenerate an experiment table as CSV");
  bench->add_option("name", bench_name, "chirp, convergence, region, iterations or complexity")
      ->required()
      ->check(CLI::IsMember({"chirp", "convergence", "region", "iterations", "complexity"}));
  bench->add_option("-o,--output", bench_out, "CSV path (default <name>.csv)");
  bench->add_option("--snr-list", snr_text, "Comma-separated SNRs in dB (chirp)");
  bench->add_option("--algorithms", algo_text, "Comma-separated algorithms (chirp)");
  bench->add_option("--seed", bench_seed, "Base RNG seed");
  bench->add_option("--trials", trials, "Noise realisations per SNR")
      ->check(CLI::PositiveNumber);
  bench->add_option("--threads", bench_threads, "Worker threads (0: all cores)");

  std::string gen_kind, gen_out;
  double gen_theta = 0.25 * kPi, gen_amp = 0.5, gen_snr = std::numeric_limits<double>::infinity(),
         gen_gain = 0.25;
  std::size_t gen_length = 16000;
  std::uint32_t gen_rate = 16000;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Write a test tone or the chirp mix as WAV");
  gen->add_option("kind", gen_kind, "tone or chirp")
      ->required()
      ->check(CLI::IsMember({"tone", "chirp"}));
  gen->add_option("-o,--output", gen_out, "Output WAV")->required();
  gen->add_option("--theta", gen_theta, "Tone frequency in rad/sample");
  gen->add_option("--amplitude", gen_amp, "Tone amplitude");
  gen->add_option("--length", gen_length, "Samples")->check(CLI::PositiveNumber);
  gen->add_option("--sample-rate", gen_rate, "Sample rate");
  gen->add_option("--gain", gen_gain, "Scale applied to the chirp mix");
  gen->add_option("--snr", gen_snr, "Chirp SNR in dB");
  gen->add_option("--seed", gen_seed, "Noise seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (estimate->parsed()) {
      const AudioBuffer audio = read_wav(est.input);
      const TrackFile tracks = estimate_tracks(audio, est);
      if (est.output.empty()) {
        write_tracks(out, tracks);
      } else {
        std::ofstream os(est.output);
        if (!os) throw Error(ErrorKind::io_error, "cannot create " + est.output);
        write_tracks(os, tracks);
      }
    } else if (synth->parsed()) {
      std::ifstream is(synth_in);
      if (!is) throw Error(ErrorKind::io_error, "cannot open " + synth_in);
      const TrackFile tracks = read_tracks(is);
      write_wav(synth_out, {synthesize_tracks(tracks), tracks.sample_rate});
    } else if (bench->parsed()) {
      BenchConfig cfg;
      cfg.rng_seed = bench_seed;
      cfg.noise_trials = trials;
      cfg.threads = bench_threads;
      ExperimentTable table({"unused"});
      if (bench_name == "chirp") {
        const auto snrs = parse_list(snr_text);
        std::vector<Algorithm> algos;
        for (const auto& name : split(algo_text, ',')) algos.push_back(algorithm_from_string(trim(name)));
        table = run_chirp_experiment(snrs, algos, cfg);
      } else if (bench_name == "convergence") {
        const double alphas[] = {0.25, 0.5, 0.75, 1.0};
        table = run_convergence_experiment(alphas, cfg);
      } else if (bench_name == "region") {
        std::vector<double> thetas;
        for (double f : {0.01, 0.02, 0.03, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95,
                         0.98}) {
          thetas.push_back(f * kPi);
        }
        table = run_region_experiment(thetas, cfg);
      } else if (bench_name == "iterations") {
        table = run_iteration_sweep(cfg);
      } else {
        table = complexity_report();
      }
      const std::string path = bench_out.empty() ? bench_name + ".csv" : bench_out;
      write_table(table, path);
      out << path << '\n';
    } else if (gen->parsed()) {
      AudioBuffer audio;
      audio.sample_rate = gen_rate;
      if (gen_kind == "tone") {
        if (!(gen_theta > 0.0 && gen_theta < kPi)) {
          throw Error(ErrorKind::invalid_argument, "tone theta must lie in (0, pi)");
        }
        audio.samples.resize(gen_length);
        for (std::size_t i = 0; i < gen_length; ++i) {
          audio.samples[i] = gen_amp * std::cos(gen_theta * static_cast<double>(i));
        }
      } else {
        const auto specs = five_chirp_preset();
        audio.samples = add_awgn(gen_chirp_mix(specs, gen_length), gen_snr, gen_seed);
        for (double& v : audio.samples) v *= gen_gain;
      }
      write_wav(gen_out, audio);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::io_error:
      case ErrorKind::parse_error:
      case ErrorKind::unsupported_format:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sinest::cli
