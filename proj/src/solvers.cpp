#include "sinest/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sinest/error.hpp"

namespace sinest {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc;
}

double rms_of(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::sqrt(dot(x, x) / static_cast<double>(x.size()));
}

void validate_seeds(std::span<const double> seeds) {
  if (seeds.empty()) {
    throw Error(ErrorKind::invalid_argument, "at least one seed frequency is required");
  }
  for (double theta : seeds) {
    if (!(theta > 0.0 && theta < kPi)) {
      throw Error(ErrorKind::invalid_frequency,
                  "seed " + std::to_string(theta) + " outside (0, pi)");
    }
  }
  std::vector<double> sorted(seeds.begin(), seeds.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::invalid_argument, "seed frequencies must be distinct");
  }
}

// Everything the two estimators share before the first sweep.
struct FrameSetup {
  TimeGrid grid;
  std::vector<double> windowed;
  double amplitude_floor;
  double halfwidth;
};

FrameSetup prepare_frame(std::span<const double> x, std::span<const double> seeds,
                         const Window& window, const SolverConfig& config,
                         OpCounter* ops) {
  config.validate();
  if (x.size() != window.size()) {
    throw Error(ErrorKind::invalid_argument,
                "frame length " + std::to_string(x.size()) + " does not match window length " +
                    std::to_string(window.size()));
  }
  validate_seeds(seeds);
  FrameSetup setup{make_time_grid(x.size()), window.apply(x), 0.0,
                   config.halfwidth(x.size())};
  count_mul(ops, x.size());
  setup.amplitude_floor = 1e-12 * rms_of(setup.windowed);
  return setup;
}

CoeffVector unpack(const Eigen::VectorXd& v, const BasisSet& basis) {
  const std::size_t ncomp = components_per_sinusoid(basis.order());
  CoeffVector out(basis.sinusoids());
  for (std::size_t k = 0; k < basis.sinusoids(); ++k) {
    for (Component c : components(basis.order())) {
      out[k][c] = v(static_cast<Eigen::Index>(k * ncomp + static_cast<std::size_t>(c)));
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void SolverConfig::validate() const {
  if (iterations < 1) {
    throw Error(ErrorKind::invalid_argument, "iteration count must be at least 1");
  }
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw Error(ErrorKind::invalid_argument, "update rate alpha must lie in (0, 2]");
  }
  if (clamp_halfwidth && !(*clamp_halfwidth > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "clamp half-width must be positive");
  }
  if (!(stop_tolerance >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "stop tolerance must be non-negative");
  }
}

double SolverConfig::halfwidth(std::size_t frame_length) const {
  return clamp_halfwidth.value_or(2.0 * kPi / static_cast<double>(frame_length));
}

// ---------------------------------------------------------------------------

ResidualState::ResidualState(const ParityLayout& layout, std::span<const double> full,
                             OpCounter* ops)
    : layout_(layout), even_(layout.even_size()), odd_(layout.odd_size()) {
  layout_.split(full, even_, odd_);
  count_add(ops, 2 * layout_.odd_size());
  count_mul(ops, 2 * layout_.odd_size());
}

std::vector<double> ResidualState::full() const {
  std::vector<double> out(layout_.length());
  layout_.merge(even_, odd_, out);
  return out;
}

double ResidualState::energy() const noexcept { return dot(even_, even_) + dot(odd_, odd_); }

double ResidualState::rms() const noexcept {
  return std::sqrt(energy() / static_cast<double>(layout_.length()));
}

SplitSignal split_even_odd(std::span<const double> signal, const TimeGrid& grid) {
  if (signal.size() != grid.size()) {
    throw Error(ErrorKind::invalid_argument, "split: signal and grid lengths differ");
  }
  const ParityLayout layout(grid.size());
  SplitSignal out{std::vector<double>(layout.even_size()),
                  std::vector<double>(layout.odd_size())};
  layout.split(signal, out.even, out.odd);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SweepStep> standard_sweep_order(const BasisSet& basis) {
  std::vector<std::size_t> by_freq(basis.sinusoids());
  std::iota(by_freq.begin(), by_freq.end(), std::size_t{0});
  const auto seeds = basis.seeds();
  std::stable_sort(by_freq.begin(), by_freq.end(),
                   [&](std::size_t a, std::size_t b) { return seeds[a] < seeds[b]; });

  static constexpr Component kGroups[] = {Component::cos,   Component::sin,
                                          Component::n_sin, Component::n_cos,
                                          Component::n2_cos, Component::n2_sin};
  const std::size_t ngroups = components_per_sinusoid(basis.order());
  std::vector<SweepStep> order;
  order.reserve(ngroups * by_freq.size());
  for (std::size_t g = 0; g < ngroups; ++g) {
    for (std::size_t k : by_freq) order.push_back({k, kGroups[g]});
  }
  return order;
}

void gauss_seidel_sweep(const BasisSet& basis, ResidualState& residual, CoeffVector& w,
                        OpCounter* ops) {
  const auto order = standard_sweep_order(basis);
  gauss_seidel_sweep(basis, residual, w, order, ops);
}

void gauss_seidel_sweep(const BasisSet& basis, ResidualState& residual, CoeffVector& w,
                        std::span<const SweepStep> order, OpCounter* ops) {
  if (w.size() != basis.sinusoids()) {
    throw Error(ErrorKind::invalid_argument, "coefficient count does not match basis");
  }
  for (const SweepStep& step : order) {
    const auto col = basis.half(step.sinusoid, step.component);
    auto e = residual.part(parity_of(step.component));
    const double delta = dot(col, e);
    for (std::size_t j = 0; j < e.size(); ++j) e[j] -= delta * col[j];
    w[step.sinusoid][step.component] += delta;
    count_mul(ops, 2 * e.size());
    count_add(ops, 2 * e.size() + 1);
  }
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd basis_matrix(const BasisSet& basis) {
  const std::size_t ncomp = components_per_sinusoid(basis.order());
  Eigen::MatrixXd a(static_cast<Eigen::Index>(basis.length()),
                    static_cast<Eigen::Index>(basis.sinusoids() * ncomp));
  for (std::size_t k = 0; k < basis.sinusoids(); ++k) {
    for (Component c : components(basis.order())) {
      const auto col = basis.column(k, c);
      a.col(static_cast<Eigen::Index>(k * ncomp + static_cast<std::size_t>(c))) =
          Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(col.size()));
    }
  }
  return a;
}

NormalSystem normal_system(const BasisSet& basis, std::span<const double> x_h) {
  if (x_h.size() != basis.length()) {
    throw Error(ErrorKind::invalid_argument, "signal length does not match basis");
  }
  const Eigen::MatrixXd a = basis_matrix(basis);
  const Eigen::Map<const Eigen::VectorXd> x(x_h.data(), static_cast<Eigen::Index>(x_h.size()));
  return {a.transpose() * a, a.transpose() * x};
}

DirectSolution direct_ls_solve(const BasisSet& basis, std::span<const double> x_h) {
  const NormalSystem sys = normal_system(basis, x_h);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(sys.gram);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  const double dmax = pivots.size() ? pivots.maxCoeff() : 1.0;
  const double dmin = pivots.size() ? pivots.minCoeff() : 1.0;
  const double cond = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
  if (ldlt.info() != Eigen::Success || !(cond <= 1e12)) {
    throw Error(ErrorKind::ill_conditioned,
                "normal matrix is near-singular (pivot ratio " + std::to_string(cond) + ")");
  }
  return {unpack(ldlt.solve(sys.rhs), basis), cond};
}

CoeffVector jacobi_solve(const BasisSet& basis, std::span<const double> x_h, int sweeps) {
  if (sweeps < 1) throw Error(ErrorKind::invalid_argument, "Jacobi needs at least one sweep");
  if (x_h.size() != basis.length()) {
    throw Error(ErrorKind::invalid_argument, "signal length does not match basis");
  }
  const Eigen::MatrixXd a = basis_matrix(basis);
  const Eigen::Map<const Eigen::VectorXd> x(x_h.data(), static_cast<Eigen::Index>(x_h.size()));
  const double limit = 10.0 * x.norm();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(a.cols());
  for (int i = 0; i < sweeps; ++i) {
    w += a.transpose() * (x - a * w);
    const double r = (x - a * w).norm();
    if (!std::isfinite(r) || (limit > 0.0 && r > limit)) {
      throw Error(ErrorKind::diverged, "Jacobi iteration diverged at sweep " +
                                           std::to_string(i + 1) + " (residual norm " +
                                           std::to_string(r) + ")");
    }
  }
  return unpack(w, basis);
}

// ---------------------------------------------------------------------------

double clamp_frequency(double theta, double seed, double halfwidth) {
  if (!(halfwidth > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "clamp half-width must be positive");
  }
  // Keep a small margin from the ends of the band so the result is a valid seed.
  constexpr double kEdge = 1e-9;
  const double lo = std::max(seed - halfwidth, kEdge);
  const double hi = std::min(seed + halfwidth, kPi - kEdge);
  if (lo > hi) return std::clamp(seed, kEdge, kPi - kEdge);
  return std::clamp(theta, lo, hi);
}

LinearEstimate linear_estimate(std::span<const double> x, std::span<const double> seeds,
                               const Window& window, const SolverConfig& config) {
  LinearEstimate out;
  OpCounter* ops = config.count_ops ? &out.ops : nullptr;
  const FrameSetup setup = prepare_frame(x, seeds, window, config, ops);

  const BasisSet basis = build_basis(seeds, setup.grid, window, config.order, ops);
  ResidualState e(basis.layout(), setup.windowed, ops);
  CoeffVector w(seeds.size());
  const auto order = standard_sweep_order(basis);

  double previous = e.energy();
  for (int i = 0; i < config.iterations; ++i) {
    gauss_seidel_sweep(basis, e, w, order, ops);
    const double current = e.energy();
    out.residual_rms_trace.push_back(std::sqrt(current / static_cast<double>(x.size())));
    if (config.stop_tolerance > 0.0 && previous - current <= config.stop_tolerance * previous) {
      break;
    }
    previous = current;
  }

  out.sinusoids.reserve(seeds.size());
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const RecoveredParams p = params_from_coeffs(basis.to_physical(k, w[k]), seeds[k],
                                                 config.order, setup.amplitude_floor);
    const double theta = clamp_frequency(seeds[k] + p.delta_theta, seeds[k], setup.halfwidth);
    out.sinusoids.push_back({p.state, theta - seeds[k]});
  }
  out.residual = e.full();
  return out;
}

NonlinearEstimate nonlinear_estimate(std::span<const double> x,
                                     std::span<const double> seeds, const Window& window,
                                     const SolverConfig& config) {
  NonlinearEstimate out;
  OpCounter* ops = config.count_ops ? &out.ops : nullptr;
  const FrameSetup setup = prepare_frame(x, seeds, window, config, ops);
  const ParityLayout layout(x.size());
  const std::size_t n = seeds.size();

  // Windowed input in parity form; the residual is rebuilt from it each pass.
  const ResidualState input(layout, setup.windowed, ops);
  std::vector<double> theta(seeds.begin(), seeds.end());
  std::vector<SinusoidState> states(n);
  for (std::size_t k = 0; k < n; ++k) states[k].frequency = theta[k];

  double previous = input.energy();
  for (int i = 0; i < config.iterations; ++i) {
    const BasisSet basis = build_basis(theta, setup.grid, window, config.order, ops);

    // Coefficients of the previous solution on the re-centred basis.
    CoeffVector w(n);
    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
      SinusoidState s = states[k];
      s.frequency = theta[k];
      w[k] = basis.to_normalised(k, coeffs_from_params(s, config.order));
      any = any || s.amplitude > 0.0;
    }

    ResidualState e = input;
    if (any) {
      for (std::size_t k = 0; k < n; ++k) {
        for (Component c : components(config.order)) {
          const auto col = basis.half(k, c);
          auto part = e.part(parity_of(c));
          const double wk = w[k][c];
          for (std::size_t j = 0; j < part.size(); ++j) part[j] -= wk * col[j];
          count_mul(ops, part.size());
          count_add(ops, part.size());
        }
      }
    }

    gauss_seidel_sweep(basis, e, w, ops);

    for (std::size_t k = 0; k < n; ++k) {
      const RecoveredParams p = params_from_coeffs(basis.to_physical(k, w[k]), theta[k],
                                                   config.order, setup.amplitude_floor);
      states[k] = p.state;
      theta[k] = clamp_frequency(theta[k] + config.alpha * p.delta_theta, seeds[k],
                                 setup.halfwidth);
      states[k].frequency = theta[k];
    }

    const double current = e.energy();
    out.history.push_back({theta, std::sqrt(current / static_cast<double>(x.size()))});
    out.residual = e.full();
    if (config.stop_tolerance > 0.0 && previous - current <= config.stop_tolerance * previous) {
      break;
    }
    previous = current;
  }
  out.sinusoids = std::move(states);
  return out;
}

}  // namespace sinest
