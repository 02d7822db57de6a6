#include "sinest/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sinest/error.hpp"

namespace sinest {

namespace {

constexpr std::array<Component, 6> kAllComponents = {
    Component::cos,   Component::sin,    Component::n_cos,
    Component::n_sin, Component::n2_cos, Component::n2_sin};

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

void require_length(std::size_t length, const char* what) {
  if (length < 2) {
    throw Error(ErrorKind::invalid_argument,
                std::string(what) + ": length must be at least 2, got " +
                    std::to_string(length));
  }
}

void validate_state(const SinusoidState& s) {
  if (!std::isfinite(s.amplitude) || s.amplitude < 0.0 || !std::isfinite(s.phase) ||
      !std::isfinite(s.amplitude_slope) || !std::isfinite(s.amplitude_curvature) ||
      !std::isfinite(s.quadratic_phase)) {
    throw Error(ErrorKind::invalid_argument, "sinusoid state has invalid fields");
  }
  if (!(s.frequency > 0.0 && s.frequency < kPi)) {
    throw Error(ErrorKind::invalid_frequency,
                "frequency " + std::to_string(s.frequency) + " outside (0, pi)");
  }
}

}  // namespace

std::size_t components_per_sinusoid(ModelOrder order) noexcept {
  return order == ModelOrder::first ? 4 : 6;
}

ModelOrder model_order_from_int(int order) {
  if (order == 1) return ModelOrder::first;
  if (order == 2) return ModelOrder::second;
  throw Error(ErrorKind::invalid_argument,
              "model order must be 1 or 2, got " + std::to_string(order));
}

std::span<const Component> components(ModelOrder order) noexcept {
  return std::span<const Component>(kAllComponents.data(), components_per_sinusoid(order));
}

double wrap_phase(double phi) noexcept {
  double r = std::remainder(phi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

// ---------------------------------------------------------------------------

TimeGrid::TimeGrid(std::size_t length) {
  require_length(length, "time grid");
  n_.resize(length);
  const double centre = 0.5 * static_cast<double>(length - 1);
  for (std::size_t i = 0; i < length; ++i) n_[i] = static_cast<double>(i) - centre;
}

TimeGrid make_time_grid(std::size_t length) { return TimeGrid(length); }

Window::Window(std::vector<double> weights) : h_(std::move(weights)) {
  require_length(h_.size(), "window");
}

std::vector<double> Window::apply(std::span<const double> x) const {
  if (x.size() != h_.size()) {
    throw Error(ErrorKind::invalid_argument, "window/signal length mismatch");
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = h_[i] * x[i];
  return out;
}

Window make_sine_window(std::size_t length) {
  require_length(length, "sine window");
  const TimeGrid grid(length);
  std::vector<double> h(length);
  const double L = static_cast<double>(length);
  for (std::size_t i = 0; i < length; ++i) h[i] = std::cos(kPi * grid[i] / L);
  // The centred form is exactly symmetric only up to rounding in cos; mirror
  // the right half so that parity is exact.
  for (std::size_t i = 0; i < length / 2; ++i) h[i] = h[length - 1 - i];
  return Window(std::move(h));
}

// ---------------------------------------------------------------------------

ParityLayout::ParityLayout(std::size_t length) : length_(length) {
  require_length(length, "parity layout");
}

std::size_t ParityLayout::right_index(Parity p, std::size_t j) const noexcept {
  const std::size_t half = length_ / 2;
  if (!has_centre()) return half + j;
  // centre sample is index `half`; even[0] maps to it.
  return p == Parity::even ? half + j : half + 1 + j;
}

void ParityLayout::split(std::span<const double> x, std::span<double> even,
                         std::span<double> odd) const {
  if (x.size() != length_ || even.size() != even_size() || odd.size() != odd_size()) {
    throw Error(ErrorKind::invalid_argument, "parity split: size mismatch");
  }
  const std::size_t offset = has_centre() ? 1 : 0;
  if (has_centre()) even[0] = x[length_ / 2];
  for (std::size_t j = 0; j < odd_size(); ++j) {
    const std::size_t i = right_index(Parity::odd, j);
    const std::size_t m = length_ - 1 - i;
    even[j + offset] = (x[i] + x[m]) * kInvSqrt2;
    odd[j] = (x[i] - x[m]) * kInvSqrt2;
  }
}

void ParityLayout::merge(std::span<const double> even, std::span<const double> odd,
                         std::span<double> x) const {
  if (x.size() != length_ || even.size() != even_size() || odd.size() != odd_size()) {
    throw Error(ErrorKind::invalid_argument, "parity merge: size mismatch");
  }
  const std::size_t offset = has_centre() ? 1 : 0;
  if (has_centre()) x[length_ / 2] = even[0];
  for (std::size_t j = 0; j < odd_size(); ++j) {
    const std::size_t i = right_index(Parity::odd, j);
    const std::size_t m = length_ - 1 - i;
    x[i] = (even[j + offset] + odd[j]) * kInvSqrt2;
    x[m] = (even[j + offset] - odd[j]) * kInvSqrt2;
  }
}

// ---------------------------------------------------------------------------

LinearCoeffs coeffs_from_params(const SinusoidState& state, ModelOrder order) {
  return coeffs_from_params(state, 0.0, order);
}

LinearCoeffs coeffs_from_params(const SinusoidState& state, double delta_theta,
                                ModelOrder order) {
  validate_state(state);
  const double cp = std::cos(state.phase);
  const double sp = std::sin(state.phase);
  const double a = state.amplitude;
  LinearCoeffs w;
  w[Component::cos] = a * cp;
  w[Component::sin] = -a * sp;
  w[Component::n_cos] = state.amplitude_slope * cp - a * delta_theta * sp;
  w[Component::n_sin] = -state.amplitude_slope * sp - a * delta_theta * cp;
  if (order == ModelOrder::second) {
    w[Component::n2_cos] = state.amplitude_curvature * cp - a * state.quadratic_phase * sp;
    w[Component::n2_sin] = -state.amplitude_curvature * sp - a * state.quadratic_phase * cp;
  }
  return w;
}

RecoveredParams params_from_coeffs(const LinearCoeffs& w, double theta_prev,
                                   ModelOrder order, double amplitude_floor) {
  for (double v : w.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::invalid_argument, "non-finite linear coefficient");
    }
  }
  RecoveredParams out;
  out.state.frequency = theta_prev;
  const double c = w[Component::cos];
  const double s = w[Component::sin];
  const double a = std::hypot(c, s);
  if (!(a > amplitude_floor) || a == 0.0) return out;

  const double d = w[Component::n_cos];
  const double t = w[Component::n_sin];
  out.state.amplitude = a;
  out.state.phase = wrap_phase(std::atan2(-s, c));
  out.state.amplitude_slope = (d * c + s * t) / a;
  out.delta_theta = (d * s - t * c) / (a * a);
  if (order == ModelOrder::second) {
    const double f = w[Component::n2_cos];
    const double u = w[Component::n2_sin];
    out.state.amplitude_curvature = (f * c + s * u) / a;
    out.state.quadratic_phase = (f * s - u * c) / (a * a);
  }
  return out;
}

// ---------------------------------------------------------------------------

BasisSet::BasisSet(std::span<const double> seeds, const TimeGrid& grid,
                   const Window& window, ModelOrder order, OpCounter* ops)
    : order_(order), layout_(grid.size()), seeds_(seeds.begin(), seeds.end()) {
  if (window.size() != grid.size()) {
    throw Error(ErrorKind::invalid_argument, "basis: grid and window lengths differ");
  }
  for (double theta : seeds_) {
    if (!(theta > 0.0 && theta < kPi)) {
      throw Error(ErrorKind::invalid_frequency,
                  "seed " + std::to_string(theta) + " outside (0, pi)");
    }
  }

  const std::size_t L = grid.size();
  const std::size_t pairs = layout_.odd_size();  // right-half samples with n > 0
  const std::size_t offset = layout_.has_centre() ? 1 : 0;
  const std::size_t ncomp = components_per_sinusoid(order);

  // Per-frame constants: right-half time indices, sqrt(2)-scaled window and
  // the window energies sum h^2 n^(2p), which give the norm of one column of
  // each cos/sin pair from the other.
  std::vector<double> n(pairs), hw(pairs);
  std::array<double, 3> energy{};
  for (std::size_t j = 0; j < pairs; ++j) {
    const std::size_t i = layout_.right_index(Parity::odd, j);
    n[j] = grid[i];
    hw[j] = std::numbers::sqrt2 * window[i];
    const double h2 = window[i] * window[i];
    const double n2 = n[j] * n[j];
    energy[0] += 2.0 * h2;
    energy[1] += 2.0 * h2 * n2;
    energy[2] += 2.0 * h2 * n2 * n2;
  }
  const double h0 = layout_.has_centre() ? window[L / 2] : 0.0;
  energy[0] += h0 * h0;
  count_mul(ops, 6 * pairs);
  count_add(ops, 3 * pairs);

  halves_.resize(seeds_.size() * ncomp);
  norms_.resize(seeds_.size() * ncomp);

  for (std::size_t k = 0; k < seeds_.size(); ++k) {
    const double theta = seeds_[k];
    std::array<std::vector<double>*, 6> col{};
    for (Component c : components(order)) {
      auto& v = halves_[slot(k, c)];
      v.assign(layout_.size(parity_of(c)), 0.0);
      col[static_cast<std::size_t>(c)] = &v;
    }
    auto& cc = *col[0];
    auto& ss = *col[1];
    auto& dd = *col[2];
    auto& tt = *col[3];
    if (layout_.has_centre()) cc[0] = h0;

    for (std::size_t j = 0; j < pairs; ++j) {
      const double arg = theta * n[j];
      const double hc = hw[j] * std::cos(arg);
      const double hs = hw[j] * std::sin(arg);
      cc[j + offset] = hc;
      ss[j] = hs;
      dd[j] = n[j] * hc;
      tt[j + offset] = n[j] * hs;
    }
    count_mul(ops, 5 * pairs);
    count_trig(ops, 2 * pairs);
    if (order == ModelOrder::second) {
      auto& ff = *col[4];
      auto& uu = *col[5];
      for (std::size_t j = 0; j < pairs; ++j) {
        ff[j + offset] = n[j] * dd[j];
        uu[j] = n[j] * tt[j + offset];
      }
      count_mul(ops, 2 * pairs);
    }

    // Norms: compute the even member of each pair directly and take the odd
    // member from the window energy, unless cancellation would make that
    // inaccurate.
    auto sum_sq = [&](const std::vector<double>& v) {
      double acc = 0.0;
      for (double x : v) acc += x * x;
      count_mul(ops, v.size());
      count_add(ops, v.size());
      return acc;
    };
    auto set_pair = [&](Component even_c, Component odd_c, double total) {
      const double e2 = sum_sq(*col[static_cast<std::size_t>(even_c)]);
      double o2 = total - e2;
      count_add(ops, 1);
      if (o2 < 1e-6 * total) o2 = sum_sq(*col[static_cast<std::size_t>(odd_c)]);
      norms_[slot(k, even_c)] = std::sqrt(e2);
      norms_[slot(k, odd_c)] = std::sqrt(o2);
    };
    set_pair(Component::cos, Component::sin, energy[0]);
    set_pair(Component::n_sin, Component::n_cos, energy[1]);
    if (order == ModelOrder::second) set_pair(Component::n2_cos, Component::n2_sin, energy[2]);

    for (Component c : components(order)) {
      const double nrm = norms_[slot(k, c)];
      if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw Error(ErrorKind::degenerate_basis,
                    "zero-norm basis column at seed " + std::to_string(theta));
      }
      const double inv = 1.0 / nrm;
      for (double& x : halves_[slot(k, c)]) x *= inv;
      count_mul(ops, pairs);
    }
  }
}

std::size_t BasisSet::slot(std::size_t k, Component c) const {
  const std::size_t ncomp = components_per_sinusoid(order_);
  const auto ci = static_cast<std::size_t>(c);
  if (k >= seeds_.size() || ci >= ncomp) {
    throw Error(ErrorKind::invalid_argument, "basis column index out of range");
  }
  return k * ncomp + ci;
}

std::span<const double> BasisSet::half(std::size_t k, Component c) const {
  return halves_[slot(k, c)];
}

double BasisSet::norm(std::size_t k, Component c) const { return norms_[slot(k, c)]; }

std::vector<double> BasisSet::column(std::size_t k, Component c) const {
  std::vector<double> even(layout_.even_size(), 0.0), odd(layout_.odd_size(), 0.0);
  const auto h = half(k, c);
  if (parity_of(c) == Parity::even) {
    std::copy(h.begin(), h.end(), even.begin());
  } else {
    std::copy(h.begin(), h.end(), odd.begin());
  }
  std::vector<double> full(layout_.length());
  layout_.merge(even, odd, full);
  return full;
}

LinearCoeffs BasisSet::to_physical(std::size_t k, const LinearCoeffs& normalised) const {
  LinearCoeffs out;
  for (Component c : components(order_)) out[c] = normalised[c] / norm(k, c);
  return out;
}

LinearCoeffs BasisSet::to_normalised(std::size_t k, const LinearCoeffs& physical) const {
  LinearCoeffs out;
  for (Component c : components(order_)) out[c] = physical[c] * norm(k, c);
  return out;
}

BasisSet build_basis(std::span<const double> seeds, const TimeGrid& grid,
                     const Window& window, ModelOrder order, OpCounter* ops) {
  return BasisSet(seeds, grid, window, order, ops);
}

// ---------------------------------------------------------------------------

std::vector<double> synthesize_exact(std::span<const SinusoidState> states,
                                     const TimeGrid& grid, const Window& window,
                                     ModelOrder order) {
  if (window.size() != grid.size()) {
    throw Error(ErrorKind::invalid_argument, "synthesis: grid and window lengths differ");
  }
  const bool second = order == ModelOrder::second;
  std::vector<double> out(grid.size(), 0.0);
  for (const auto& s : states) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double n = grid[i];
      double amp = s.amplitude + s.amplitude_slope * n;
      double arg = s.frequency * n + s.phase;
      if (second) {
        amp += s.amplitude_curvature * n * n;
        arg += s.quadratic_phase * n * n;
      }
      out[i] += amp * std::cos(arg);
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= window[i];
  return out;
}

std::vector<double> synthesize_linearised(std::span<const LinearCoeffs> coeffs,
                                          const BasisSet& basis) {
  if (coeffs.size() != basis.sinusoids()) {
    throw Error(ErrorKind::invalid_argument,
                "linearised synthesis: " + std::to_string(coeffs.size()) +
                    " coefficient sets for " + std::to_string(basis.sinusoids()) +
                    " sinusoids");
  }
  const ParityLayout& layout = basis.layout();
  std::vector<double> even(layout.even_size(), 0.0), odd(layout.odd_size(), 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (Component c : components(basis.order())) {
      auto& dst = parity_of(c) == Parity::even ? even : odd;
      const auto col = basis.half(k, c);
      const double w = coeffs[k][c];
      for (std::size_t j = 0; j < col.size(); ++j) dst[j] += w * col[j];
    }
  }
  std::vector<double> out(layout.length());
  layout.merge(even, odd, out);
  return out;
}

double linearisation_error(const SinusoidState& state, double delta_theta,
                           const TimeGrid& grid, const Window& window, ModelOrder order) {
  SinusoidState shifted = state;
  shifted.frequency = state.frequency + delta_theta;
  const std::vector<double> exact =
      synthesize_exact(std::span<const SinusoidState>(&shifted, 1), grid, window, order);
  const LinearCoeffs w = coeffs_from_params(state, delta_theta, order);

  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double n = grid[i];
    const double cs = std::cos(state.frequency * n);
    const double sn = std::sin(state.frequency * n);
    double lin = w[Component::cos] * cs + w[Component::sin] * sn +
                 n * (w[Component::n_cos] * cs + w[Component::n_sin] * sn);
    if (order == ModelOrder::second) {
      lin += n * n * (w[Component::n2_cos] * cs + w[Component::n2_sin] * sn);
    }
    const double diff = exact[i] - window[i] * lin;
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(grid.size()));
}

}  // namespace sinest
