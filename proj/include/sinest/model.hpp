#pragma once

// Windowing, centred time indexing, the linearised basis and the map between
// linear coefficients and explicit sinusoid parameters.
//
// Frequencies are normalised angular frequencies in rad/sample throughout.
// The time origin n = 0 sits in the middle of the frame, so for even L every
// time index is a half-integer and each basis column is exactly even or odd.

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "sinest/op_counter.hpp"

namespace sinest {

inline constexpr double kPi = std::numbers::pi;

enum class ModelOrder : int { first = 1, second = 2 };

std::size_t components_per_sinusoid(ModelOrder order) noexcept;
ModelOrder model_order_from_int(int order);

/// Basis column kinds. The time power is 0 for cos/sin, 1 for n_cos/n_sin and
/// 2 for n2_cos/n2_sin.
enum class Component : std::uint8_t { cos, sin, n_cos, n_sin, n2_cos, n2_sin };

enum class Parity : std::uint8_t { even, odd };

constexpr Parity parity_of(Component c) noexcept {
  switch (c) {
    case Component::cos:
    case Component::n_sin:
    case Component::n2_cos:
      return Parity::even;
    default:
      return Parity::odd;
  }
}

constexpr int time_power(Component c) noexcept {
  return static_cast<int>(c) / 2;
}

/// Components of a model in natural order (cos, sin, n_cos, n_sin[, n2_cos, n2_sin]).
std::span<const Component> components(ModelOrder order) noexcept;

class TimeGrid {
 public:
  explicit TimeGrid(std::size_t length);

  std::size_t size() const noexcept { return n_.size(); }
  double operator[](std::size_t i) const noexcept { return n_[i]; }
  std::span<const double> values() const noexcept { return n_; }

 private:
  std::vector<double> n_;
};

/// n[i] = i - (L-1)/2. Throws invalid-argument for L < 2.
TimeGrid make_time_grid(std::size_t length);

class Window {
 public:
  explicit Window(std::vector<double> weights);

  std::size_t size() const noexcept { return h_.size(); }
  double operator[](std::size_t i) const noexcept { return h_[i]; }
  std::span<const double> values() const noexcept { return h_; }

  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::vector<double> h_;
};

/// h(n) = cos(pi n / L) on the centred grid. Throws invalid-argument for L < 2.
Window make_sine_window(std::size_t length);

/// Maps a length-L signal onto half-length even and odd parts and back.
///
/// For right-half sample i with mirror m = L-1-i:
///   even = (x[i] + x[m]) / sqrt(2),  odd = (x[i] - x[m]) / sqrt(2).
/// For odd L the centre sample is stored unscaled at even[0]. The map is
/// orthonormal, so norms and inner products are preserved.
class ParityLayout {
 public:
  explicit ParityLayout(std::size_t length);

  std::size_t length() const noexcept { return length_; }
  std::size_t even_size() const noexcept { return length_ / 2 + (length_ % 2); }
  std::size_t odd_size() const noexcept { return length_ / 2; }
  std::size_t size(Parity p) const noexcept {
    return p == Parity::even ? even_size() : odd_size();
  }
  bool has_centre() const noexcept { return length_ % 2 == 1; }

  /// Full-signal index of the right-half sample backing half index j.
  std::size_t right_index(Parity p, std::size_t j) const noexcept;

  void split(std::span<const double> x, std::span<double> even,
             std::span<double> odd) const;
  void merge(std::span<const double> even, std::span<const double> odd,
             std::span<double> x) const;

 private:
  std::size_t length_;
};

/// One sinusoid's explicit parameters.
///
/// The modelled frame is
///   h(n) (A + A' n + A'' n^2) cos((theta + q n) n + phi)
/// with q = quadratic_phase. The instantaneous frequency therefore moves at
/// 2 q rad/sample^2; see frequency_slope().
struct SinusoidState {
  double amplitude = 0.0;
  double frequency = 0.0;  // rad/sample
  double phase = 0.0;      // rad, in (-pi, pi]
  double amplitude_slope = 0.0;
  double amplitude_curvature = 0.0;  // second order only
  double quadratic_phase = 0.0;      // second order only
};

inline double frequency_slope(const SinusoidState& s) noexcept {
  return 2.0 * s.quadratic_phase;
}

/// Linear coefficients of one sinusoid, indexed by Component.
struct LinearCoeffs {
  std::array<double, 6> values{};

  double& operator[](Component c) noexcept { return values[static_cast<std::size_t>(c)]; }
  double operator[](Component c) const noexcept {
    return values[static_cast<std::size_t>(c)];
  }
};

/// Forward map with the frequency correction taken as zero (the frequency
/// has just been updated). Throws invalid-argument for an invalid state.
LinearCoeffs coeffs_from_params(const SinusoidState& state, ModelOrder order);

/// Forward map including a frequency correction delta_theta around
/// state.frequency, i.e. the full first/second order expansion.
LinearCoeffs coeffs_from_params(const SinusoidState& state, double delta_theta,
                                ModelOrder order);

struct RecoveredParams {
  SinusoidState state;  // frequency is left at theta_prev
  double delta_theta = 0.0;
};

/// Inverse map. Amplitudes at or below amplitude_floor are reported as a
/// silent component (A = 0, phi = 0, delta_theta = 0, no slopes).
RecoveredParams params_from_coeffs(const LinearCoeffs& coeffs, double theta_prev,
                                   ModelOrder order, double amplitude_floor = 0.0);

/// Windowed basis columns for a set of seed frequencies.
///
/// Columns are kept in parity-half form (see ParityLayout) and scaled to unit
/// Euclidean norm; the raw norms are retained so that solver coefficients can
/// be taken back to the physical scale (physical = normalised / norm).
class BasisSet {
 public:
  BasisSet(std::span<const double> seeds, const TimeGrid& grid, const Window& window,
           ModelOrder order, OpCounter* ops = nullptr);

  std::size_t sinusoids() const noexcept { return seeds_.size(); }
  std::size_t length() const noexcept { return layout_.length(); }
  ModelOrder order() const noexcept { return order_; }
  const ParityLayout& layout() const noexcept { return layout_; }
  std::span<const double> seeds() const noexcept { return seeds_; }

  /// Unit-norm parity half of a column.
  std::span<const double> half(std::size_t k, Component c) const;
  /// Unit-norm column expanded to the full frame.
  std::vector<double> column(std::size_t k, Component c) const;
  /// Euclidean norm of the column before normalisation.
  double norm(std::size_t k, Component c) const;

  /// Physical <-> normalised coefficient scaling for sinusoid k.
  LinearCoeffs to_physical(std::size_t k, const LinearCoeffs& normalised) const;
  LinearCoeffs to_normalised(std::size_t k, const LinearCoeffs& physical) const;

 private:
  std::size_t slot(std::size_t k, Component c) const;

  ModelOrder order_;
  ParityLayout layout_;
  std::vector<double> seeds_;
  std::vector<std::vector<double>> halves_;
  std::vector<double> norms_;
};

BasisSet build_basis(std::span<const double> seeds, const TimeGrid& grid,
                     const Window& window, ModelOrder order, OpCounter* ops = nullptr);

/// Windowed sum of the exact modulated sinusoids. For ModelOrder::first the
/// curvature and quadratic phase terms are ignored.
std::vector<double> synthesize_exact(std::span<const SinusoidState> states,
                                     const TimeGrid& grid, const Window& window,
                                     ModelOrder order);

/// Sum of normalised basis columns weighted by normalised coefficients.
std::vector<double> synthesize_linearised(std::span<const LinearCoeffs> coeffs,
                                          const BasisSet& basis);

/// RMS gap between the exact model at state.frequency + delta_theta and its
/// linearisation around state.frequency.
double linearisation_error(const SinusoidState& state, double delta_theta,
                           const TimeGrid& grid, const Window& window, ModelOrder order);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double phi) noexcept;

}  // namespace sinest
