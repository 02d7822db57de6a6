#pragma once

// Least-squares solvers for the linearised sinusoidal model: a dense direct
// solve (oracle), a Jacobi reference, the Gauss-Seidel sweep and the
// linear/non-linear estimators built on it.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sinest/model.hpp"
#include "sinest/op_counter.hpp"

namespace sinest {

struct SolverConfig {
  ModelOrder order = ModelOrder::first;
  int iterations = 3;
  double alpha = 1.0;
  /// Maximum distance of an estimate from its seed; defaults to one DFT bin.
  std::optional<double> clamp_halfwidth;
  bool count_ops = false;
  /// Stop early once a sweep improves the residual energy by less than this
  /// relative amount. Zero runs exactly `iterations` sweeps.
  double stop_tolerance = 0.0;

  void validate() const;
  double halfwidth(std::size_t frame_length) const;
};

using CoeffVector = std::vector<LinearCoeffs>;

/// Residual e = x_h - A w, held as its half-length even and odd parts.
class ResidualState {
 public:
  ResidualState(const ParityLayout& layout, std::span<const double> full,
                OpCounter* ops = nullptr);

  std::span<double> part(Parity p) noexcept { return p == Parity::even ? even_ : odd_; }
  std::span<const double> part(Parity p) const noexcept {
    return p == Parity::even ? even_ : odd_;
  }
  std::vector<double> full() const;
  double energy() const noexcept;
  double rms() const noexcept;

 private:
  ParityLayout layout_;
  std::vector<double> even_;
  std::vector<double> odd_;
};

struct SplitSignal {
  std::vector<double> even;
  std::vector<double> odd;
};

SplitSignal split_even_odd(std::span<const double> signal, const TimeGrid& grid);

struct SweepStep {
  std::size_t sinusoid;
  Component component;
};

/// cos, sin, n_sin, n_cos, n2_cos, n2_sin groups; ascending seed frequency
/// inside each group (ties keep input order).
std::vector<SweepStep> standard_sweep_order(const BasisSet& basis);

/// One Gauss-Seidel pass: each step projects the residual onto one unit
/// column and removes that projection. `w` holds normalised coefficients.
void gauss_seidel_sweep(const BasisSet& basis, ResidualState& residual, CoeffVector& w,
                        OpCounter* ops = nullptr);
void gauss_seidel_sweep(const BasisSet& basis, ResidualState& residual, CoeffVector& w,
                        std::span<const SweepStep> order, OpCounter* ops = nullptr);

/// Dense column matrix of a basis (L x K, natural component order per sinusoid).
Eigen::MatrixXd basis_matrix(const BasisSet& basis);

struct NormalSystem {
  Eigen::MatrixXd gram;  // A^T A
  Eigen::VectorXd rhs;   // A^T x_h
};

NormalSystem normal_system(const BasisSet& basis, std::span<const double> x_h);

struct DirectSolution {
  CoeffVector coeffs;  // normalised
  double condition_estimate = 1.0;
};

/// Exact minimiser of |A w - x_h|. Throws ill-conditioned when the pivot
/// ratio of the LDL^T factorisation exceeds 1e12.
DirectSolution direct_ls_solve(const BasisSet& basis, std::span<const double> x_h);

/// `sweeps` Jacobi iterations from w = 0 (the first gives A^T x_h). Convergence
/// is not guaranteed; throws diverged once the residual norm exceeds ten times
/// |x_h|.
CoeffVector jacobi_solve(const BasisSet& basis, std::span<const double> x_h, int sweeps);

/// Clamp to [seed - halfwidth, seed + halfwidth], then into the open (0, pi).
double clamp_frequency(double theta, double seed, double halfwidth);

struct SinusoidEstimate {
  SinusoidState state;  // frequency is the seed
  double delta_theta = 0.0;

  double refined_frequency() const noexcept { return state.frequency + delta_theta; }
};

struct LinearEstimate {
  std::vector<SinusoidEstimate> sinusoids;
  std::vector<double> residual;            // windowed, full length
  std::vector<double> residual_rms_trace;  // after each sweep
  OpCounter ops;
};

/// Gauss-Seidel on a fixed basis built at the seeds. `x` is the unwindowed frame.
LinearEstimate linear_estimate(std::span<const double> x, std::span<const double> seeds,
                               const Window& window, const SolverConfig& config);

struct IterationRecord {
  std::vector<double> frequencies;
  double residual_rms = 0.0;
};

struct NonlinearEstimate {
  std::vector<SinusoidState> sinusoids;
  std::vector<double> residual;
  std::vector<IterationRecord> history;
  OpCounter ops;
};

/// Outer loop that re-centres each frequency after every Gauss-Seidel sweep.
NonlinearEstimate nonlinear_estimate(std::span<const double> x,
                                     std::span<const double> seeds, const Window& window,
                                     const SolverConfig& config);

}  // namespace sinest
