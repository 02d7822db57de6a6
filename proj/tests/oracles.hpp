#pragma once

// Reference computations coded independently of the library: direct
// full-length sums, a dense Gaussian elimination and small helpers.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Centred index and sine window straight from the 1-based definitions.
inline double centred_n(std::size_t i, std::size_t L) {
  return static_cast<double>(i) - (static_cast<double>(L) - 1.0) / 2.0;
}
inline double sine_window(std::size_t m_one_based, std::size_t L) {
  return std::cos(pi * (static_cast<double>(m_one_based) - (static_cast<double>(L) + 1.0) / 2.0) /
                  static_cast<double>(L));
}

/// Raw (unnormalised) basis column: h(n) n^p cos or sin(theta n).
inline std::vector<double> raw_column(double theta, int power, bool sine, std::size_t L) {
  std::vector<double> col(L);
  for (std::size_t i = 0; i < L; ++i) {
    const double n = centred_n(i, L);
    const double carrier = sine ? std::sin(theta * n) : std::cos(theta * n);
    col[i] = sine_window(i + 1, L) * std::pow(n, power) * carrier;
  }
  return col;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
  }
  return static_cast<double>(acc);
}

inline double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline std::vector<double> normalised(std::vector<double> a) {
  const double n = norm(a);
  for (double& v : a) v /= n;
  return a;
}

/// Solves M x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> M, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    }
    if (M[piv][col] == 0.0) throw std::runtime_error("singular");
    std::swap(M[piv], M[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= M[r][c] * x[c];
    x[r] = acc / M[r][r];
  }
  return x;
}

/// Least squares over explicit columns via the normal equations.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& cols,
                                         const std::vector<double>& x) {
  const std::size_t k = cols.size();
  std::vector<std::vector<double>> G(k, std::vector<double>(k));
  std::vector<double> rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    rhs[i] = dot(cols[i], x);
    for (std::size_t j = 0; j < k; ++j) G[i][j] = dot(cols[i], cols[j]);
  }
  return gauss_solve(G, rhs);
}

inline std::vector<double> random_signal(std::size_t L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(L);
  for (double& v : x) v = g(rng);
  return x;
}

inline double rms(const std::vector<double>& a) {
  return a.empty() ? 0.0 : std::sqrt(dot(a, a) / static_cast<double>(a.size()));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
