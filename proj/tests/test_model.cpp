#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sinest/error.hpp"
#include "sinest/model.hpp"

using namespace sinest;

#define CHECK_THROWS_KIND(expr, k)                              \
  do {                                                          \
    try {                                                       \
      (void)(expr);                                             \
      FAIL("no exception");                                     \
    } catch (const ::sinest::Error& e) {                        \
      CHECK(e.kind() == (k));                                   \
    }                                                           \
  } while (0)

namespace {

constexpr Component kAll[] = {Component::cos,    Component::sin,    Component::n_cos,
                              Component::n_sin,  Component::n2_cos, Component::n2_sin};

double fdot(const std::vector<double>& a, const std::vector<double>& b) { return oracle::dot(a, b); }

}  // namespace

TEST_CASE("time grid is centred and unit spaced") {
  const auto g4 = make_time_grid(4);
  CHECK(g4[0] == -1.5);
  CHECK(g4[1] == -0.5);
  CHECK(g4[2] == 0.5);
  CHECK(g4[3] == 1.5);
  const auto g5 = make_time_grid(5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(g5[i] == static_cast<double>(i) - 2.0);
  const auto g = make_time_grid(256);
  CHECK(g[0] == -127.5);
  CHECK(g[255] == 127.5);
  for (std::size_t i = 0; i < 256; ++i) CHECK(g[i] == -g[255 - i]);
  CHECK_THROWS_KIND(make_time_grid(1), ErrorKind::invalid_argument);
}

TEST_CASE("sine window values") {
  const auto w = make_sine_window(256);
  CHECK(w[0] == doctest::Approx(std::sin(kPi / 512)).epsilon(1e-15));
  CHECK(w[127] == w[128]);
  const auto w2 = make_sine_window(2);
  CHECK(w2[0] == doctest::Approx(std::cos(kPi / 4)));
  CHECK(w2[1] == doctest::Approx(std::cos(kPi / 4)));
  CHECK_THROWS_KIND(make_sine_window(0), ErrorKind::invalid_argument);

  for (std::size_t L : {2u, 3u, 7u, 64u, 255u, 256u, 1024u}) {
    const auto win = make_sine_window(L);
    for (std::size_t i = 0; i < L; ++i) {
      CHECK(std::abs(win[i] - oracle::sine_window(i + 1, L)) <= 1e-15);
      CHECK(win[i] == win[L - 1 - i]);
      CHECK(win[i] > 0.0);
      CHECK(win[i] <= 1.0);
    }
  }
}

TEST_CASE("parity layout is an orthonormal split") {
  for (std::size_t L : {2u, 5u, 16u, 255u, 256u}) {
    const ParityLayout layout(L);
    const auto x = oracle::random_signal(L, L);
    std::vector<double> even(layout.even_size()), odd(layout.odd_size()), back(L);
    layout.split(x, even, odd);
    CHECK(std::abs(fdot(x, x) - (fdot(even, even) + fdot(odd, odd))) <= 1e-12 * fdot(x, x));
    layout.merge(even, odd, back);
    CHECK(oracle::max_abs_diff(x, back) <= 1e-15 * 8);
  }
  SUBCASE("even input has a zero odd half") {
    const ParityLayout layout(8);
    const std::vector<double> x{1, 2, 3, 4, 4, 3, 2, 1};
    std::vector<double> even(4), odd(4);
    layout.split(x, even, odd);
    for (double v : odd) CHECK(v == 0.0);
  }
}

TEST_CASE("basis columns are unit norm and match direct evaluation") {
  const std::size_t L = 256;
  const auto grid = make_time_grid(L);
  const auto win = make_sine_window(L);
  const double seeds[] = {0.1 * kPi, 0.37, 2.9};
  const auto basis = build_basis(seeds, grid, win, ModelOrder::second);
  CHECK(basis.sinusoids() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    for (Component c : kAll) {
      const auto col = basis.column(k, c);
      CHECK(oracle::norm(col) == doctest::Approx(1.0).epsilon(1e-13));
      const auto raw = oracle::raw_column(seeds[k], time_power(c),
                                          c == Component::sin || c == Component::n_sin ||
                                              c == Component::n2_sin,
                                          L);
      CHECK(basis.norm(k, c) == doctest::Approx(oracle::norm(raw)).epsilon(1e-12));
      std::vector<double> scaled(col);
      for (double& v : scaled) v *= basis.norm(k, c);
      CHECK(oracle::max_abs_diff(scaled, raw) <= 1e-12 * oracle::norm(raw));
    }
  }
}

TEST_CASE("basis columns have exact parity") {
  const auto grid = make_time_grid(101);
  const auto win = make_sine_window(101);
  const double seed = 1.3;
  const auto basis = build_basis(std::span<const double>(&seed, 1), grid, win, ModelOrder::second);
  for (Component c : kAll) {
    const auto col = basis.column(0, c);
    const double sign = parity_of(c) == Parity::even ? 1.0 : -1.0;
    for (std::size_t i = 0; i < col.size(); ++i) CHECK(col[i] == sign * col[col.size() - 1 - i]);
  }
  CHECK(parity_of(Component::cos) == Parity::even);
  CHECK(parity_of(Component::n_sin) == Parity::even);
  CHECK(parity_of(Component::n2_cos) == Parity::even);
  CHECK(parity_of(Component::sin) == Parity::odd);
  CHECK(parity_of(Component::n_cos) == Parity::odd);
  CHECK(parity_of(Component::n2_sin) == Parity::odd);
}

TEST_CASE("cross-parity pairs of one sinusoid are orthogonal") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> theta(0.01, kPi - 0.01);
  for (std::size_t L : {4u, 5u, 17u, 64u, 255u, 256u, 512u}) {
    const auto grid = make_time_grid(L);
    const auto win = make_sine_window(L);
    for (int trial = 0; trial < 20; ++trial) {
      const double seed = theta(rng);
      const auto b = build_basis(std::span<const double>(&seed, 1), grid, win, ModelOrder::first);
      const auto c = b.column(0, Component::cos), s = b.column(0, Component::sin);
      const auto d = b.column(0, Component::n_cos), t = b.column(0, Component::n_sin);
      CHECK(std::abs(fdot(c, s)) <= 1e-12);
      CHECK(std::abs(fdot(c, d)) <= 1e-12);
      CHECK(std::abs(fdot(t, s)) <= 1e-12);
      CHECK(std::abs(fdot(t, d)) <= 1e-12);
    }
  }
}

TEST_CASE("cos/n-sin inner product agrees with an independent sum") {
  const std::size_t L = 256;
  const double seed = 0.1 * kPi;
  const auto b = build_basis(std::span<const double>(&seed, 1), make_time_grid(L),
                             make_sine_window(L), ModelOrder::first);
  const double lib = fdot(b.column(0, Component::cos), b.column(0, Component::n_sin));
  const double ref = oracle::dot(oracle::normalised(oracle::raw_column(seed, 0, false, L)),
                                 oracle::normalised(oracle::raw_column(seed, 1, true, L)));
  CHECK(std::abs(lib - ref) <= 1e-12);
  CHECK(std::abs(ref) > 1e-6);
}

TEST_CASE("basis construction errors") {
  const auto grid = make_time_grid(16);
  const auto win = make_sine_window(16);
  for (double bad : {0.0, -0.1, kPi, 4.0, std::nan("")}) {
    CHECK_THROWS_KIND(build_basis(std::span<const double>(&bad, 1), grid, win, ModelOrder::first),
                      ErrorKind::invalid_frequency);
  }
  const double ok = 1.0;
  CHECK_THROWS_KIND(build_basis(std::span<const double>(&ok, 1), grid, make_sine_window(8),
                                ModelOrder::first),
                    ErrorKind::invalid_argument);
}

TEST_CASE("coeffs_from_params examples") {
  SinusoidState s{1.0, 0.5, 0.0, 0.0};
  auto w = coeffs_from_params(s, ModelOrder::first);
  CHECK(w[Component::cos] == 1.0);
  CHECK(w[Component::sin] == doctest::Approx(0.0));
  CHECK(w[Component::n_cos] == 0.0);
  CHECK(w[Component::n_sin] == doctest::Approx(0.0));

  s.phase = kPi / 2;
  w = coeffs_from_params(s, ModelOrder::first);
  CHECK(std::abs(w[Component::cos]) < 1e-15);
  CHECK(w[Component::sin] == doctest::Approx(-1.0));

  s = {2.0, 0.5, kPi / 3, 0.1};
  w = coeffs_from_params(s, ModelOrder::first);
  CHECK(w[Component::cos] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w[Component::sin] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));
  CHECK(w[Component::n_cos] == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(w[Component::n_sin] == doctest::Approx(-0.05 * std::sqrt(3.0)).epsilon(1e-14));

  SUBCASE("second order terms") {
    SinusoidState q{1.5, 1.0, 0.4, 0.01, 0.002, 3e-4};
    const auto w2 = coeffs_from_params(q, ModelOrder::second);
    CHECK(w2[Component::n2_cos] ==
          doctest::Approx(0.002 * std::cos(0.4) - 1.5 * 3e-4 * std::sin(0.4)).epsilon(1e-14));
    CHECK(w2[Component::n2_sin] ==
          doctest::Approx(-0.002 * std::sin(0.4) - 1.5 * 3e-4 * std::cos(0.4)).epsilon(1e-14));
  }

  SUBCASE("invalid states") {
    CHECK_THROWS_KIND(coeffs_from_params(SinusoidState{-1.0, 0.5, 0.0, 0.0}, ModelOrder::first),
                      ErrorKind::invalid_argument);
    CHECK_THROWS_KIND(coeffs_from_params(SinusoidState{1.0, 0.0, 0.0, 0.0}, ModelOrder::first),
                      ErrorKind::invalid_frequency);
    CHECK_THROWS_KIND(
        coeffs_from_params(SinusoidState{1.0, 0.5, std::nan(""), 0.0}, ModelOrder::first),
        ErrorKind::invalid_argument);
  }
}

TEST_CASE("params_from_coeffs examples") {
  LinearCoeffs w;
  w[Component::cos] = 1.0;
  auto r = params_from_coeffs(w, 0.5, ModelOrder::first);
  CHECK(r.state.amplitude == 1.0);
  CHECK(r.state.phase == 0.0);
  CHECK(r.state.amplitude_slope == 0.0);
  CHECK(r.delta_theta == 0.0);
  CHECK(r.state.frequency == 0.5);

  w[Component::n_sin] = -0.01;
  r = params_from_coeffs(w, 0.5, ModelOrder::first);
  CHECK(r.delta_theta == doctest::Approx(0.01).epsilon(1e-15));

  SUBCASE("amplitude floor gives a silent component") {
    LinearCoeffs tiny;
    tiny[Component::cos] = 1e-14;
    tiny[Component::n_sin] = 1e-14;
    const auto z = params_from_coeffs(tiny, 0.5, ModelOrder::first, 1e-12);
    CHECK(z.state.amplitude == 0.0);
    CHECK(z.state.phase == 0.0);
    CHECK(z.delta_theta == 0.0);
    const auto zero = params_from_coeffs(LinearCoeffs{}, 0.5, ModelOrder::second);
    CHECK(zero.state.amplitude == 0.0);
    CHECK(std::isfinite(zero.delta_theta));
  }
}

TEST_CASE("parameter/coefficient round trip over random states") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> amp(0.01, 10.0), ph(-kPi + 1e-9, kPi),
      th(0.01, kPi - 0.01), slope(-0.05, 0.05), curv(-1e-3, 1e-3), chirp(-1e-4, 1e-4);
  for (int i = 0; i < 1000; ++i) {
    const SinusoidState s{amp(rng), th(rng), ph(rng), slope(rng), curv(rng), chirp(rng)};
    for (ModelOrder order : {ModelOrder::first, ModelOrder::second}) {
      const auto r = params_from_coeffs(coeffs_from_params(s, order), s.frequency, order);
      CHECK(std::abs(r.state.amplitude - s.amplitude) <= 1e-12 * s.amplitude);
      CHECK(std::abs(wrap_phase(r.state.phase - s.phase)) <= 1e-12);
      CHECK(std::abs(r.state.amplitude_slope - s.amplitude_slope) <= 1e-12 * s.amplitude);
      CHECK(std::abs(r.delta_theta) <= 1e-12);
      if (order == ModelOrder::second) {
        CHECK(std::abs(r.state.amplitude_curvature - s.amplitude_curvature) <=
              1e-12 * s.amplitude);
        CHECK(std::abs(r.state.quadratic_phase - s.quadratic_phase) <= 1e-12);
      }
    }
  }
}

TEST_CASE("frequency correction survives the round trip") {
  const SinusoidState s{1.7, 0.8, -2.0, 0.02};
  for (double dt : {1e-3, -4e-4, 0.0}) {
    const auto r = params_from_coeffs(coeffs_from_params(s, dt, ModelOrder::first), s.frequency,
                                      ModelOrder::first);
    CHECK(r.delta_theta == doctest::Approx(dt).epsilon(1e-12).scale(1e-15));
  }
}

TEST_CASE("exact synthesis") {
  const std::size_t L = 64;
  const auto grid = make_time_grid(L);
  const auto win = make_sine_window(L);
  CHECK(synthesize_exact({}, grid, win, ModelOrder::first) == std::vector<double>(L, 0.0));

  const SinusoidState a{1.0, 0.1 * kPi, 0.0, 0.0};
  const auto one = synthesize_exact(std::span<const SinusoidState>(&a, 1), grid, win,
                                    ModelOrder::first);
  for (std::size_t i = 0; i < L; ++i) {
    CHECK(one[i] == doctest::Approx(oracle::sine_window(i + 1, L) *
                                    std::cos(0.1 * kPi * oracle::centred_n(i, L))));
  }

  const SinusoidState b{0.3, 2.0, 1.0, 0.01, 1e-4, 2e-4};
  const SinusoidState both[] = {a, b};
  for (ModelOrder order : {ModelOrder::first, ModelOrder::second}) {
    const auto sum = synthesize_exact(both, grid, win, order);
    const auto sa = synthesize_exact(std::span<const SinusoidState>(&a, 1), grid, win, order);
    const auto sb = synthesize_exact(std::span<const SinusoidState>(&b, 1), grid, win, order);
    for (std::size_t i = 0; i < L; ++i) CHECK(std::abs(sum[i] - (sa[i] + sb[i])) <= 1e-15);
  }
}

TEST_CASE("linearised synthesis") {
  const std::size_t L = 32;
  const double seeds[] = {0.5, 1.5};
  const auto basis = build_basis(seeds, make_time_grid(L), make_sine_window(L), ModelOrder::first);
  std::vector<LinearCoeffs> w(2);
  CHECK(synthesize_linearised(w, basis) == std::vector<double>(L, 0.0));
  w[1][Component::n_cos] = 1.0;
  CHECK(oracle::max_abs_diff(synthesize_linearised(w, basis), basis.column(1, Component::n_cos)) <=
        1e-15);
  w.resize(1);
  CHECK_THROWS_KIND(synthesize_linearised(w, basis), ErrorKind::invalid_argument);
}

TEST_CASE("linearisation error is quadratic in the frequency offset") {
  const std::size_t L = 256;
  const auto grid = make_time_grid(L);
  const auto win = make_sine_window(L);
  const SinusoidState s{1.0, 0.3, 0.7, 0.0};
  CHECK(linearisation_error(s, 0.0, grid, win, ModelOrder::first) <= 1e-15);

  const double e1 = linearisation_error(s, 1e-3, grid, win, ModelOrder::first);
  const double e2 = linearisation_error(s, 1e-4, grid, win, ModelOrder::first);
  const double e3 = linearisation_error(s, 1e-5, grid, win, ModelOrder::first);
  const double slope = (std::log10(e1) - std::log10(e3)) / 2.0;
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK(e2 < e1);
  CHECK(e3 < e2);

  const double small = 2.0 * kPi / (100.0 * L);
  const double ratio = linearisation_error(s, small, grid, win, ModelOrder::first) /
                       linearisation_error(s, small / 2, grid, win, ModelOrder::first);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("order-2 frequency-slope error falls quadratically") {
  const std::size_t L = 256;
  const auto grid = make_time_grid(L);
  const auto win = make_sine_window(L);
  SinusoidState s{1.0, 0.3, 0.7, 0.0, 0.0, 1e-6};
  const double e1 = linearisation_error(s, 0.0, grid, win, ModelOrder::second);
  s.quadratic_phase /= 2;
  const double e2 = linearisation_error(s, 0.0, grid, win, ModelOrder::second);
  s.quadratic_phase /= 2;
  const double e3 = linearisation_error(s, 0.0, grid, win, ModelOrder::second);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("wrap_phase range") {
  CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_phase(0.25) == 0.25);
}
