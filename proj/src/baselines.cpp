#include "sinest/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "sinest/error.hpp"

namespace sinest {

void PeakPickConfig::validate() const {
  if (max_peaks < 1) throw Error(ErrorKind::invalid_argument, "max_peaks must be >= 1");
  if (min_separation < 1) {
    throw Error(ErrorKind::invalid_argument, "min_separation must be >= 1 bin");
  }
}

std::vector<double> dft_peak_pick(std::span<const double> x_h, const PeakPickConfig& config) {
  config.validate();
  const std::size_t L = x_h.size();
  if (L < 8) {
    throw Error(ErrorKind::invalid_argument, "peak picking needs at least 8 samples");
  }
  const std::size_t top = L / 2;

  // Direct DFT of bins 0..L/2 with an exact twiddle table.
  std::vector<std::complex<double>> twiddle(L);
  for (std::size_t i = 0; i < L; ++i) {
    twiddle[i] = std::polar(1.0, -2.0 * kPi * static_cast<double>(i) / static_cast<double>(L));
  }
  std::vector<double> mag(top + 1);
  for (std::size_t b = 0; b <= top; ++b) {
    std::complex<double> acc = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < L; ++i) {
      acc += x_h[i] * twiddle[idx];
      idx += b;
      if (idx >= L) idx -= L;
    }
    mag[b] = std::abs(acc);
  }

  // Bins at rounding level (|X_k| <= sum |x|) are treated as empty.
  double l1 = 0.0;
  for (double v : x_h) l1 += std::abs(v);
  const double floor = 1e-12 * l1;
  for (double& m : mag) {
    if (m <= floor) m = 0.0;
  }

  std::vector<std::size_t> candidates;
  for (std::size_t b = 1; b < top; ++b) {
    if (mag[b] > mag[b - 1] && mag[b] >= mag[b + 1]) candidates.push_back(b);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

  std::vector<std::size_t> chosen;
  for (std::size_t b : candidates) {
    if (chosen.size() >= config.max_peaks) break;
    const bool clear = std::none_of(chosen.begin(), chosen.end(), [&](std::size_t c) {
      const std::size_t gap = b > c ? b - c : c - b;
      return gap < config.min_separation;
    });
    if (clear) chosen.push_back(b);
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<double> seeds;
  seeds.reserve(chosen.size());
  for (std::size_t b : chosen) {
    seeds.push_back(2.0 * kPi * static_cast<double>(b) / static_cast<double>(L));
  }
  return seeds;
}

// ---------------------------------------------------------------------------

void MpConfig::validate() const {
  if (oversampling < 1 || (oversampling & (oversampling - 1)) != 0) {
    throw Error(ErrorKind::invalid_argument,
                "oversampling must be a power of two, got " + std::to_string(oversampling));
  }
}

std::vector<double> mp_dictionary(std::size_t frame_length, std::span<const double> seeds,
                                  const MpConfig& config) {
  config.validate();
  if (config.seeds_only) {
    std::vector<double> dict(seeds.begin(), seeds.end());
    std::sort(dict.begin(), dict.end());
    dict.erase(std::unique(dict.begin(), dict.end()), dict.end());
    return dict;
  }
  const double step = 2.0 * kPi / static_cast<double>(frame_length * config.oversampling);
  const long last = static_cast<long>(frame_length * config.oversampling / 2) - 1;
  std::vector<long> idx;
  if (seeds.empty() || !config.clamp_to_seeds) {
    idx.resize(static_cast<std::size_t>(std::max(last, 0L)));
    std::iota(idx.begin(), idx.end(), 1L);
  } else {
    const double bin = 2.0 * kPi / static_cast<double>(frame_length);
    for (double seed : seeds) {
      const long lo = std::max(1L, static_cast<long>(std::ceil((seed - bin) / step - 1e-9)));
      const long hi = std::min(last, static_cast<long>(std::floor((seed + bin) / step + 1e-9)));
      for (long j = lo; j <= hi; ++j) idx.push_back(j);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  }
  std::vector<double> dict(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) dict[i] = static_cast<double>(idx[i]) * step;
  return dict;
}

MpResult matching_pursuit(std::span<const double> x_h, std::span<const double> seeds,
                          const Window& window, const MpConfig& config, bool count_ops) {
  if (x_h.size() != window.size()) {
    throw Error(ErrorKind::invalid_argument, "matching pursuit: signal/window length mismatch");
  }
  const std::vector<double> dict = mp_dictionary(x_h.size(), seeds, config);
  if (dict.empty()) {
    throw Error(ErrorKind::invalid_argument, "matching pursuit dictionary is empty");
  }

  MpResult out;
  OpCounter* ops = count_ops ? &out.ops : nullptr;
  const TimeGrid grid(x_h.size());
  const ParityLayout layout(x_h.size());
  const std::size_t pairs = layout.odd_size();
  const std::size_t offset = layout.has_centre() ? 1 : 0;
  const std::size_t ne = layout.even_size();

  std::vector<double> n(pairs), hw(pairs);
  for (std::size_t j = 0; j < pairs; ++j) {
    const std::size_t i = layout.right_index(Parity::odd, j);
    n[j] = grid[i];
    hw[j] = std::numbers::sqrt2 * window[i];
  }
  const double h0 = layout.has_centre() ? window[x_h.size() / 2] : 0.0;

  // Unit-norm cos (even) and sin (odd) halves for every dictionary entry.
  const std::size_t m = dict.size();
  std::vector<double> cos_cols(m * ne), sin_cols(m * pairs), cos_norm(m), sin_norm(m);
  for (std::size_t a = 0; a < m; ++a) {
    double* cc = &cos_cols[a * ne];
    double* ss = &sin_cols[a * pairs];
    if (offset) cc[0] = h0;
    double nc = h0 * h0, ns = 0.0;
    for (std::size_t j = 0; j < pairs; ++j) {
      const double arg = dict[a] * n[j];
      cc[j + offset] = hw[j] * std::cos(arg);
      ss[j] = hw[j] * std::sin(arg);
      nc += cc[j + offset] * cc[j + offset];
      ns += ss[j] * ss[j];
    }
    count_trig(ops, 2 * pairs);
    count_mul(ops, 7 * pairs);
    count_add(ops, 2 * pairs);
    cos_norm[a] = std::sqrt(nc);
    sin_norm[a] = std::sqrt(ns);
    if (!(cos_norm[a] > 0.0) || !(sin_norm[a] > 0.0)) {
      throw Error(ErrorKind::degenerate_basis, "zero-norm dictionary atom");
    }
    for (std::size_t j = 0; j < ne; ++j) cc[j] /= cos_norm[a];
    for (std::size_t j = 0; j < pairs; ++j) ss[j] /= sin_norm[a];
    count_mul(ops, ne + pairs);
  }

  std::vector<double> e_even(ne), e_odd(pairs);
  layout.split(x_h, e_even, e_odd);
  auto energy = [&] {
    double acc = 0.0;
    for (double v : e_even) acc += v * v;
    for (double v : e_odd) acc += v * v;
    return acc;
  };
  out.residual_energy.push_back(energy());

  std::vector<double> wc(m, 0.0), ws(m, 0.0);
  std::vector<bool> picked(m, false);
  std::vector<std::size_t> first_pick;
  for (std::size_t step = 0; step < config.max_atoms; ++step) {
    std::size_t best = 0;
    double best_energy = -1.0, best_c = 0.0, best_s = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      const double* cc = &cos_cols[a * ne];
      const double* ss = &sin_cols[a * pairs];
      double pc = 0.0, ps = 0.0;
      for (std::size_t j = 0; j < ne; ++j) pc += cc[j] * e_even[j];
      for (std::size_t j = 0; j < pairs; ++j) ps += ss[j] * e_odd[j];
      const double captured = pc * pc + ps * ps;
      if (captured > best_energy) {
        best_energy = captured;
        best = a;
        best_c = pc;
        best_s = ps;
      }
    }
    count_mul(ops, m * (ne + pairs + 2));
    count_add(ops, m * (ne + pairs + 1));

    const double* cc = &cos_cols[best * ne];
    const double* ss = &sin_cols[best * pairs];
    for (std::size_t j = 0; j < ne; ++j) e_even[j] -= best_c * cc[j];
    for (std::size_t j = 0; j < pairs; ++j) e_odd[j] -= best_s * ss[j];
    count_mul(ops, ne + pairs);
    count_add(ops, ne + pairs);

    if (!picked[best]) {
      picked[best] = true;
      first_pick.push_back(best);
    }
    wc[best] += best_c;
    ws[best] += best_s;
    out.residual_energy.push_back(energy());
  }

  for (std::size_t a : first_pick) {
    const double c = wc[a] / cos_norm[a];
    const double s = ws[a] / sin_norm[a];
    SinusoidState atom;
    atom.frequency = dict[a];
    atom.amplitude = std::hypot(c, s);
    atom.phase = atom.amplitude > 0.0 ? wrap_phase(std::atan2(-s, c)) : 0.0;
    out.atoms.push_back(atom);
  }
  out.residual.resize(x_h.size());
  layout.merge(e_even, e_odd, out.residual);
  return out;
}

}  // namespace sinest
