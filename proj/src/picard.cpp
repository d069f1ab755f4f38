#include "b4ns/picard.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace b4ns {

namespace {

double pow4(double x) {
  double x2 = x * x;
  return x2 * x2;
}

// deterministic per-task stream
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t task) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (task + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return std::mt19937_64(z ^ (z >> 31));
}

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double resonance_omega(double xi_out, const std::vector<double>& xi_in,
                       const SignPattern& signs) {
  if (xi_in.size() != signs.signs.size())
    throw std::invalid_argument("resonance_omega: sign pattern length mismatch");
  double sum = 0.0, scale = std::fabs(xi_out);
  for (std::size_t j = 0; j < xi_in.size(); ++j) {
    sum += signs.signs[j] * xi_in[j];
    scale = std::max(scale, std::fabs(xi_in[j]));
  }
  if (std::fabs(xi_out - sum) > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("resonance_omega: constraint xi_out = sum(sign_j xi_j) violated");
  double omega = -pow4(xi_out);
  for (std::size_t j = 0; j < xi_in.size(); ++j) omega += signs.signs[j] * pow4(xi_in[j]);
  return omega;
}

std::pair<double, double> resonance_factorization_check(double x1, double x2, double x3) {
  double lhs = -pow4(x1 - x2 + x3) + pow4(x1) - pow4(x2) + pow4(x3);
  double rhs = 2.0 * (x1 - x2) * (x2 - x3) *
               (2 * x1 * x1 + x2 * x2 + 2 * x3 * x3 - x1 * x2 - x2 * x3 + 3 * x3 * x1);
  return {lhs, rhs};
}

cd oscillatory_weight(double omega, double t) {
  const double z = omega * t;
  if (std::fabs(z) < 1e-8) {
    // t * (1 + iz/2 - z^2/6 - iz^3/24)
    return t * cd{1.0 - z * z / 6.0, z / 2.0 - z * z * z / 24.0};
  }
  // cos(z)-1 written as -2 sin^2(z/2) to stay accurate across the seam
  double sh = std::sin(0.5 * z);
  cd num = cd{-2.0 * sh * sh, std::sin(z)};
  return num / cd{0.0, omega};
}

IterateResult third_iterate_cubic(double s, double N, double t, int band_nodes) {
  if (!(t >= 0)) throw std::invalid_argument("third_iterate_cubic: t must be >= 0");
  FrequencyBand band{N, 1.0 / N, band_nodes};
  band.validate();
  if (band_nodes < 16) throw std::invalid_argument("third_iterate_cubic: need >= 16 band nodes");

  const double lo = N - 1.0 / N, hi = N + 1.0 / N;
  const double h = (hi - lo) / band_nodes;  // input midpoint spacing
  const double amp = std::pow(N, -s + 0.5);

  IterateResult res;
  res.s = s;
  res.N = N;
  res.t = t;
  res.m = 3;
  res.d = 1;

  const double out_lo = N - 3.0 / N, out_hi = N + 3.0 / N;
  const double hout = h / 2.0;
  const int nout = int(std::lround((out_hi - out_lo) / hout));
  res.mesh.resize(nout);
  res.amp.assign(nout, cd{0.0, 0.0});

  const double conv_const = 1.0 / (2.0 * pi);  // (2pi)^{-d(m-1)/2}, d=1, m=3
  for (int io = 0; io < nout; ++io) {
    double xi = out_lo + (io + 0.5) * hout;
    res.mesh[io] = xi;
    cd acc{0.0, 0.0};
    for (int i1 = 0; i1 < band_nodes; ++i1) {
      double x1 = lo + (i1 + 0.5) * h;
      for (int i2 = 0; i2 < band_nodes; ++i2) {
        double x2 = lo + (i2 + 0.5) * h;
        double x3 = xi - x1 + x2;
        if (x3 < lo || x3 > hi) continue;
        // factorized phase is stable where the quartics cancel
        double omega = 2.0 * (x1 - x2) * (x2 - x3) *
                       (2 * x1 * x1 + x2 * x2 + 2 * x3 * x3 - x1 * x2 - x2 * x3 + 3 * x3 * x1);
        acc += oscillatory_weight(-omega, t);
      }
    }
    double ph = -t * pow4(xi);
    res.amp[io] = xi * conv_const * amp * amp * amp * h * h * acc * cd{std::cos(ph), std::sin(ph)};
  }

  double nsq = 0.0;
  for (int io = 0; io < nout; ++io)
    nsq += std::pow(1.0 + res.mesh[io] * res.mesh[io], s) * std::norm(res.amp[io]) * hout;
  res.hs_norm = std::sqrt(nsq);
  return res;
}

namespace {

struct PatternAccumulator {
  // one inner quadrature pass for a fixed output frequency and sign pattern;
  // d=1 only, recursion over the first m-1 input frequencies
  double N, t, gamp;
  int m, nodes;
  double h;
  const std::vector<int>* signs;

  cd sum = {0.0, 0.0};
  double xi_out = 0.0;

  void run(int depth, double partial_sign_sum, double partial_phase, double xis[]) {
    if (depth == m - 1) {
      int sm = (*signs)[m - 1];
      double xm = sm * (xi_out - partial_sign_sum);
      if (std::fabs(xm) > N) return;
      double omega = -pow4(xi_out) + partial_phase + sm * pow4(xm);
      sum += oscillatory_weight(-omega, t);
      return;
    }
    for (int i = 0; i < nodes; ++i) {
      xis[depth] = -N + (i + 0.5) * h;
      run(depth + 1, partial_sign_sum + (*signs)[depth] * xis[depth],
          partial_phase + (*signs)[depth] * pow4(xis[depth]), xis);
    }
  }
};

}  // namespace

IterateResult general_iterate(const EquationSpec& spec, double s, double N, double t, int nodes,
                              bool monte_carlo, std::uint64_t mc_seed, int mc_samples) {
  spec.validate();
  if (!(t >= 0)) throw std::invalid_argument("general_iterate: t must be >= 0");
  if (nodes < 8) throw std::invalid_argument("general_iterate: need >= 8 nodes per dimension");
  const int m = spec.m, d = spec.d;
  const bool guard_ok = d * (m - 1) <= 4;
  if (!guard_ok && !monte_carlo)
    throw std::invalid_argument(
        "general_iterate: full tensor quadrature requires d*(m-1) <= 4; pass monte_carlo=true");
  if (d != 1 && !monte_carlo)
    throw std::invalid_argument("general_iterate: d >= 2 uses the Monte Carlo path");

  IterateResult res;
  res.s = s;
  res.N = N;
  res.t = t;
  res.m = m;
  res.d = d;

  const double gamp = std::pow(N, -s - d / 2.0);
  const double conv_const = std::pow(2.0 * pi, -0.5 * d * (m - 1));
  const double h = 2.0 * N / nodes;

  // output mesh over the full m-fold support [-mN, mN]
  const double hout = h;
  const int nout = int(std::lround(2.0 * m * N / hout));
  res.mesh.resize(nout);

  // all 2^m sign patterns
  std::vector<std::vector<int>> patterns;
  for (int a = 0; a < (1 << m); ++a) {
    std::vector<int> sg(m);
    for (int j = 0; j < m; ++j) sg[j] = (a >> j) & 1 ? -1 : 1;
    patterns.push_back(std::move(sg));
  }

  std::vector<cd> amp(nout, cd{0.0, 0.0});
  std::vector<std::vector<cd>> block_amp;  // Monte Carlo bootstrap blocks
  const int nblocks = 10;
  if (monte_carlo) block_amp.assign(nblocks, std::vector<cd>(nout, cd{0.0, 0.0}));

  for (int io = 0; io < nout; ++io) {
    double xi = -double(m) * N + (io + 0.5) * hout;
    res.mesh[io] = xi;
    cd sym = spec.deriv == DerivKind::Coordinate ? cd{0.0, xi} : cd{std::fabs(xi), 0.0};
    cd pref = cd{0.0, -1.0} * sym;  // -i from Duhamel, then the derivative symbol
    double ph = -t * pow4(xi);
    pref *= cd{std::cos(ph), std::sin(ph)};
    double measure = std::pow(h, d * (m - 1));
    cd base = pref * conv_const * std::pow(gamp, m);

    if (!monte_carlo) {
      for (const auto& sg : patterns) {
        PatternAccumulator acc{N, t, gamp, m, nodes, h, &sg};
        acc.xi_out = xi;
        std::vector<double> xis(m);
        acc.run(0, 0.0, 0.0, xis.data());
        amp[io] += base * measure * acc.sum;
      }
    } else {
      // fixed-seed uniform sampling over [-N,N]^{d(m-1)}; d=1 only at desk scale
      if (d != 1) throw std::invalid_argument("general_iterate: Monte Carlo supports d=1 here");
      const double volume = std::pow(2.0 * N, m - 1);
      for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
        const auto& sg = patterns[pi];
        auto rng = seeded_rng(mc_seed, pi * 1000003ull + io);
        std::uniform_real_distribution<double> uni(-N, N);
        for (int b = 0; b < nblocks; ++b) {
          cd bsum{0.0, 0.0};
          int per_block = mc_samples / nblocks;
          for (int q = 0; q < per_block; ++q) {
            double ssum = 0.0, phase = 0.0;
            for (int j = 0; j < m - 1; ++j) {
              double x = uni(rng);
              ssum += sg[j] * x;
              phase += sg[j] * pow4(x);
            }
            double xm = sg[m - 1] * (xi - ssum);
            if (std::fabs(xm) > N) continue;
            double omega = -pow4(xi) + phase + sg[m - 1] * pow4(xm);
            bsum += oscillatory_weight(-omega, t);
          }
          block_amp[b][io] += base * volume / double(per_block) * bsum;
        }
      }
      cd mean{0.0, 0.0};
      for (int b = 0; b < nblocks; ++b) mean += block_amp[b][io];
      amp[io] = mean / double(nblocks);
    }
  }

  res.amp = amp;
  // H^s mass over the shell [N/2, N] that carries the growth rate; the full
  // mesh amplitude is dominated by an O(1)-frequency tail of the derivative
  // symbol whose exponent differs, so the shell is the meaningful observable.
  auto hs_of = [&](const std::vector<cd>& a) {
    double nsq = 0.0;
    for (int io = 0; io < nout; ++io) {
      double xi = res.mesh[io];
      if (xi < N / 2.0 || xi > N) continue;
      nsq += std::pow(1.0 + xi * xi, s) * std::norm(a[io]) * hout;
    }
    return std::sqrt(nsq);
  };
  res.hs_norm = hs_of(amp);
  if (monte_carlo) {
    double mean = 0.0, var = 0.0;
    std::vector<double> norms(nblocks);
    for (int b = 0; b < nblocks; ++b) {
      norms[b] = hs_of(block_amp[b]);
      mean += norms[b] / nblocks;
    }
    for (int b = 0; b < nblocks; ++b) var += (norms[b] - mean) * (norms[b] - mean) / (nblocks - 1);
    res.mc_stderr = std::sqrt(var / nblocks);
  }
  return res;
}

SpectralField duhamel_iterate(const std::vector<SpectralField>& inputs, const EquationSpec& spec,
                              double T, int steps) {
  spec.validate();
  if (inputs.empty()) throw std::invalid_argument("duhamel_iterate: no inputs");
  if (steps < 16) throw std::invalid_argument("duhamel_iterate: need >= 16 quadrature steps");
  const Grid& g = inputs[0].grid;
  const bool multi = inputs.size() > 1;
  std::vector<bool> conj_flags;
  double coeff = 1.0;
  if (multi) {
    if (int(inputs.size()) != spec.m)
      throw std::invalid_argument("duhamel_iterate: slot count must equal m");
    if (spec.terms.size() != 1)
      throw std::invalid_argument("duhamel_iterate: polarized form needs a single monomial");
    const auto& term = spec.terms[0];
    coeff = term.coeff;
    for (int j = 0; j < term.alpha; ++j) conj_flags.push_back(false);
    for (int j = 0; j < term.beta; ++j) conj_flags.push_back(true);
  }

  SpectralField acc(g);
  const double dt = T / steps;
  for (int q = 0; q <= steps; ++q) {
    const double tp = q * dt;
    const double w = (q == 0 || q == steps) ? 0.5 : 1.0;
    SpectralField integrand(g);
    if (multi) {
      std::vector<SpectralField> ev;
      ev.reserve(inputs.size());
      for (const auto& f : inputs) ev.push_back(free_propagate(f, tp));
      integrand = polarized_derivative_product(ev, conj_flags, coeff, spec.deriv, spec.deriv_axis);
    } else {
      integrand = apply_nonlinearity(free_propagate(inputs[0], tp), spec);
    }
    axpy(w * dt, free_propagate(integrand, T - tp), acc);
  }
  return cd{0.0, -1.0} * acc;
}

SlopeFit inflation_slope(const std::vector<IterateResult>& results) {
  if (results.size() < 4) throw std::invalid_argument("inflation_slope: need >= 4 results");
  for (std::size_t k = 1; k < results.size(); ++k) {
    const auto &a = results[k], &b = results[0];
    if (a.s != b.s || a.m != b.m || a.d != b.d)
      throw std::invalid_argument("inflation_slope: results must share (s, m, d)");
    for (std::size_t j = 0; j < k; ++j)
      if (results[j].N == a.N) throw std::invalid_argument("inflation_slope: duplicate N");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = double(results.size());
  for (const auto& r : results) {
    if (!(r.hs_norm > 0)) throw std::invalid_argument("inflation_slope: non-positive norm");
    double x = std::log2(r.N), y = std::log2(r.hs_norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  SlopeFit fit;
  double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = syy - sy * sy / n - fit.slope * (sxy - sx * sy / n);
  double ss_tot = syy - sy * sy / n;
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double band_phase_max(double N, int count, std::uint64_t seed) {
  auto rng = seeded_rng(seed, 0);
  std::uniform_real_distribution<double> uni(N - 1.0 / N, N + 1.0 / N);
  double mx = 0.0;
  for (int k = 0; k < count; ++k) {
    double x1 = uni(rng), x2 = uni(rng), x3 = uni(rng);
    auto [lhs, rhs] = resonance_factorization_check(x1, x2, x3);
    mx = std::max(mx, std::fabs(rhs));
  }
  return mx;
}

std::string IterateResult::to_json() const {
  std::ostringstream os;
  os << "{\"s\":" << fmt17(s) << ",\"N\":" << fmt17(N) << ",\"t\":" << fmt17(t)
     << ",\"m\":" << m << ",\"d\":" << d << ",\"hs_norm\":" << fmt17(hs_norm);
  if (mc_stderr >= 0) os << ",\"mc_stderr\":" << fmt17(mc_stderr);
  auto emit = [&](const char* key, auto getter) {
    os << ",\"" << key << "\":[";
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      if (k) os << ",";
      os << fmt17(getter(k));
    }
    os << "]";
  };
  emit("mesh", [&](std::size_t k) { return mesh[k]; });
  emit("amp_re", [&](std::size_t k) { return amp[k].real(); });
  emit("amp_im", [&](std::size_t k) { return amp[k].imag(); });
  os << "}";
  return os.str();
}

}  // namespace b4ns
