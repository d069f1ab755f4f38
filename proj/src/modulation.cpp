#include "b4ns/modulation.hpp"

#include <cmath>

#include "b4ns/dyadic.hpp"
#include "b4ns/variation.hpp"

namespace b4ns {

namespace {

constexpr double kTukeyFlat = 0.8;

double tukey(std::size_t k, std::size_t K) {
  if (K < 2) return 1.0;
  const double x = double(k) / double(K - 1);             // in [0,1]
  const double taper = (1.0 - kTukeyFlat) / 2.0;          // cosine ramp width
  if (x < taper) return 0.5 * (1.0 - std::cos(pi * x / taper));
  if (x > 1.0 - taper) return 0.5 * (1.0 - std::cos(pi * (1.0 - x) / taper));
  return 1.0;
}

void check_uniform(const Trajectory& traj) {
  if (traj.times.size() < 4)
    throw std::invalid_argument("modulation_project: need >= 4 uniform samples");
  const double dt = traj.times[1] - traj.times[0];
  for (std::size_t k = 1; k < traj.times.size(); ++k)
    if (std::fabs(traj.times[k] - traj.times[k - 1] - dt) > 1e-9 * dt)
      throw std::invalid_argument("modulation_project: non-uniform time sampling");
}

}  // namespace

Trajectory taper_trajectory(const Trajectory& traj) {
  check_uniform(traj);
  Trajectory out = traj;
  const std::size_t K = traj.times.size();
  for (std::size_t k = 0; k < K; ++k) {
    const double w = tukey(k, K);
    for (auto& c : out.states[k].coeffs) c *= w;
  }
  return out;
}

Trajectory modulation_project(const Trajectory& traj, double M, ModulationMode mode) {
  check_uniform(traj);
  if (!(M > 0)) throw std::invalid_argument("modulation_project: M must be positive");
  const std::size_t K = traj.times.size();
  const double dt = traj.times[1] - traj.times[0];
  const double dtau = 2.0 * pi / (K * dt);
  const Grid& g = traj.states[0].grid;

  Trajectory out = traj;
  for (auto& st : out.states)
    for (auto& c : st.coeffs) c = 0.0;

  DyadicBank bank;  // only the telescoped multiplier is needed
  std::vector<cd> series(K);
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    double xi4 = g.freq_sq(flat);
    xi4 *= xi4;
    // time transform with the +i sign so S(t) content sits at tau = +|xi|^4,
    // matching the multiplier centering
    for (std::size_t k = 0; k < K; ++k)
      series[k] = tukey(k, K) * traj.states[k].coeffs[flat];
    dft_inplace(series, +1);
    for (std::size_t j = 0; j < K; ++j) {
      // signed tau lattice
      double tau = (j < K / 2 ? double(j) : double(j) - double(K)) * dtau;
      double high = bank.high_multiplier(M, tau - xi4);
      series[j] *= mode == ModulationMode::High ? high : 1.0 - high;
    }
    dft_inplace(series, -1);
    for (std::size_t k = 0; k < K; ++k) out.states[k].coeffs[flat] = series[k] / double(K);
  }
  return out;
}

double l2_tx_norm(const Trajectory& traj) {
  const double dt = traj.dt_sample();
  double acc = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double w = (k == 0 || k + 1 == traj.states.size()) ? 0.5 : 1.0;
    double nk = l2_norm(traj.states[k]);
    acc += w * nk * nk;
  }
  return std::sqrt(acc * dt);
}

double check_high_modulation_bound(const Trajectory& traj, double M) {
  double v = vs_norm(traj, 2.0);
  if (!(v > 0)) throw std::invalid_argument("check_high_modulation_bound: degenerate trajectory");
  Trajectory high = modulation_project(traj, M, ModulationMode::High);
  return l2_tx_norm(high) * std::sqrt(M) / v;
}

}  // namespace b4ns
