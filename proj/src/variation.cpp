#include "b4ns/variation.hpp"

#include <cmath>
#include <functional>

namespace b4ns {

namespace {

// shared DP over a distance callback; index `count` is the virtual terminal
// zero when the endpoint jump is on
double variation_dp(int count, double p, const std::function<double(int, int)>& dist) {
  std::vector<double> best(count, 0.0);
  double sup = 0.0;
  for (int j = 1; j < count; ++j) {
    double bj = 0.0;
    for (int i = 0; i < j; ++i) {
      double cand = best[i] + std::pow(dist(i, j), p);
      if (cand > bj) bj = cand;
    }
    best[j] = bj;
    if (bj > sup) sup = bj;
  }
  return std::pow(sup, 1.0 / p);
}

}  // namespace

double p_variation(const std::vector<double>& scalar_path, double p, bool with_endpoint_jump) {
  if (p < 1.0) throw std::invalid_argument("p_variation: p must be >= 1");
  if (scalar_path.size() < 2 && !with_endpoint_jump) return 0.0;
  const int n = int(scalar_path.size());
  const int count = with_endpoint_jump ? n + 1 : n;
  auto val = [&](int i) { return i < n ? scalar_path[i] : 0.0; };
  return variation_dp(count, p, [&](int i, int j) { return std::fabs(val(j) - val(i)); });
}

double p_variation(const PathSample& path, double p, bool with_endpoint_jump) {
  if (p < 1.0) throw std::invalid_argument("p_variation: p must be >= 1");
  const int n = int(path.values.size());
  if (n == 0) return 0.0;
  const int count = with_endpoint_jump ? n + 1 : n;
  // Gram-based pairwise L2 distances
  std::vector<double> energy(n);
  for (int i = 0; i < n; ++i) energy[i] = l2_norm(path.values[i]) * l2_norm(path.values[i]);
  const double w = std::pow(path.values[0].grid.dxi(), path.values[0].grid.d);
  auto dist = [&](int i, int j) {
    if (j == n) return std::sqrt(energy[i]);  // jump to the virtual terminal 0
    if (i == n) return std::sqrt(energy[j]);
    double dot = 0.0;
    const auto &a = path.values[i].coeffs, &b = path.values[j].coeffs;
    for (std::size_t k = 0; k < a.size(); ++k)
      dot += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    double d2 = energy[i] + energy[j] - 2.0 * w * dot;
    return d2 > 0 ? std::sqrt(d2) : 0.0;
  };
  return variation_dp(count, p, dist);
}

void StepPath::validate() const {
  if (partition.size() != values.size() + 1)
    throw std::invalid_argument("StepPath: need K+1 partition points for K blocks");
  for (std::size_t k = 1; k < partition.size(); ++k)
    if (!(partition[k] > partition[k - 1]))
      throw std::invalid_argument("StepPath: partition must be strictly increasing");
}

StepPath make_up_atom(const std::vector<double>& partition,
                      const std::vector<SpectralField>& blocks, double p) {
  StepPath sp{partition, blocks, true};
  sp.validate();
  double acc = 0.0;
  for (const auto& b : sp.values) acc += std::pow(l2_norm(b), p);
  if (!(acc > 0.0)) throw std::invalid_argument("make_up_atom: all-zero blocks");
  const double scale = std::pow(acc, -1.0 / p);
  for (auto& b : sp.values)
    for (auto& c : b.coeffs) c *= scale;
  return sp;
}

PathSample sample_step_path(const StepPath& sp) {
  sp.validate();
  PathSample ps;
  for (std::size_t k = 0; k < sp.values.size(); ++k) {
    ps.times.push_back(sp.partition[k]);
    ps.values.push_back(sp.values[k]);
  }
  return ps;
}

double vs_norm(const PathSample& path, double p) {
  PathSample twisted;
  twisted.times = path.times;
  twisted.values.reserve(path.values.size());
  for (std::size_t k = 0; k < path.values.size(); ++k)
    twisted.values.push_back(free_propagate(path.values[k], -path.times[k]));
  return p_variation(twisted, p, true);
}

double vs_norm(const Trajectory& traj, double p) {
  PathSample ps{traj.times, traj.states};
  return vs_norm(ps, p);
}

double y_norm(const Trajectory& traj, double s, const DyadicBank& bank) {
  double acc = 0.0;
  for (double N : bank.levels) {
    Trajectory level;
    level.times = traj.times;
    level.states.reserve(traj.states.size());
    for (const auto& st : traj.states) level.states.push_back(dyadic_project(st, N, bank));
    bool empty = true;
    for (const auto& st : level.states)
      for (const auto& c : st.coeffs)
        if (c != cd{0.0, 0.0}) empty = false;
    if (empty) continue;
    double v = vs_norm(level, 2.0);
    acc += std::pow(N, 2.0 * s) * v * v;
  }
  return std::sqrt(acc);
}

ModulationCheck modulation_lemma_check(const std::array<double, 5>& tau,
                                       const std::array<double, 5>& xi) {
  double tsum = 0, xsum = 0, scale_t = 0, scale_x = 0;
  for (int j = 0; j < 5; ++j) {
    tsum += tau[j];
    xsum += xi[j];
    scale_t = std::max(scale_t, std::fabs(tau[j]));
    scale_x = std::max(scale_x, std::fabs(xi[j]));
  }
  if (std::fabs(tsum) > 1e-9 * std::max(1.0, scale_t) ||
      std::fabs(xsum) > 1e-9 * std::max(1.0, scale_x))
    throw std::invalid_argument("modulation_lemma_check: tuples must sum to zero");
  ModulationCheck r;
  for (int j = 0; j < 5; ++j) {
    double x4 = xi[j] * xi[j] * xi[j] * xi[j];
    r.lhs = std::max(r.lhs, std::fabs(tau[j] - x4));
    r.rhs = std::max(r.rhs, x4 / 5.0);
  }
  r.ok = r.lhs >= r.rhs - 1e-9 * r.rhs;
  return r;
}

}  // namespace b4ns
