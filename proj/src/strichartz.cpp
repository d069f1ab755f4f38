#include "b4ns/strichartz.hpp"

#include <cmath>
#include <numeric>

namespace b4ns {

Exponent Exponent::of(long long n, long long d) {
  if (d <= 0 || n <= 0) throw std::invalid_argument("Exponent: need positive num/den");
  long long g = std::gcd(n, d);
  return Exponent{false, n / g, d / g};
}

double Exponent::value() const {
  return infinite ? std::numeric_limits<double>::infinity() : double(num) / double(den);
}

bool admissible_pair_check(const Exponent& p, const Exponent& q, int d) {
  auto at_least_two = [](const Exponent& e) {
    return e.infinite || e.num >= 2 * e.den;
  };
  if (!at_least_two(p) || !at_least_two(q))
    throw std::invalid_argument("admissible_pair_check: exponents must be >= 2");
  if (d < 1) throw std::invalid_argument("admissible_pair_check: d must be >= 1");

  // 2/p + d/q = d/2 with exact integer cross-multiplication; 1/inf = 0
  long long pn = p.infinite ? 1 : p.num, pd = p.infinite ? 0 : p.den;
  long long qn = q.infinite ? 1 : q.num, qd = q.infinite ? 0 : q.den;
  // 2*pd/pn + d*qd/qn = d/2  <=>  4*pd*qn + 2*d*qd*pn = d*pn*qn
  bool scaling = 4 * pd * qn + 2 * d * qd * pn == (long long)d * pn * qn;
  bool excluded = d == 2 && !p.infinite && p.num == 2 * p.den && q.infinite;
  return scaling && !excluded;
}

std::pair<Exponent, Exponent> xs_exponents(int d, int m) {
  if (d == 1 && m == 3) return {Exponent::of(4), Exponent::inf()};
  long long md = (long long)(m - 1) * d;
  if (md <= 2) throw std::invalid_argument("xs_exponents: need (m-1)d > 2 (or d=1, m=3)");
  return {Exponent::of(2 * (m - 1)), Exponent::of(2 * md, md - 2)};
}

double lq_norm(const SpectralField& u, const Exponent& q) {
  const Grid& g = u.grid;
  if (q.infinite) {
    // max over a 4x zero-padded physical grid to control interpolation error
    const Grid gp = make_grid(g.d, 4 * g.n, g.L);
    SpectralField up(gp);
    if (g.d == 1) {
      for (int k = 0; k < g.n; ++k) {
        int s = g.signed_index(k);
        up.coeffs[s >= 0 ? s : s + gp.n] = u.coeffs[k];
      }
    } else {
      for (int ka = 0; ka < g.n; ++ka)
        for (int kb = 0; kb < g.n; ++kb) {
          int sa = g.signed_index(ka), sb = g.signed_index(kb);
          up.coeffs[std::size_t(sa >= 0 ? sa : sa + gp.n) * gp.n + (sb >= 0 ? sb : sb + gp.n)] =
              u.coeffs[std::size_t(ka) * g.n + kb];
        }
    }
    double mx = 0.0;
    for (const cd& v : to_physical(up)) mx = std::max(mx, std::abs(v));
    return mx;
  }
  double qv = q.value();
  if (qv < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1");
  double acc = 0.0;
  for (const cd& v : to_physical(u)) acc += std::pow(std::abs(v), qv);
  return std::pow(acc * std::pow(g.dx(), g.d), 1.0 / qv);
}

double mixed_norm(const Trajectory& traj, const Exponent& p, const Exponent& q) {
  if (traj.states.empty()) throw std::invalid_argument("mixed_norm: empty trajectory");
  std::vector<double> spatial(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) spatial[k] = lq_norm(traj.states[k], q);
  if (p.infinite) {
    double mx = 0.0;
    for (double v : spatial) mx = std::max(mx, v);
    return mx;
  }
  double pv = p.value();
  if (pv < 1.0) throw std::invalid_argument("mixed_norm: p must be >= 1");
  const double dt = traj.dt_sample();
  double acc = 0.0;
  for (std::size_t k = 0; k < spatial.size(); ++k) {
    double w = (k == 0 || k + 1 == spatial.size()) ? 0.5 : 1.0;
    acc += w * std::pow(spatial[k], pv);
  }
  return std::pow(acc * dt, 1.0 / pv);
}

double strichartz_ratio(const SpectralField& phi, const Exponent& p, const Exponent& q,
                        double T, int samples) {
  if (!admissible_pair_check(p, q, phi.grid.d))
    throw std::invalid_argument("strichartz_ratio: (p,q) not admissible");
  if (samples < 2) throw std::invalid_argument("strichartz_ratio: need >= 2 samples");
  const double two_over_p = p.infinite ? 0.0 : 2.0 * p.den / double(p.num);
  if (two_over_p > 0.0 && std::abs(phi.coeffs[0]) > 0.0)
    throw std::invalid_argument("strichartz_ratio: phi must be mean-zero when 2/p > 0");

  Trajectory tr;
  tr.spec = EquationSpec{phi.grid.d, 2, {{2, 0, 0.0}}, DerivKind::Coordinate, 0};
  for (int k = 0; k < samples; ++k) {
    double t = T * k / (samples - 1);
    tr.times.push_back(t);
    tr.states.push_back(free_propagate(phi, t));
  }
  double num = mixed_norm(tr, p, q);
  double den = sobolev_norm(phi, -two_over_p, true);
  if (!(den > 0.0)) throw std::invalid_argument("strichartz_ratio: zero data");
  return num / den;
}

}  // namespace b4ns
