#include "b4ns/evolution.hpp"

#include <cmath>
#include <sstream>

namespace b4ns {

namespace {

int next_pow2(int x) {
  int p = 1;
  while (p < x) p *= 2;
  return p;
}

cd ipow(cd z, int e) {
  cd r{1.0, 0.0};
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

bool finite_field(const SpectralField& u) {
  for (const auto& c : u.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

void EquationSpec::validate() const {
  if (m < 2) throw std::invalid_argument("EquationSpec: m must be >= 2");
  if (terms.empty()) throw std::invalid_argument("EquationSpec: at least one term required");
  for (const auto& t : terms) {
    if (t.alpha < 0 || t.beta < 0 || t.alpha + t.beta != m)
      throw std::invalid_argument("EquationSpec: each term needs alpha+beta = m");
    if (!std::isfinite(t.coeff)) throw std::invalid_argument("EquationSpec: non-finite coefficient");
  }
  if (deriv == DerivKind::Coordinate && (deriv_axis < 0 || deriv_axis >= d))
    throw std::invalid_argument("EquationSpec: derivative axis out of range");
}

bool EquationSpec::zero() const {
  for (const auto& t : terms)
    if (t.coeff != 0.0) return false;
  return true;
}

EquationSpec cubic_gauge_invariant_1d() {
  return EquationSpec{1, 3, {{2, 1, 1.0}}, DerivKind::Coordinate, 0};
}

EquationSpec quartic_conjugate_1d() {
  return EquationSpec{1, 4, {{0, 4, 1.0}}, DerivKind::Coordinate, 0};
}

SpectralField free_propagate(const SpectralField& u, double t) {
  SpectralField r = u;
  for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
    double xi4 = u.grid.freq_sq(k);
    xi4 *= xi4;
    double ph = -t * xi4;
    r.coeffs[k] *= cd{std::cos(ph), std::sin(ph)};
  }
  return r;
}

namespace {

void apply_derivative_symbol(SpectralField& u, DerivKind deriv, int axis) {
  const Grid& g = u.grid;
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
    cd sym;
    if (g.d == 1) {
      double xi = g.freq1(int(k));
      sym = deriv == DerivKind::Coordinate ? cd{0.0, xi} : cd{std::fabs(xi), 0.0};
    } else {
      double xia = g.freq1(int(k) / g.n), xib = g.freq1(int(k) % g.n);
      sym = deriv == DerivKind::Coordinate ? cd{0.0, axis == 0 ? xia : xib}
                                           : cd{std::hypot(xia, xib), 0.0};
    }
    u.coeffs[k] *= sym;
  }
}

Grid dealias_grid(const Grid& g, int m) {
  // zero-pad to factor (m+1)/2 so degree-m products cannot alias back into
  // the retained band
  return make_grid(g.d, next_pow2((g.n * (m + 1) + 1) / 2), g.L);
}

}  // namespace

SpectralField apply_nonlinearity(const SpectralField& u, const EquationSpec& spec) {
  spec.validate();
  const Grid& g = u.grid;
  if (spec.d != g.d) throw std::invalid_argument("apply_nonlinearity: dimension mismatch");
  const Grid gp = dealias_grid(g, spec.m);

  std::vector<cd> phys = to_physical(regrid(u, gp));
  SpectralField acc(gp);
  std::vector<cd> prod(phys.size());
  for (const auto& term : spec.terms) {
    if (term.coeff == 0.0) continue;
    for (std::size_t j = 0; j < phys.size(); ++j)
      prod[j] = term.coeff * ipow(phys[j], term.alpha) * ipow(std::conj(phys[j]), term.beta);
    SpectralField f = from_physical(gp, prod);
    for (std::size_t j = 0; j < acc.coeffs.size(); ++j) acc.coeffs[j] += f.coeffs[j];
  }

  SpectralField out = regrid(acc, g);
  apply_derivative_symbol(out, spec.deriv, spec.deriv_axis);
  out.zero_nyquist();
  return out;
}

SpectralField polarized_derivative_product(const std::vector<SpectralField>& factors,
                                           const std::vector<bool>& conjugated, double coeff,
                                           DerivKind deriv, int axis) {
  if (factors.empty() || factors.size() != conjugated.size())
    throw std::invalid_argument("polarized_derivative_product: slot mismatch");
  const Grid& g = factors[0].grid;
  const Grid gp = dealias_grid(g, int(factors.size()));
  std::vector<cd> prod(gp.size(), cd{coeff, 0.0});
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (!(factors[j].grid == g))
      throw std::invalid_argument("polarized_derivative_product: grid mismatch");
    std::vector<cd> phys = to_physical(regrid(factors[j], gp));
    if (conjugated[j])
      for (std::size_t k = 0; k < prod.size(); ++k) prod[k] *= std::conj(phys[k]);
    else
      for (std::size_t k = 0; k < prod.size(); ++k) prod[k] *= phys[k];
  }
  SpectralField out = regrid(from_physical(gp, prod), g);
  apply_derivative_symbol(out, deriv, axis);
  out.zero_nyquist();
  return out;
}

SpectralField step_integrate(const SpectralField& u, const EquationSpec& spec, double dt) {
  if (spec.zero()) return free_propagate(u, dt);
  const cd mi{0.0, -1.0};
  auto N = [&](const SpectralField& v) { return mi * apply_nonlinearity(v, spec); };
  // Lawson RK4 on w(t) = S(-t) u(t) with local twist origin at the step start
  SpectralField k1 = N(u);

  SpectralField s1 = u;
  axpy(0.5 * dt, k1, s1);
  SpectralField k2 = free_propagate(N(free_propagate(s1, 0.5 * dt)), -0.5 * dt);

  SpectralField s2 = u;
  axpy(0.5 * dt, k2, s2);
  SpectralField k3 = free_propagate(N(free_propagate(s2, 0.5 * dt)), -0.5 * dt);

  SpectralField s3 = u;
  axpy(dt, k3, s3);
  SpectralField k4 = free_propagate(N(free_propagate(s3, dt)), -dt);

  SpectralField w = u;
  axpy(dt / 6.0, k1, w);
  axpy(dt / 3.0, k2, w);
  axpy(dt / 3.0, k3, w);
  axpy(dt / 6.0, k4, w);
  SpectralField out = free_propagate(w, dt);
  if (!finite_field(out)) throw NumericalOverflow("step_integrate: non-finite value");
  return out;
}

SpectralField step_strang(const SpectralField& u, const EquationSpec& spec, double dt) {
  if (spec.zero()) return free_propagate(u, dt);
  const cd mi{0.0, -1.0};
  auto N = [&](const SpectralField& v) { return mi * apply_nonlinearity(v, spec); };
  // linear half step, autonomous nonlinear substep (one RK4), linear half step
  SpectralField v = free_propagate(u, 0.5 * dt);
  SpectralField k1 = N(v);
  SpectralField s1 = v;
  axpy(0.5 * dt, k1, s1);
  SpectralField k2 = N(s1);
  SpectralField s2 = v;
  axpy(0.5 * dt, k2, s2);
  SpectralField k3 = N(s2);
  SpectralField s3 = v;
  axpy(dt, k3, s3);
  SpectralField k4 = N(s3);
  axpy(dt / 6.0, k1, v);
  axpy(dt / 3.0, k2, v);
  axpy(dt / 3.0, k3, v);
  axpy(dt / 6.0, k4, v);
  SpectralField out = free_propagate(v, 0.5 * dt);
  if (!finite_field(out)) throw NumericalOverflow("step_strang: non-finite value");
  return out;
}

Trajectory evolve(const SpectralField& u0, const EquationSpec& spec, double T, double dt,
                  int stride) {
  if (!(T > 0) || !(dt > 0) || stride < 1)
    throw std::invalid_argument("evolve: need T > 0, dt > 0, stride >= 1");
  spec.validate();
  const long nsteps = std::lround(T / dt);
  if (nsteps < 1 || std::fabs(nsteps * dt - T) > 1e-9 * T)
    throw std::invalid_argument("evolve: T must be an integer multiple of dt");

  const double guard = 1e6 * std::max(l2_norm(u0), 1e-300);
  Trajectory tr;
  tr.spec = spec;
  tr.times.push_back(0.0);
  tr.states.push_back(u0);
  SpectralField u = u0;
  for (long k = 1; k <= nsteps; ++k) {
    try {
      u = step_integrate(u, spec, dt);
    } catch (const NumericalOverflow&) {
      std::ostringstream msg;
      msg << "evolve: numerical overflow at step " << k << " (t=" << k * dt << ")";
      throw NumericalOverflow(msg.str());
    }
    if (l2_norm(u) > guard) {
      std::ostringstream msg;
      msg << "evolve: L2 norm grew by 1e6 over initial at step " << k
          << "; data left the small-data regime";
      throw NumericalOverflow(msg.str());
    }
    if (k % stride == 0) {
      tr.times.push_back(k * dt);
      tr.states.push_back(u);
    }
  }
  return tr;
}

std::pair<SpectralField, ScatteringDiagnostics> scattering_limit(const Trajectory& traj) {
  if (traj.states.size() < 4)
    throw std::invalid_argument("scattering_limit: need at least 4 samples");
  ScatteringDiagnostics diag;
  SpectralField prev = free_propagate(traj.states[0], -traj.times[0]);
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    SpectralField w = free_propagate(traj.states[k], -traj.times[k]);
    SpectralField d = w - prev;
    // the zero mode is conserved by the derivative nonlinearity; drop roundoff
    if (!d.coeffs.empty()) d.coeffs[0] = 0.0;
    diag.deltas.push_back(sobolev_norm(d, -0.5, true));
    prev = w;
  }
  return {prev, diag};
}

}  // namespace b4ns
