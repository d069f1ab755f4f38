#ifndef B4NS_EVOLUTION_HPP
#define B4NS_EVOLUTION_HPP

#include <optional>
#include <vector>

#include "b4ns/field.hpp"

namespace b4ns {

// Nonlinearity dP_m(u, conj u) with P_m = sum of c * u^alpha * conj(u)^beta,
// alpha + beta = m. The derivative symbol is either a coordinate derivative
// (i*xi_k) or the modulus |xi|.
struct MonomialTerm {
  int alpha = 0;
  int beta = 0;
  double coeff = 1.0;
};

enum class DerivKind { Coordinate, Modulus };

struct EquationSpec {
  int d = 1;
  int m = 2;
  std::vector<MonomialTerm> terms;
  DerivKind deriv = DerivKind::Coordinate;
  int deriv_axis = 0;  // used when deriv == Coordinate

  void validate() const;
  bool zero() const;
};

EquationSpec cubic_gauge_invariant_1d();  // P3 = |u|^2 u = u^2 conj(u), d/dx
EquationSpec quartic_conjugate_1d();      // P4 = conj(u)^4, d/dx

struct Trajectory {
  std::vector<double> times;           // uniform, starting at 0
  std::vector<SpectralField> states;   // one per instant, shared grid
  EquationSpec spec;

  double dt_sample() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

// Free evolution S(t): frequency-pointwise multiplication by e^{-i t |xi|^4}
SpectralField free_propagate(const SpectralField& u, double t);

// Pseudospectral evaluation of d sum c u^alpha conj(u)^beta with zero-padding
// dealiasing of factor (m+1)/2. Conjugate powers are formed in physical space;
// one forward transform per monomial.
SpectralField apply_nonlinearity(const SpectralField& u, const EquationSpec& spec);

// Polarized form: d( coeff * prod_j u_j or conj(u_j) ), one distinct field per
// slot, same dealiased pipeline as apply_nonlinearity.
SpectralField polarized_derivative_product(const std::vector<SpectralField>& factors,
                                           const std::vector<bool>& conjugated, double coeff,
                                           DerivKind deriv, int axis);

struct NumericalOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One step of integrating-factor (Lawson) RK4 for
//   i u_t + Delta^2 u = dP_m(u, conj u),
// twisting by S(-t) so the |xi|^4 stiffness is handled exactly.
SpectralField step_integrate(const SpectralField& u, const EquationSpec& spec, double dt);

// Strang splitting cross-check path: linear half step, one RK4 pass on the
// autonomous nonlinear substep, linear half step. Second order overall.
SpectralField step_strang(const SpectralField& u, const EquationSpec& spec, double dt);

Trajectory evolve(const SpectralField& u0, const EquationSpec& spec, double T, double dt,
                  int stride);

struct ScatteringDiagnostics {
  std::vector<double> deltas;  // Cauchy increments of S(-t)u(t) in H^{-1/2} homogeneous
};

// Returns w(T) = S(-T) u(T) as the scattering-state estimate, plus the
// sequence ||w(t_{k+1}) - w(t_k)||_{\dot H^{-1/2}}.
std::pair<SpectralField, ScatteringDiagnostics> scattering_limit(const Trajectory& traj);

}  // namespace b4ns

#endif
