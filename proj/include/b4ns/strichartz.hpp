#ifndef B4NS_STRICHARTZ_HPP
#define B4NS_STRICHARTZ_HPP

#include "b4ns/evolution.hpp"
#include "b4ns/field.hpp"

namespace b4ns {

// Lebesgue exponent as an exact rational (or infinity), so admissibility is
// checked without floating point.
struct Exponent {
  bool infinite = false;
  long long num = 2;
  long long den = 1;

  static Exponent inf() { return Exponent{true, 0, 1}; }
  static Exponent of(long long n, long long d = 1);

  double value() const;  // +inf for the infinite exponent
};

// true iff 2/p + d/q = d/2 exactly, p,q in [2,inf], and (p,q,d) != (2,inf,2)
bool admissible_pair_check(const Exponent& p, const Exponent& q, int d);

// (p_m, q_m) = (2(m-1), 2(m-1)d/((m-1)d-2)); the special case d=1, m=3
// returns (4, inf)
std::pair<Exponent, Exponent> xs_exponents(int d, int m);

// L^q_x lattice norm; q = inf is evaluated on a 4x zero-padded physical grid
double lq_norm(const SpectralField& u, const Exponent& q);

// L^p_t L^q_x: trapezoid in time over the trajectory samples, lattice in space
double mixed_norm(const Trajectory& traj, const Exponent& p, const Exponent& q);

// ||S(.)phi||_{L^p_t L^q_x([0,T])} / |||nabla|^{-2/p} phi||_{L^2},
// with the free trajectory sampled at `samples` instants
double strichartz_ratio(const SpectralField& phi, const Exponent& p, const Exponent& q,
                        double T, int samples = 129);

}  // namespace b4ns

#endif
