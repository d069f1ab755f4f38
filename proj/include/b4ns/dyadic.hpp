#ifndef B4NS_DYADIC_HPP
#define B4NS_DYADIC_HPP

#include <vector>

#include "b4ns/field.hpp"

namespace b4ns {

// Smooth dyadic partition of unity. chi is even, equals 1 on [-1,1], vanishes
// outside (-2,2), joined by the bump profile exp(1 - 1/(1-r^2)).
// psi(t) = chi(t) - chi(2t), psi_N(t) = psi(t/N); sum over dyadic N of psi_N
// telescopes to 1 for every t != 0 covered by the bank's level range.
struct DyadicBank {
  std::vector<double> levels;  // dyadic values 2^k, increasing

  static double chi(double t);
  static double psi(double t) { return chi(t) - chi(2.0 * t); }
  double psi_level(double N, double t) const { return psi(t / N); }

  // sum of psi_N over bank levels >= M, evaluated at t (telescoped)
  double high_multiplier(double M, double t) const;
};

// bank whose levels cover [lo, hi] so that the partition of unity is exact
// there (lo > 0)
DyadicBank make_bank(double lo, double hi);

// bank covering the nonzero frequency magnitudes of a grid
DyadicBank make_bank(const Grid& g);

// P_N u: multiply uhat(xi) by psi_N(|xi|); out-of-range N gives a zero field
SpectralField dyadic_project(const SpectralField& u, double N, const DyadicBank& bank);

}  // namespace b4ns

#endif
