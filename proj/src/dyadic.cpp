#include "b4ns/dyadic.hpp"

#include <cmath>

namespace b4ns {

double DyadicBank::chi(double t) {
  double a = std::fabs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  double r = a - 1.0;  // in (0,1)
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

double DyadicBank::high_multiplier(double M, double t) const {
  // sum over all dyadic N >= M of psi_N(t) telescopes: chi(t/N_top) -> 1
  return 1.0 - chi(2.0 * t / M);
}

DyadicBank make_bank(double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("make_bank: need 0 < lo <= hi");
  // N_min <= lo ensures chi(2t/N_min) = 0 for |t| >= lo;
  // N_max >= hi ensures chi(t/N_max) = 1 for |t| <= hi.
  int kmin = int(std::floor(std::log2(lo)));
  int kmax = int(std::ceil(std::log2(hi)));
  DyadicBank b;
  for (int k = kmin; k <= kmax; ++k) b.levels.push_back(std::ldexp(1.0, k));
  return b;
}

DyadicBank make_bank(const Grid& g) {
  double lo = g.dxi();
  double hi = g.d == 1 ? g.xi_max() : std::sqrt(2.0) * g.xi_max();
  return make_bank(lo, hi);
}

SpectralField dyadic_project(const SpectralField& u, double N, const DyadicBank& bank) {
  SpectralField r(u.grid);
  bool in_bank = false;
  for (double lv : bank.levels)
    if (lv == N) in_bank = true;
  if (!in_bank) return r;
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
    double a = std::sqrt(u.grid.freq_sq(k));
    double w = bank.psi_level(N, a);
    if (w != 0.0) r.coeffs[k] = w * u.coeffs[k];
  }
  return r;
}

}  // namespace b4ns
