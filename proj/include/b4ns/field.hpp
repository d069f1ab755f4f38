#ifndef B4NS_FIELD_HPP
#define B4NS_FIELD_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Band-limited fields on a periodic grid. The canonical representation is
// frequency space: coeffs[k] approximates the continuum transform
//   uhat(xi) = (2*pi)^{-d/2} \int u(x) e^{-i xi.x} dx
// on the lattice xi in (2*pi/L)*{-n/2,...,n/2-1}^d, stored in FFT wavenumber
// order (non-negative multiples first, then negative). With this scaling the
// quadrature sum  sum_xi |uhat|^2 (2*pi/L)^d  equals the physical-space L^2
// quadrature exactly (discrete Parseval), so Sobolev norms are plain weighted
// lattice sums. Nyquist rows (index n/2) are always zero, which keeps every
// derivative symbol skew-symmetric on the lattice.

namespace b4ns {

using cd = std::complex<double>;

constexpr double pi = 3.14159265358979323846;

struct Grid {
  int d = 1;     // spatial dimension, 1 or 2
  int n = 0;     // modes per dimension, power of two >= 8
  double L = 0;  // period

  double dxi() const { return 2.0 * pi / L; }
  double dx() const { return L / n; }
  std::size_t size() const { return d == 1 ? std::size_t(n) : std::size_t(n) * n; }

  // signed lattice multiple for wavenumber index k in [0, n)
  int signed_index(int k) const { return k < n / 2 ? k : k - n; }
  double freq1(int k) const { return signed_index(k) * dxi(); }
  bool is_nyquist(int k) const { return k == n / 2; }

  // largest resolved |xi| per coordinate (Nyquist excluded)
  double xi_max() const { return (n / 2 - 1) * dxi(); }

  // |xi|^2 for a flat index
  double freq_sq(std::size_t flat) const {
    if (d == 1) return freq1(int(flat)) * freq1(int(flat));
    double a = freq1(int(flat / n)), b = freq1(int(flat % n));
    return a * a + b * b;
  }
  bool nyquist_flat(std::size_t flat) const {
    if (d == 1) return is_nyquist(int(flat));
    return is_nyquist(int(flat / n)) || is_nyquist(int(flat % n));
  }

  bool operator==(const Grid& o) const { return d == o.d && n == o.n && L == o.L; }
};

Grid make_grid(int d, int n, double L);

struct SpectralField {
  Grid grid;
  std::vector<cd> coeffs;  // frequency space, FFT order, row-major for d=2

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size(), cd{0.0, 0.0}) {}

  void zero_nyquist();
};

// transforms between the canonical frequency representation and physical
// samples on the uniform grid x_j = j*L/n
std::vector<cd> to_physical(const SpectralField& u);
SpectralField from_physical(const Grid& g, const std::vector<cd>& phys);

// pointwise L2 norm of the lattice (quadrature weight included)
double l2_norm(const SpectralField& u);

// Sobolev norm: (sum_xi w(xi) |uhat|^2 (2pi/L)^d)^{1/2},
// w = |xi|^{2s} (homogeneous) or (1+|xi|^2)^s.
// Homogeneous with s<0 requires a vanishing zero mode.
double sobolev_norm(const SpectralField& u, double s, bool homogeneous);

// arithmetic helpers
SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cd c, const SpectralField& a);
void axpy(cd c, const SpectralField& x, SpectralField& y);  // y += c*x

double rel_l2_diff(const SpectralField& a, const SpectralField& b);

// embed into / restrict to a grid with a different mode count (same period);
// frequencies outside the target lattice are dropped
SpectralField regrid(const SpectralField& u, const Grid& target);

// raw unnormalized in-place DFT (sign -1 forward, +1 backward), any length
void dft_inplace(std::vector<cd>& data, int sign);

}  // namespace b4ns

#endif
