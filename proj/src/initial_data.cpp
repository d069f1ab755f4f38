#include "b4ns/initial_data.hpp"

#include <cmath>
#include <sstream>

namespace b4ns {

double critical_exponent(int d, int m) {
  if (m < 2) throw std::invalid_argument("critical_exponent: m must be >= 2");
  if (d < 1) throw std::invalid_argument("critical_exponent: d must be >= 1");
  return d / 2.0 - 3.0 / (m - 1);
}

SpectralField freq_box_data(BoxKind kind, double s, double N, const Grid& grid) {
  if (!(N > 0)) throw std::invalid_argument("freq_box_data: N must be positive");
  SpectralField u(grid);
  if (kind == BoxKind::Band1d) {
    if (grid.d != 1) throw std::invalid_argument("freq_box_data: band-1d needs d=1");
    const double lo = N - 1.0 / N, hi = N + 1.0 / N;
    if (hi > grid.xi_max() || grid.dxi() > (hi - lo) / 8.0) {
      std::ostringstream msg;
      msg << "freq_box_data: band [" << lo << ", " << hi << "] unresolved; need L >= "
          << 8.0 * pi * N << " and xi_max >= " << hi << " (have L=" << grid.L
          << ", xi_max=" << grid.xi_max() << ")";
      throw std::invalid_argument(msg.str());
    }
    const double amp = std::pow(N, -s + 0.5);
    for (int k = 0; k < grid.n; ++k) {
      double xi = grid.freq1(k);
      if (xi >= lo && xi <= hi && !grid.is_nyquist(k)) u.coeffs[k] = amp;
    }
  } else {
    if (N > grid.xi_max()) {
      std::ostringstream msg;
      msg << "freq_box_data: cube [-" << N << ", " << N << "]^d exceeds resolved xi_max="
          << grid.xi_max();
      throw std::invalid_argument(msg.str());
    }
    const double amp = std::pow(N, -s - grid.d / 2.0);
    for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
      if (grid.nyquist_flat(k)) continue;
      bool inside;
      if (grid.d == 1) {
        inside = std::fabs(grid.freq1(int(k))) <= N;
      } else {
        double a = grid.freq1(int(k) / grid.n), b = grid.freq1(int(k) % grid.n);
        inside = std::fabs(a) <= N && std::fabs(b) <= N;
      }
      if (inside) u.coeffs[k] = amp;
    }
  }
  return u;
}

SpectralField scale_field(const SpectralField& u0, double lambda, int m) {
  if (m < 2) throw std::invalid_argument("scale_field: m must be >= 2");
  double k = std::log2(lambda);
  if (!(lambda > 0) || k != std::round(k))
    throw std::invalid_argument("scale_field: lambda must be a power of two");
  const Grid& g = u0.grid;
  SpectralField r(make_grid(g.d, g.n, lambda * g.L));
  // same lattice index, frequency xi/lambda; exact reindexing
  const double amp = std::pow(lambda, g.d - 3.0 / (m - 1));
  for (std::size_t j = 0; j < r.coeffs.size(); ++j) r.coeffs[j] = amp * u0.coeffs[j];
  return r;
}

}  // namespace b4ns
