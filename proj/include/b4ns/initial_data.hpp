#ifndef B4NS_INITIAL_DATA_HPP
#define B4NS_INITIAL_DATA_HPP

#include <string>

#include "b4ns/field.hpp"

namespace b4ns {

enum class BoxKind { Band1d, CubeDd };

// scaling critical Sobolev index d/2 - 3/(m-1)
double critical_exponent(int d, int m);

// Frequency-indicator data:
//   Band1d: amplitude N^{-s+1/2} on lattice frequencies in [N-1/N, N+1/N]
//   CubeDd: amplitude N^{-s-d/2} on lattice frequencies in [-N, N]^d
// The band must be resolved by at least 8 lattice points; the error message
// reports the minimal period L that would resolve it.
SpectralField freq_box_data(BoxKind kind, double s, double N, const Grid& grid);

// u0(x) -> lambda^{-3/(m-1)} u0(x/lambda) on the grid with period lambda*L.
// lambda must be a (positive or negative) power of two so the rescaled field
// lands exactly on a compatible lattice.
SpectralField scale_field(const SpectralField& u0, double lambda, int m);

}  // namespace b4ns

#endif
