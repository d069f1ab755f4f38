#ifndef B4NS_MODULATION_HPP
#define B4NS_MODULATION_HPP

#include "b4ns/evolution.hpp"

namespace b4ns {

enum class ModulationMode { High, Low };

// Q^S_{>=M} / Q^S_{<M}: per spatial frequency xi, a Tukey window (flat
// fraction 0.8) is applied to the time samples of uhat(t, xi), the windowed
// series is transformed to the tau lattice, multiplied by
// sum_{N>=M} psi_N(tau - |xi|^4) (high) or its complement (low), and inverted.
// High + low reconstruct the *tapered* trajectory.
Trajectory modulation_project(const Trajectory& traj, double M, ModulationMode mode);

// applies only the taper, for reconstruction and leakage comparisons
Trajectory taper_trajectory(const Trajectory& traj);

// L^2_{tx} norm of a trajectory (trapezoid in t, lattice in x)
double l2_tx_norm(const Trajectory& traj);

// ||Q^S_{>=M} u||_{L^2_tx} * M^{1/2} / ||u||_{V^2_S}
double check_high_modulation_bound(const Trajectory& traj, double M);

}  // namespace b4ns

#endif
