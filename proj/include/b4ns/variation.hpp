#ifndef B4NS_VARIATION_HPP
#define B4NS_VARIATION_HPP

#include <array>
#include <vector>

#include "b4ns/dyadic.hpp"
#include "b4ns/evolution.hpp"
#include "b4ns/field.hpp"

namespace b4ns {

// Discrete home of U^p atoms: partition points t_0 < ... < t_K and one field
// per interval [t_{k-1}, t_k). The t_K = +infinity convention (value 0 at the
// terminal point) is carried as a flag.
struct StepPath {
  std::vector<double> partition;       // K+1 points
  std::vector<SpectralField> values;   // K blocks
  bool final_jump_convention = true;

  void validate() const;
};

struct PathSample {
  std::vector<double> times;
  std::vector<SpectralField> values;
};

// Exact V^p norm over all sub-partitions of the sample points, by the O(n^2)
// dynamic program best(j) = max_{i<j} best(i) + d(i,j)^p. The endpoint-jump
// flag appends a virtual terminal value 0 (the t_K = infinity convention).
double p_variation(const std::vector<double>& scalar_path, double p, bool with_endpoint_jump);
double p_variation(const PathSample& path, double p, bool with_endpoint_jump);

// Blocks rescaled so that sum_k ||phi_k||_{L^2}^p = 1
StepPath make_up_atom(const std::vector<double>& partition,
                      const std::vector<SpectralField>& blocks, double p);

// samples a step path at its partition points (left values)
PathSample sample_step_path(const StepPath& sp);

// ||v||_{V^p_S} = ||S(-.)v||_{V^p} with the endpoint jump on
double vs_norm(const PathSample& path, double p);
double vs_norm(const Trajectory& traj, double p);

// ||u||_{Y^s-dot} = (sum_N N^{2s} ||P_N u||_{V^2_S}^2)^{1/2}
double y_norm(const Trajectory& traj, double s, const DyadicBank& bank);

// Lemma-style modulation bound check: given 5-tuples with sum tau = 0 and
// sum xi = 0, returns (max_j |tau_j - xi_j^4|, max_j xi_j^4 / 5, ok)
struct ModulationCheck {
  double lhs = 0, rhs = 0;
  bool ok = false;
};
ModulationCheck modulation_lemma_check(const std::array<double, 5>& tau,
                                       const std::array<double, 5>& xi);

}  // namespace b4ns

#endif
