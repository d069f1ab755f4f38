#ifndef B4NS_PICARD_HPP
#define B4NS_PICARD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "b4ns/evolution.hpp"
#include "b4ns/field.hpp"

namespace b4ns {

struct FrequencyBand {
  double center = 0;
  double halfwidth = 0;
  int samples = 0;  // equispaced midpoint quadrature nodes across the band

  void validate() const {
    if (!(halfwidth > 0)) throw std::invalid_argument("FrequencyBand: halfwidth must be > 0");
    if (samples < 8) throw std::invalid_argument("FrequencyBand: need >= 8 samples");
  }
};

struct SignPattern {
  std::vector<int> signs;  // +1 / -1, length m
};

struct IterateResult {
  std::vector<double> mesh;  // output frequency mesh (node centers)
  std::vector<cd> amp;       // complex amplitude per mesh node
  double hs_norm = 0;
  double t = 0;
  double s = 0;
  double N = 0;
  int m = 0;
  int d = 1;
  double mc_stderr = -1;  // bootstrap error bar, >= 0 only for Monte Carlo runs

  std::string to_json() const;
};

// Phase Omega = -|xi_out|^4 + sum_j sign_j |xi_j|^4, with the convolution
// constraint xi_out = sum_j sign_j xi_j enforced to 1e-12.
double resonance_omega(double xi_out, const std::vector<double>& xi_in,
                       const SignPattern& signs);

// Both routes of the cubic resonance identity:
//   lhs = -(x1-x2+x3)^4 + x1^4 - x2^4 + x3^4
//   rhs = 2(x1-x2)(x2-x3)(2x1^2 + x2^2 + 2x3^2 - x1 x2 - x2 x3 + 3 x3 x1)
std::pair<double, double> resonance_factorization_check(double x1, double x2, double x3);

// int_0^t e^{i t' W} dt' in closed form, with a series branch for |W t| < 1e-8
cd oscillatory_weight(double omega, double t);

// Third Picard iterate for the cubic |u|^2 u nonlinearity with band data
// f_N = N^{-s+1/2} F^{-1}[1_{[N-1/N, N+1/N]}], evaluated by midpoint
// quadrature in (xi_1, xi_2); the output mesh spans the full cubic support
// [N-3/N, N+3/N] at twice the band resolution.
IterateResult third_iterate_cubic(double s, double N, double t, int band_nodes);

// m-th iterate for cube data g_N = N^{-s-d/2} F^{-1}[1_{[-N,N]^d}], summing
// all 2^m sign patterns; each pattern is an (m-1)-fold tensor quadrature over
// [-N,N]^d with the exact oscillatory time weight. Full tensor quadrature
// requires d*(m-1) <= 4; beyond that a fixed-seed Monte Carlo fallback must be
// requested explicitly.
IterateResult general_iterate(const EquationSpec& spec, double s, double N, double t,
                              int nodes, bool monte_carlo = false,
                              std::uint64_t mc_seed = 0x9e3779b97f4a7c15ull,
                              int mc_samples = 100000);

// Duhamel integral -i int_0^T S(T-t') d(prod of free-evolved inputs) dt' by
// trapezoid quadrature. With a single input the full P_m of `spec` is used;
// with m inputs the single monomial of `spec` is polarized across the slots
// (first alpha slots unconjugated, last beta conjugated).
SpectralField duhamel_iterate(const std::vector<SpectralField>& inputs,
                              const EquationSpec& spec, double T, int steps);

// OLS fit of log2(hs_norm) against log2(N)
struct SlopeFit {
  double slope = 0, intercept = 0, r2 = 0;
};
SlopeFit inflation_slope(const std::vector<IterateResult>& results);

// max |Omega| over `count` alternating-sign samples drawn from the cubic band
// [N-1/N, N+1/N]^3 (constraint-consistent), used for the phase bound and the
// small-t rule
double band_phase_max(double N, int count, std::uint64_t seed);

}  // namespace b4ns

#endif
