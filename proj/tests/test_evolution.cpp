#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "b4ns/evolution.hpp"
#include "b4ns/field.hpp"
#include "b4ns/strichartz.hpp"

using namespace b4ns;

namespace {

SpectralField band_bump(const Grid& g, double lo, double hi, double amp) {
  SpectralField u(g);
  const double c = (lo + hi) / 2.0, hw = (hi - lo) / 2.0;
  for (int k = 0; k < g.n; ++k) {
    if (g.is_nyquist(k)) continue;
    double r = (g.freq1(k) - c) / hw;
    if (std::fabs(r) < 1.0) u.coeffs[k] = amp * std::exp(1.0 - 1.0 / (1.0 - r * r));
  }
  return u;
}

SpectralField random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField u(g);
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
    if (g.nyquist_flat(k)) continue;
    u.coeffs[k] = cd{gauss(rng), gauss(rng)};
  }
  return u;
}

// u = a e^{i xi0 x} as physical samples
SpectralField single_mode(const Grid& g, double xi0, cd a) {
  std::vector<cd> phys(g.n);
  for (int j = 0; j < g.n; ++j) {
    double x = j * g.dx();
    phys[j] = a * cd{std::cos(xi0 * x), std::sin(xi0 * x)};
  }
  return from_physical(g, phys);
}

}  // namespace

TEST_CASE("free_propagate basics") {
  std::mt19937_64 rng(3);
  Grid g = make_grid(1, 64, 8.0 * pi);
  SpectralField u = random_field(g, rng);

  CHECK(rel_l2_diff(free_propagate(u, 0.0), u) == 0.0);

  for (double t : {0.3, 2.0, -1.7})
    for (double s : {-1.0, 0.0, 1.0, 2.0}) {
      SpectralField v = free_propagate(u, t);
      v.coeffs[0] = 0.0;
      SpectralField w = u;
      w.coeffs[0] = 0.0;
      CHECK(sobolev_norm(v, s, true) == doctest::Approx(sobolev_norm(w, s, true)).epsilon(1e-12));
    }

  // group law on random fields
  SpectralField ab = free_propagate(free_propagate(u, 0.7), 0.55);
  CHECK(rel_l2_diff(ab, free_propagate(u, 1.25)) < 1e-12);
}

TEST_CASE("free_propagate single mode phase") {
  Grid g = make_grid(1, 16, 2.0 * pi);
  SpectralField u(g);
  u.coeffs[1] = 1.0;  // xi = 1
  SpectralField v = free_propagate(u, pi);
  CHECK(v.coeffs[1].real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::fabs(v.coeffs[1].imag()) < 1e-12);
}

TEST_CASE("apply_nonlinearity on constants and single modes") {
  Grid g = make_grid(1, 64, 2.0 * pi);
  SpectralField c(g);
  c.coeffs[0] = 3.0;
  CHECK(l2_norm(apply_nonlinearity(c, quartic_conjugate_1d())) == 0.0);

  const double xi0 = 2.0;
  const cd a{0.3, 0.1};
  SpectralField u = single_mode(g, xi0, a);

  // P = conj(u)^4, d/dx: single output mode -4 xi0, amplitude -4 i xi0 conj(a)^4
  SpectralField n4 = apply_nonlinearity(u, quartic_conjugate_1d());
  cd expect4 = cd{0.0, -4.0 * xi0} * std::pow(std::conj(a), 4);
  int out_idx = g.n + int(-4 * xi0);  // wavenumber -8
  for (int k = 0; k < g.n; ++k) {
    cd phys_amp = n4.coeffs[k] * std::sqrt(2.0 * pi) / (g.dxi() * g.L);  // lattice->amplitude
    if (k == out_idx)
      CHECK(std::abs(phys_amp - expect4) < 1e-12);
    else
      CHECK(std::abs(n4.coeffs[k]) < 1e-14);
  }

  // P3 = u^2 conj(u): mode xi0 with amplitude i xi0 |a|^2 a
  SpectralField n3 = apply_nonlinearity(u, cubic_gauge_invariant_1d());
  cd expect3 = cd{0.0, xi0} * std::norm(a) * a;
  int idx3 = int(xi0);
  for (int k = 0; k < g.n; ++k) {
    cd phys_amp = n3.coeffs[k] * std::sqrt(2.0 * pi) / (g.dxi() * g.L);
    if (k == idx3)
      CHECK(std::abs(phys_amp - expect3) < 1e-12);
    else
      CHECK(std::abs(n3.coeffs[k]) < 1e-14);
  }
}

TEST_CASE("polarized product matches apply_nonlinearity on equal slots") {
  Grid g = make_grid(1, 64, 4.0 * pi);
  SpectralField u = band_bump(g, 1.0, 2.0, 0.7);
  SpectralField a = apply_nonlinearity(u, quartic_conjugate_1d());
  SpectralField b = polarized_derivative_product({u, u, u, u}, {true, true, true, true}, 1.0,
                                                 DerivKind::Coordinate, 0);
  CHECK(rel_l2_diff(a, b) < 1e-13);
}

TEST_CASE("step_integrate with zero nonlinearity is the exact free step") {
  std::mt19937_64 rng(5);
  Grid g = make_grid(1, 64, 8.0 * pi);
  SpectralField u = random_field(g, rng);
  EquationSpec zero{1, 2, {{2, 0, 0.0}}, DerivKind::Coordinate, 0};
  SpectralField a = step_integrate(u, zero, 0.37);
  CHECK(rel_l2_diff(a, free_propagate(u, 0.37)) == 0.0);
}

TEST_CASE("step_integrate is fourth order on smooth data") {
  Grid g = make_grid(1, 256, 64.0);
  SpectralField u0 = band_bump(g, 1.0, 2.0, 0.05);
  EquationSpec spec = quartic_conjugate_1d();
  const double dt = 1.0 / 1024.0;
  const long n1 = 64;
  SpectralField a = u0, b = u0, c = u0;
  for (long k = 0; k < n1; ++k) a = step_integrate(a, spec, dt);
  for (long k = 0; k < 2 * n1; ++k) b = step_integrate(b, spec, dt / 2);
  for (long k = 0; k < 4 * n1; ++k) c = step_integrate(c, spec, dt / 4);
  double order = std::log2(l2_norm(a - c) / l2_norm(b - c));
  CHECK(order > 3.7);
  CHECK(order < 4.3);

  // local error of two half steps vs one full step is O(dt^5): halving dt
  // shrinks the one-step defect by ~2^5
  auto defect = [&](double h) {
    SpectralField one = step_integrate(u0, spec, h);
    SpectralField two = step_integrate(step_integrate(u0, spec, h / 2), spec, h / 2);
    return l2_norm(one - two);
  };
  double r = defect(2.0 * dt) / defect(dt);
  CHECK(r > std::pow(2.0, 4.2));
  CHECK(r < std::pow(2.0, 5.8));
}

TEST_CASE("step_strang cross-checks the Lawson path") {
  Grid g = make_grid(1, 256, 64.0);
  SpectralField u0 = band_bump(g, 1.0, 2.0, 0.05);
  EquationSpec spec = quartic_conjugate_1d();
  const double dt = 1.0 / 1024.0;
  SpectralField a = u0, b = u0;
  for (int k = 0; k < 64; ++k) {
    a = step_integrate(a, spec, dt);
    b = step_strang(b, spec, dt);
  }
  CHECK(rel_l2_diff(a, b) < 1e-8);  // both approximate one flow; Strang is O(dt^2)
  EquationSpec zero = spec;
  zero.terms[0].coeff = 0.0;
  CHECK(rel_l2_diff(step_strang(u0, zero, 0.2), free_propagate(u0, 0.2)) == 0.0);
}

TEST_CASE("evolve plumbing") {
  Grid g = make_grid(1, 64, 16.0);
  EquationSpec spec = quartic_conjugate_1d();

  SpectralField zero_data(g);
  Trajectory z = evolve(zero_data, spec, 1.0, 0.125, 2);
  for (const auto& st : z.states) CHECK(l2_norm(st) == 0.0);

  SpectralField u0 = band_bump(g, 1.0, 2.0, 0.05);
  EquationSpec linear = spec;
  linear.terms[0].coeff = 0.0;
  Trajectory fr = evolve(u0, linear, 1.0, 0.125, 2);
  for (std::size_t k = 0; k < fr.times.size(); ++k)
    CHECK(rel_l2_diff(fr.states[k], free_propagate(u0, fr.times[k])) < 1e-12);

  // dt-refinement: halving dt changes the final state by < 1e-6 relative
  Trajectory c1 = evolve(u0, spec, 1.0, 1.0 / 256.0, 256);
  Trajectory c2 = evolve(u0, spec, 1.0, 1.0 / 512.0, 512);
  CHECK(rel_l2_diff(c1.states.back(), c2.states.back()) < 1e-6);

  CHECK_THROWS_AS(evolve(u0, spec, 1.0, 0.3, 1), std::invalid_argument);
}

TEST_CASE("evolve blow-up guard names the step") {
  Grid g = make_grid(1, 64, 16.0);
  SpectralField u0 = band_bump(g, 1.0, 2.0, 50.0);  // far outside the small-data regime
  EquationSpec spec = quartic_conjugate_1d();
  spec.terms[0].coeff = 1e8;
  try {
    evolve(u0, spec, 1.0, 0.05, 1);
    CHECK(false);
  } catch (const NumericalOverflow& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("scattering_limit diagnostics") {
  Grid g = make_grid(1, 64, 16.0);
  SpectralField u0 = band_bump(g, 1.0, 2.0, 0.05);
  EquationSpec linear = quartic_conjugate_1d();
  linear.terms[0].coeff = 0.0;
  Trajectory fr = evolve(u0, linear, 1.0, 0.125, 1);
  auto [uplus, diag] = scattering_limit(fr);
  CHECK(rel_l2_diff(uplus, u0) < 1e-12);
  for (double d : diag.deltas) CHECK(d < 1e-12);

  SpectralField z(g);
  Trajectory zt = evolve(z, linear, 1.0, 0.125, 1);
  CHECK(l2_norm(scattering_limit(zt).first) == 0.0);
}

TEST_CASE("admissible_pair_check exact rational arithmetic") {
  CHECK(admissible_pair_check(Exponent::of(4), Exponent::inf(), 1));
  CHECK_FALSE(admissible_pair_check(Exponent::of(2), Exponent::inf(), 2));
  for (int d = 1; d <= 4; ++d) CHECK(admissible_pair_check(Exponent::inf(), Exponent::of(2), d));
  // near miss must be rejected: 2/p + d/q = d/2 fails by 1/q0 for huge q0
  CHECK_FALSE(admissible_pair_check(Exponent::of(4), Exponent::of(1000000000), 1));
  CHECK_THROWS_AS(admissible_pair_check(Exponent::of(3, 2), Exponent::of(2), 1),
                  std::invalid_argument);
}

TEST_CASE("xs_exponents") {
  auto [p23, q23] = xs_exponents(2, 3);
  CHECK(p23.value() == doctest::Approx(4.0));
  CHECK(q23.value() == doctest::Approx(4.0));

  auto [p13, q13] = xs_exponents(1, 3);
  CHECK(p13.value() == doctest::Approx(4.0));
  CHECK(q13.infinite);

  auto [p42, q42] = xs_exponents(4, 2);
  CHECK(p42.value() == doctest::Approx(2.0));
  CHECK(q42.value() == doctest::Approx(4.0));
  CHECK(admissible_pair_check(p42, q42, 4));

  CHECK_THROWS_AS(xs_exponents(1, 2), std::invalid_argument);
}

TEST_CASE("mixed_norm") {
  Grid g = make_grid(1, 64, 16.0);
  SpectralField u = band_bump(g, 1.0, 2.0, 0.5);
  Trajectory tr;
  tr.spec = EquationSpec{1, 2, {{2, 0, 0.0}}, DerivKind::Coordinate, 0};
  const double T = 2.0;
  for (int k = 0; k <= 64; ++k) {
    tr.times.push_back(T * k / 64);
    tr.states.push_back(u);  // constant in time
  }
  double l2x = lq_norm(u, Exponent::of(2));
  CHECK(mixed_norm(tr, Exponent::of(4), Exponent::of(2)) ==
        doctest::Approx(std::pow(T, 0.25) * l2x).epsilon(1e-10));
  CHECK(mixed_norm(tr, Exponent::inf(), Exponent::of(2)) == doctest::Approx(l2x).epsilon(1e-12));

  // refinement stability on a free trajectory
  Trajectory a, b;
  a.spec = b.spec = tr.spec;
  for (int k = 0; k <= 64; ++k) {
    a.times.push_back(T * k / 64);
    a.states.push_back(free_propagate(u, a.times.back()));
  }
  for (int k = 0; k <= 128; ++k) {
    b.times.push_back(T * k / 128);
    b.states.push_back(free_propagate(u, b.times.back()));
  }
  double na = mixed_norm(a, Exponent::of(4), Exponent::inf());
  double nb = mixed_norm(b, Exponent::of(4), Exponent::inf());
  CHECK(std::fabs(na - nb) / nb < 0.02);
}

TEST_CASE("strichartz_ratio") {
  Grid g = make_grid(1, 128, 16.0 * pi);
  SpectralField phi = band_bump(g, 1.0, 2.0, 1.0);
  const auto p = Exponent::of(4);
  const auto q = Exponent::inf();

  double r1 = strichartz_ratio(phi, p, q, 1.0, 129);
  CHECK(r1 > 0.0);
  CHECK(std::isfinite(r1));
  // homogeneity: invariant under phi -> c phi
  SpectralField cphi = cd{2.5, 0.0} * phi;
  CHECK(strichartz_ratio(cphi, p, q, 1.0, 129) == doctest::Approx(r1).epsilon(1e-12));
  // sampling refinement stable to 2%
  double r2 = strichartz_ratio(phi, p, q, 1.0, 257);
  CHECK(std::fabs(r1 - r2) / r2 < 0.02);

  CHECK_THROWS_AS(strichartz_ratio(phi, Exponent::of(3), q, 1.0, 129), std::invalid_argument);
  SpectralField with_mean = phi;
  with_mean.coeffs[0] = 1.0;
  CHECK_THROWS_AS(strichartz_ratio(with_mean, p, q, 1.0, 129), std::invalid_argument);
}
