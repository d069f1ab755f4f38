#include "b4ns/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace b4ns {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW planning is not thread-safe; executing a cached plan on new arrays is.
struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::pair<int, int>, int>, fftw_plan> plans;  // ((d,n),sign)

  fftw_plan get(int d, int n, int sign) {
    std::scoped_lock lk(mu);
    auto key = std::make_pair(std::make_pair(d, n), sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::size_t sz = d == 1 ? std::size_t(n) : std::size_t(n) * n;
    std::vector<cd> tmp(sz);
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    fftw_plan plan = d == 1 ? fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE)
                            : fftw_plan_dft_2d(n, n, p, p, sign, FFTW_ESTIMATE);
    plans[key] = plan;
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run_plan(int d, int n, int sign, std::vector<cd>& data) {
  fftw_plan plan = cache().get(d, n, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

void dft_inplace(std::vector<cd>& data, int sign) {
  fftw_plan plan = cache().get(1, int(data.size()), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

Grid make_grid(int d, int n, double L) {
  if (d != 1 && d != 2) throw std::invalid_argument("make_grid: d must be 1 or 2");
  if (!power_of_two(n) || n < 8)
    throw std::invalid_argument("make_grid: n must be a power of two >= 8");
  if (!(L > 0)) throw std::invalid_argument("make_grid: L must be positive");
  return Grid{d, n, L};
}

void SpectralField::zero_nyquist() {
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (grid.nyquist_flat(k)) coeffs[k] = 0.0;
}

std::vector<cd> to_physical(const SpectralField& u) {
  std::vector<cd> out = u.coeffs;
  run_plan(u.grid.d, u.grid.n, FFTW_BACKWARD, out);
  const double scale = std::pow(u.grid.dxi() / std::sqrt(2.0 * pi), u.grid.d);
  for (auto& v : out) v *= scale;
  return out;
}

SpectralField from_physical(const Grid& g, const std::vector<cd>& phys) {
  if (phys.size() != g.size()) throw std::invalid_argument("from_physical: size mismatch");
  SpectralField u(g);
  u.coeffs = phys;
  run_plan(g.d, g.n, FFTW_FORWARD, u.coeffs);
  const double scale = std::pow(g.dx() / std::sqrt(2.0 * pi), g.d);
  for (auto& v : u.coeffs) v *= scale;
  u.zero_nyquist();
  return u;
}

double l2_norm(const SpectralField& u) { return sobolev_norm(u, 0.0, false); }

double sobolev_norm(const SpectralField& u, double s, bool homogeneous) {
  const double w0 = std::pow(u.grid.dxi(), u.grid.d);
  double acc = 0.0;
  for (std::size_t k = 0; k < u.coeffs.size(); ++k) {
    const double a2 = std::norm(u.coeffs[k]);
    const double xi2 = u.grid.freq_sq(k);
    if (homogeneous && xi2 == 0.0) {
      if (s < 0.0 && a2 > 0.0)
        throw std::domain_error("sobolev_norm: homogeneous s<0 requires vanishing zero mode");
      if (s == 0.0) acc += a2;  // |xi|^0 = 1
      continue;                 // weight 0 for s>0, excluded for s<0
    }
    const double w = homogeneous ? std::pow(xi2, s) : std::pow(1.0 + xi2, s);
    acc += w * a2;
  }
  return std::sqrt(acc * w0);
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("field +: grid mismatch");
  SpectralField r = a;
  for (std::size_t k = 0; k < r.coeffs.size(); ++k) r.coeffs[k] += b.coeffs[k];
  return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("field -: grid mismatch");
  SpectralField r = a;
  for (std::size_t k = 0; k < r.coeffs.size(); ++k) r.coeffs[k] -= b.coeffs[k];
  return r;
}

SpectralField operator*(cd c, const SpectralField& a) {
  SpectralField r = a;
  for (auto& v : r.coeffs) v *= c;
  return r;
}

void axpy(cd c, const SpectralField& x, SpectralField& y) {
  if (!(x.grid == y.grid)) throw std::invalid_argument("axpy: grid mismatch");
  for (std::size_t k = 0; k < y.coeffs.size(); ++k) y.coeffs[k] += c * x.coeffs[k];
}

double rel_l2_diff(const SpectralField& a, const SpectralField& b) {
  double num = l2_norm(a - b), den = l2_norm(b);
  return den > 0 ? num / den : num;
}

SpectralField regrid(const SpectralField& u, const Grid& target) {
  const Grid& g = u.grid;
  if (target.d != g.d || target.L != g.L)
    throw std::invalid_argument("regrid: dimension/period mismatch");
  SpectralField r(target);
  auto map1 = [](const Grid& from, const Grid& to, int k, int& out) {
    int s = from.signed_index(k);
    if (s < -to.n / 2 || s >= to.n / 2) return false;
    out = s >= 0 ? s : s + to.n;
    return true;
  };
  if (g.d == 1) {
    for (int k = 0; k < g.n; ++k) {
      int j;
      if (!g.is_nyquist(k) && map1(g, target, k, j)) r.coeffs[j] = u.coeffs[k];
    }
  } else {
    for (int ka = 0; ka < g.n; ++ka)
      for (int kb = 0; kb < g.n; ++kb) {
        if (g.is_nyquist(ka) || g.is_nyquist(kb)) continue;
        int ja, jb;
        if (map1(g, target, ka, ja) && map1(g, target, kb, jb))
          r.coeffs[std::size_t(ja) * target.n + jb] = u.coeffs[std::size_t(ka) * g.n + kb];
      }
  }
  r.zero_nyquist();
  return r;
}

}  // namespace b4ns
