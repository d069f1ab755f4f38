#include "b4ns/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace b4ns {

PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (xs.size() < 4) throw std::invalid_argument("fit_power_law: need >= 4 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = double(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] > 0) || !(ys[k] > 0))
      throw std::invalid_argument("fit_power_law: data must be positive");
    double x = std::log(xs[k]), y = std::log(ys[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  PowerLawFit fit;
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_power_law: degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = ss_tot - fit.slope * (sxy - sx * sy / n);
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double avg = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("spearman: need matched samples, >= 2");
  auto rx = ranks(xs), ry = ranks(ys);
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    mx += rx[k];
    my += ry[k];
  }
  mx /= rx.size();
  my /= ry.size();
  double num = 0, dx = 0, dy = 0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    num += (rx[k] - mx) * (ry[k] - my);
    dx += (rx[k] - mx) * (rx[k] - mx);
    dy += (ry[k] - my) * (ry[k] - my);
  }
  if (dx == 0 || dy == 0) return 0.0;
  return num / std::sqrt(dx * dy);
}

}  // namespace b4ns
