#ifndef B4NS_FIT_HPP
#define B4NS_FIT_HPP

#include <vector>

namespace b4ns {

struct PowerLawFit {
  double slope = 0, intercept = 0, r2 = 0;
};

// OLS of log(y) against log(x); needs >= 4 strictly positive points
PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

// Spearman rank correlation (average ranks on ties)
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace b4ns

#endif
