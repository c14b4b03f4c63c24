#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "zklab/estimates.hpp"

namespace zk {

ThresholdCheck make_check(std::string name, double value, std::string relation, double bound) {
  bool ok = false;
  if (relation == "<")
    ok = value < bound;
  else if (relation == "<=")
    ok = value <= bound;
  else if (relation == ">")
    ok = value > bound;
  else if (relation == ">=")
    ok = value >= bound;
  else
    throw std::invalid_argument("make_check: unknown relation " + relation);
  ok = ok && std::isfinite(value);
  return {std::move(name), value, bound, std::move(relation), ok};
}

bool EstimateReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ThresholdCheck& c) { return c.passed; });
}

void EstimateReport::finalize() {
  const bool valid = std::all_of(ratios.begin(), ratios.end(),
                                 [](double r) { return std::isfinite(r) && r >= 0.0; });
  max_ratio = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
  checks.insert(checks.begin(), make_check("ratios_finite_nonnegative", valid ? 1.0 : 0.0, ">=", 1.0));
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fitted_slope: need at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fitted_slope: x values are all equal");
  return sxy / sxx;
}

double relative_drift(double base, double refined) {
  const double diff = std::abs(refined - base);
  return base != 0.0 ? diff / std::abs(base) : diff;
}

}  // namespace zk
