#include "xinfl/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <string>

namespace xinfl {

double two_sided_t_pvalue(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  boost::math::students_t_distribution<double> dist(dof);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw UsageError("pearson: length mismatch (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  const std::size_t n = x.size();
  if (n < 3) throw UsageError("pearson: need at least 3 observations, got " + std::to_string(n));

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: zero variance, correlation undefined");

  Correlation c;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  if (std::fabs(c.r) == 1.0) {
    c.p = 0.0;
  } else {
    const double t = c.r * std::sqrt(dof / (1.0 - c.r * c.r));
    c.p = two_sided_t_pvalue(t, dof);
  }
  return c;
}

}  // namespace xinfl
