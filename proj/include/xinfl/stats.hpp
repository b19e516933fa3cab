#pragma once

#include <span>

#include "xinfl/error.hpp"

namespace xinfl {

// Raised when either input has zero variance.
class UndefinedCorrelation : public DataError {
 public:
  using DataError::DataError;
};

struct Correlation {
  double r = 0.0;
  double p = 1.0;
};

// Sample Pearson coefficient with a two-sided p-value from
// t = r * sqrt((n - 2) / (1 - r^2)) under Student's t with n - 2 degrees of
// freedom. Requires equal lengths of at least 3.
Correlation pearson(std::span<const double> x, std::span<const double> y);

// Two-sided tail probability P(|T| >= |t|) for Student's t.
double two_sided_t_pvalue(double t, double dof);

}  // namespace xinfl
