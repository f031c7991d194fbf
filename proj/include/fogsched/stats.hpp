#pragma once

#include <span>

namespace fogsched {

struct SampleSummary {
  double mean = 0.0;
  double half_width = 0.0;  // Student-t half-width of the two-sided interval
};

// Two-sided Student-t interval for the mean; needs at least two samples.
SampleSummary t_interval(std::span<const double> samples, double confidence = 0.95);

// Upper (1 + confidence)/2 quantile of Student's t with `dof` degrees of freedom.
double t_quantile(double confidence, double dof);

}  // namespace fogsched
