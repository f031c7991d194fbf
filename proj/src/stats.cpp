#include "fogsched/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "fogsched/error.hpp"

namespace fogsched {

double t_quantile(double confidence, double dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

SampleSummary t_interval(std::span<const double> samples, double confidence) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "t interval needs at least two samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, t_quantile(confidence, static_cast<double>(n - 1)) * sd / std::sqrt(static_cast<double>(n))};
}

}  // namespace fogsched
