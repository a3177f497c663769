#pragma once

#include <cstdint>
#include <span>

namespace pivotlab {

struct ProportionInterval {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion (default 95%).
ProportionInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                                   double z = 1.959963984540054);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs >= 2 points with
/// distinct x; otherwise throws std::invalid_argument.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // bootstrap
  double lo = 0.0;         // percentile 2.5%
  double hi = 0.0;         // percentile 97.5%
};

MeanEstimate bootstrap_mean(std::span<const double> values, int resamples, std::uint64_t seed);

double mean(std::span<const double> values);
double sample_std(std::span<const double> values);

}  // namespace pivotlab
