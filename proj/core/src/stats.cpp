#include "pivotlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pivotlab/rng.hpp"

namespace pivotlab {

ProportionInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
  if (successes < 0 || successes > trials) throw std::invalid_argument("wilson_interval: bad count");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("linear_fit: need at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  f.points = x.size();
  return f;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double s = 0;
  for (double v : values) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values.size() - 1));
}

MeanEstimate bootstrap_mean(std::span<const double> values, int resamples, std::uint64_t seed) {
  MeanEstimate out;
  out.mean = mean(values);
  if (values.empty() || resamples < 2) {
    out.lo = out.hi = out.mean;
    return out;
  }
  CounterRng rng(StreamKey(seed).child(0xb007));
  std::vector<double> reps(static_cast<std::size_t>(resamples));
  for (double& r : reps) {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[rng.below(values.size())];
    r = s / static_cast<double>(values.size());
  }
  out.std_error = sample_std(reps);
  std::sort(reps.begin(), reps.end());
  const auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(reps.size() - 1)));
    return reps[idx];
  };
  out.lo = at(0.025);
  out.hi = at(0.975);
  return out;
}

}  // namespace pivotlab
