#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace irsim::stats {

/// Neumaier-compensated sum; sequential over the span, so the result does
/// not depend on how the values were produced (worker count, scheduling).
inline double neumaier_sum(std::span<const double> values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

inline double mean(std::span<const double> values) {
  return neumaier_sum(values) / double(values.size());
}

/// Standard error of the mean from the sample variance.
inline double std_error(std::span<const double> values, double mean_value) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double d = (v - mean_value) * (v - mean_value);
    const double t = acc + d;
    if (std::abs(acc) >= d) {
      comp += (acc - t) + d;
    } else {
      comp += (d - t) + acc;
    }
    acc = t;
  }
  const double var = (acc + comp) / double(n - 1);
  return std::sqrt(var / double(n));
}

}  // namespace irsim::stats
