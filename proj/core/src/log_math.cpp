#include "kounit/log_math.hpp"

#include <algorithm>
#include <cmath>

namespace kounit {

double log_add(double a, double b) noexcept {
  if (is_log_zero(a)) return clamp_log(b);
  if (is_log_zero(b)) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> values) noexcept {
  double max = kLogZero;
  for (double v : values) max = std::max(max, v);
  if (is_log_zero(max)) return kLogZero;
  double sum = 0.0;
  for (double v : values) {
    if (!is_log_zero(v)) sum += std::exp(v - max);
  }
  return max + std::log(sum);
}

}  // namespace kounit
