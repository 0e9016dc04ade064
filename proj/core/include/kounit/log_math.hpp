#pragma once

#include <span>

namespace kounit {

// Natural-log probabilities. "log 0" is the finite sentinel kLogZero; any
// value at or below kLogZeroThreshold is treated as log 0 and never passed
// to exp().
inline constexpr double kLogZero = -1.0e38;
inline constexpr double kLogZeroThreshold = -1.0e30;

constexpr bool is_log_zero(double x) noexcept { return x <= kLogZeroThreshold; }

// Clamps anything that fell below the threshold back onto the sentinel.
constexpr double clamp_log(double x) noexcept { return is_log_zero(x) ? kLogZero : x; }

double log_add(double a, double b) noexcept;
double log_sum_exp(std::span<const double> values) noexcept;

// log p * q with the sentinel kept absorbing.
constexpr double log_mul(double a, double b) noexcept {
  return (is_log_zero(a) || is_log_zero(b)) ? kLogZero : a + b;
}

}  // namespace kounit
