/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zenoline {

// Ordinary least-squares line y = slope * x + intercept.
// `unexplained` is sqrt(1 - R^2), zero for a perfect fit.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double unexplained = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("fit_line: size mismatch");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    throw std::invalid_argument("fit_line: need at least two points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("fit_line: degenerate abscissae");
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0.0) {
    fit.unexplained = 0.0;
  } else {
    const double r2 = (sxy * sxy) / (sxx * syy);
    fit.unexplained = std::sqrt(std::max(0.0, 1.0 - r2));
  }
  return fit;
}

// Least-squares slope of a line through the origin, plus the rms residual
// relative to the rms of y.
struct ProportionalFit {
  double slope = 0.0;
  double relative_residual = 0.0;
};

inline ProportionalFit fit_proportional(std::span<const double> x,
                                        std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("fit_proportional: size mismatch");
  }
  const std::size_t n = x.size();
  if (n < 1) {
    throw std::invalid_argument("fit_proportional: empty input");
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("fit_proportional: degenerate abscissae");
  }
  ProportionalFit fit;
  fit.slope = sxy / sxx;
  double ss_res = 0.0, ss_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.slope * x[i];
    ss_res += r * r;
    ss_y += y[i] * y[i];
  }
  const double rms_y = std::sqrt(ss_y / static_cast<double>(n));
  const double rms_res = std::sqrt(ss_res / static_cast<double>(n));
  fit.relative_residual = rms_y > 0.0 ? rms_res / rms_y : 0.0;
  return fit;
}

// FNV-1a 64-bit hash, used for config fingerprints in output headers.
inline std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf);
}

// Shortest round-trippable decimal form used for every floating-point field
// in CSV output, so reruns are byte-identical.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace zenoline
