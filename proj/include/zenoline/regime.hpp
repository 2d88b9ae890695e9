/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "zenoline/errors.hpp"
#include "zenoline/evolution.hpp"
#include "zenoline/numerics.hpp"

namespace zenoline {

struct FitOptions {
  double quad_window = 0.10;        // earliest fraction eligible for the t^2 fit
  double exp_window = 0.50;         // latest fraction used for the ln fit
  double crossover_tol = 0.01;      // relative separation gate for T_q
  double quad_survival_floor = 0.99;
};

// Two-regime characterization of a survival curve: a short-time quadratic
// law 1 - (gamma_fit t)^2 and a long-time exponential A e^{-gamma_exp t},
// with t_q the time where the fitted models cross.
struct DecayFit {
  double gamma_fit = 0.0;
  bool quadratic_found = false;
  double quadratic_residual = 0.0;
  double gamma_exp = 0.0;
  double prefactor = 1.0;
  bool exponential_found = false;
  double exponential_residual = 0.0;
  std::optional<double> t_q;
};

inline DecayFit fit_decay(std::span<const double> times,
                          std::span<const double> survival,
                          const FitOptions& options = {}) {
  if (times.size() != survival.size()) {
    throw std::invalid_argument("fit_decay: size mismatch");
  }
  if (!(options.quad_window > 0.0) || !(options.exp_window > 0.0) ||
      options.quad_window >= 1.0 || options.exp_window >= 1.0) {
    throw std::invalid_argument("fit windows must lie in (0, 1)");
  }
  if (options.quad_window + options.exp_window > 1.0) {
    throw std::invalid_argument("fit windows overlap");
  }
  const std::size_t n = times.size();
  const std::size_t quad_count = static_cast<std::size_t>(
      std::ceil(options.quad_window * static_cast<double>(n)));
  const std::size_t exp_count = static_cast<std::size_t>(
      std::floor(options.exp_window * static_cast<double>(n)));
  if (quad_count < 10 || exp_count < 10) {
    throw std::invalid_argument(
        "trajectory too short for the requested fit windows");
  }

  DecayFit fit;

  // Short-time window: samples inside the earliest quad_window fraction that
  // still sit above the survival floor, fit as 1 - P_s = slope * t^2 through
  // the origin.
  {
    std::vector<double> x2, y;
    std::size_t positive_times = 0;
    for (std::size_t i = 0; i < quad_count; ++i) {
      if (survival[i] > options.quad_survival_floor) {
        x2.push_back(times[i] * times[i]);
        y.push_back(1.0 - survival[i]);
        if (times[i] > 0.0) {
          ++positive_times;
        }
      }
    }
    if (positive_times >= 3) {
      const ProportionalFit prop = fit_proportional(x2, y);
      fit.quadratic_residual = prop.relative_residual;
      if (prop.slope >= 0.0 && prop.relative_residual < 0.05) {
        fit.gamma_fit = std::sqrt(prop.slope);
        fit.quadratic_found = true;
      }
    }
  }

  // Long-time window: ordinary least squares on ln P_s over the final
  // exp_window fraction.
  {
    const std::size_t start = n - exp_count;
    std::vector<double> x, y;
    x.reserve(exp_count);
    y.reserve(exp_count);
    for (std::size_t i = start; i < n; ++i) {
      if (!(survival[i] > 0.0)) {
        throw numeric_error(
            "survival reaches zero inside the exponential fit window");
      }
      x.push_back(times[i]);
      y.push_back(std::log(survival[i]));
    }
    const LineFit line = fit_line(x, y);
    fit.exponential_residual = line.unexplained;
    fit.prefactor = std::exp(line.intercept);
    fit.gamma_exp = std::max(0.0, -line.slope);
    fit.exponential_found = line.slope <= 0.0 && line.unexplained < 0.1;
  }

  // Crossover: the first sign change of quadratic minus exponential over the
  // sample grid, accepted only if the models had already separated by more
  // than the tolerance before crossing.
  if (fit.quadratic_found && fit.exponential_found) {
    const auto quadratic = [&](double t) {
      return 1.0 - fit.gamma_fit * fit.gamma_fit * t * t;
    };
    const auto exponential = [&](double t) {
      return fit.prefactor * std::exp(-fit.gamma_exp * t);
    };
    bool separated = false;
    bool have_prev = false;
    double prev_d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = times[i];
      if (!(t > 0.0)) {
        continue;
      }
      const double e = exponential(t);
      const double d = quadratic(t) - e;
      if (have_prev && ((prev_d > 0.0 && d <= 0.0) ||
                        (prev_d < 0.0 && d >= 0.0))) {
        if (separated) {
          fit.t_q = t;
        }
        break;
      }
      if (e > 0.0 && std::abs(d) / e > options.crossover_tol) {
        separated = true;
      }
      prev_d = d;
      have_prev = true;
    }
  }
  return fit;
}

inline DecayFit fit_decay(const Trajectory& traj,
                          const FitOptions& options = {}) {
  return fit_decay(traj.times, traj.survival, options);
}

struct TqRow {
  double length = 0.0;
  double time = 0.0;
  double survival = 0.0;
  double expected = 0.0;   // exponential extrapolation at this time
  bool departure = false;  // survival exceeds expected by more than tol
};

struct TqTable {
  std::vector<TqRow> rows;  // ordered from longest to shortest length
  std::optional<double> t_q_estimate;
  bool exponential_ok = false;
  double gamma_exp = 0.0;
  double prefactor = 1.0;
};

// Core of the fiber-shortening experiment: fit the exponential tail on the
// longest half of the lengths, extrapolate toward zero, and flag the rows
// that sit above the extrapolation. The estimate is the flight time of the
// first flagged row in the descending scan.
inline TqTable detect_departure(std::span<const double> lengths,
                                std::span<const double> survival, double v_f,
                                double tol = 0.01) {
  if (lengths.size() != survival.size()) {
    throw std::invalid_argument("detect_departure: size mismatch");
  }
  const std::size_t n = lengths.size();
  if (n < 4) {
    throw std::invalid_argument(
        "departure detection needs at least 4 lengths");
  }
  if (!(v_f > 0.0)) {
    throw std::invalid_argument("fiber velocity must be positive");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(lengths[i] < lengths[i - 1])) {
      throw std::invalid_argument(
          "lengths must be sorted strictly descending");
    }
  }
  const std::size_t fit_count = (n + 1) / 2;
  std::vector<double> x, y;
  x.reserve(fit_count);
  y.reserve(fit_count);
  for (std::size_t i = 0; i < fit_count; ++i) {
    if (!(survival[i] > 0.0)) {
      throw numeric_error("survival must be positive in the fit region");
    }
    x.push_back(lengths[i] / v_f);
    y.push_back(std::log(survival[i]));
  }
  const LineFit line = fit_line(x, y);
  TqTable table;
  table.gamma_exp = std::max(0.0, -line.slope);
  table.prefactor = std::exp(line.intercept);
  table.exponential_ok = line.slope <= 0.0 && line.unexplained < 0.1;
  table.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    TqRow row;
    row.length = lengths[i];
    row.time = lengths[i] / v_f;
    row.survival = survival[i];
    row.expected = table.prefactor * std::exp(-table.gamma_exp * row.time);
    row.departure = row.survival > row.expected * (1.0 + tol);
    if (row.departure && !table.t_q_estimate) {
      table.t_q_estimate = row.time;
    }
    table.rows.push_back(row);
  }
  return table;
}

// Simulate the experiment on a model: propagate the pulse across each fiber
// length and hand the measured survivals to detect_departure.
inline TqTable tq_experiment(const HamiltonianMatrix& h,
                             const ExcitationState& state,
                             std::span<const double> lengths, double v_f,
                             double tol = 0.01) {
  if (lengths.size() < 4) {
    throw std::invalid_argument(
        "departure detection needs at least 4 lengths");
  }
  if (!(v_f > 0.0)) {
    throw std::invalid_argument("fiber velocity must be positive");
  }
  detail::check_state_shape(state, h);
  const Propagator prop(h);
  std::vector<double> survival;
  survival.reserve(lengths.size());
  for (const double length : lengths) {
    if (!(length > 0.0)) {
      throw std::invalid_argument("fiber lengths must be positive");
    }
    survival.push_back(
        survival_probability(prop.apply(state, length / v_f)));
  }
  return detect_departure(lengths, survival, v_f, tol);
}

// Longest repeater segment compatible with the quadratic regime: the photon
// must reach the next detector within T_q.
inline double max_device_spacing(double t_q, double v_f) {
  if (!(t_q > 0.0) || !(v_f > 0.0)) {
    throw std::invalid_argument(
        "max_device_spacing requires positive t_q and v_f");
  }
  return v_f * t_q;
}

}  // namespace zenoline
