/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zenoline/errors.hpp"
#include "zenoline/qnd.hpp"
#include "zenoline/regime.hpp"

namespace zenoline {

struct PlanOptions {
  int m_max = 10000;                   // device-count scan bound
  std::optional<double> gamma_exp;     // measured exponential rate, if any
  double segment_transmission = 1.0;   // passive transmission per segment
};

// A link of length L split by M equally spaced QND devices into M + 1
// segments. Survival folds the quadratic Zeno factor per segment, the device
// heralding efficiency per device, and passive segment transmission;
// fidelity folds the per-device birefringent phase for a diagonal input
// polarization.
struct LinkPlan {
  double length = 0.0;
  double v_f = 0.0;
  int devices = 0;
  double spacing = 0.0;
  double tau_seg = 0.0;
  double survival = 0.0;
  double fidelity = 1.0;
  double baseline = 0.0;  // undivided-link survival for comparison
};

namespace detail {

struct SegmentCheck {
  bool feasible = false;
  double spacing = 0.0;
  double tau_seg = 0.0;
};

inline SegmentCheck check_segments(double length, double v_f, double gamma,
                                   double t_q, int devices) {
  SegmentCheck check;
  check.spacing = length / (static_cast<double>(devices) + 1.0);
  check.tau_seg = check.spacing / v_f;
  check.feasible =
      check.spacing < v_f * t_q && gamma * check.tau_seg < 1.0;
  return check;
}

inline double link_survival(double gamma, double tau_seg, int devices,
                            const QndDeviceModel& device,
                            double segment_transmission) {
  const double loss = gamma * tau_seg;
  const double per_segment = (1.0 - loss * loss) * segment_transmission;
  return std::pow(per_segment, static_cast<double>(devices) + 1.0) *
         std::pow(device.eta, static_cast<double>(devices));
}

inline double link_fidelity(int devices, const QndDeviceModel& device) {
  const double half = 0.5 * static_cast<double>(devices) * device.delta;
  const double c = std::cos(half);
  return c * c;
}

inline LinkPlan make_plan(double length, double v_f, double gamma, double t_q,
                          const QndDeviceModel& device, int devices,
                          const SegmentCheck& check,
                          const PlanOptions& options) {
  LinkPlan plan;
  plan.length = length;
  plan.v_f = v_f;
  plan.devices = devices;
  plan.spacing = check.spacing;
  plan.tau_seg = check.tau_seg;
  plan.survival = link_survival(gamma, check.tau_seg, devices, device,
                                options.segment_transmission);
  plan.fidelity = link_fidelity(devices, device);
  if (options.gamma_exp) {
    plan.baseline = std::exp(-(*options.gamma_exp) * length / v_f);
  } else {
    const SegmentCheck bare = check_segments(length, v_f, gamma, t_q, 0);
    plan.baseline = bare.feasible
                        ? link_survival(gamma, bare.tau_seg, 0, device,
                                        options.segment_transmission)
                        : 0.0;
  }
  return plan;
}

inline void validate_plan_inputs(double length, double v_f, double gamma,
                                 double t_q, const QndDeviceModel& device,
                                 const PlanOptions& options) {
  if (!(length > 0.0) || !(v_f > 0.0) || !(t_q > 0.0)) {
    throw std::invalid_argument(
        "link planning requires positive length, v_f and t_q");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be a finite non-negative rate");
  }
  if (options.m_max < 0) {
    throw std::invalid_argument("device-count bound must be non-negative");
  }
  if (!(options.segment_transmission > 0.0) ||
      options.segment_transmission > 1.0) {
    throw std::invalid_argument("segment transmission must lie in (0, 1]");
  }
  if (options.gamma_exp && !(*options.gamma_exp >= 0.0)) {
    throw std::invalid_argument("gamma_exp must be non-negative");
  }
  device.validate();
}

}  // namespace detail

// Plan a link with a fixed device count, or pick the count that maximizes
// survival over [0, m_max] when devices is not given. Ties keep the smaller
// count. A plan whose segments violate the spacing bound v_f * t_q or the
// quadratic-law domain gamma * tau < 1 is rejected.
inline LinkPlan plan_link(double length, double v_f, double gamma, double t_q,
                          const QndDeviceModel& device,
                          std::optional<int> devices,
                          const PlanOptions& options = {}) {
  detail::validate_plan_inputs(length, v_f, gamma, t_q, device, options);
  if (devices) {
    if (*devices < 0) {
      throw std::invalid_argument("device count must be non-negative");
    }
    const detail::SegmentCheck check =
        detail::check_segments(length, v_f, gamma, t_q, *devices);
    if (!check.feasible) {
      if (!(check.spacing < v_f * t_q)) {
        throw numeric_error(
            "device spacing exceeds the quadratic-regime bound v_f * t_q");
      }
      throw numeric_error(
          "segment flight time leaves the quadratic-law domain");
    }
    return detail::make_plan(length, v_f, gamma, t_q, device, *devices, check,
                             options);
  }
  std::optional<LinkPlan> best;
  for (int m = 0; m <= options.m_max; ++m) {
    const detail::SegmentCheck check =
        detail::check_segments(length, v_f, gamma, t_q, m);
    if (!check.feasible) {
      continue;
    }
    LinkPlan plan =
        detail::make_plan(length, v_f, gamma, t_q, device, m, check, options);
    if (!best || plan.survival > best->survival) {
      best = plan;
    }
  }
  if (!best) {
    throw numeric_error(
        "no feasible device count: even the densest division violates the "
        "quadratic-regime bounds");
  }
  return *best;
}

// Every feasible device count in [0, m_max], in increasing order.
inline std::vector<LinkPlan> plan_link_scan(double length, double v_f,
                                            double gamma, double t_q,
                                            const QndDeviceModel& device,
                                            const PlanOptions& options = {}) {
  detail::validate_plan_inputs(length, v_f, gamma, t_q, device, options);
  std::vector<LinkPlan> plans;
  for (int m = 0; m <= options.m_max; ++m) {
    const detail::SegmentCheck check =
        detail::check_segments(length, v_f, gamma, t_q, m);
    if (check.feasible) {
      plans.push_back(detail::make_plan(length, v_f, gamma, t_q, device, m,
                                        check, options));
    }
  }
  return plans;
}

// Photon storage in a fiber loop with one QND device, measured once per
// round trip of duration loop_time.
struct MemoryPlan {
  double loop_time = 0.0;
  int round_trips = 0;
  std::vector<double> survival;  // after k = 1 .. round_trips passes
  std::vector<double> fidelity;
};

inline MemoryPlan memory_loop(double loop_time, int round_trips, double gamma,
                              const QndDeviceModel& device) {
  if (!(loop_time > 0.0)) {
    throw std::invalid_argument("loop time must be positive");
  }
  if (round_trips < 1) {
    throw std::invalid_argument("round trips must be at least 1");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be a finite non-negative rate");
  }
  device.validate();
  const double loss = gamma * loop_time;
  if (loss >= 1.0) {
    throw numeric_error(
        "round-trip time leaves the quadratic-law domain");
  }
  const double per_trip = (1.0 - loss * loss) * device.eta;
  MemoryPlan plan;
  plan.loop_time = loop_time;
  plan.round_trips = round_trips;
  plan.survival.reserve(static_cast<std::size_t>(round_trips));
  plan.fidelity.reserve(static_cast<std::size_t>(round_trips));
  double cumulative = 1.0;
  for (int k = 1; k <= round_trips; ++k) {
    cumulative *= per_trip;
    plan.survival.push_back(cumulative);
    const double c = std::cos(0.5 * static_cast<double>(k) * device.delta);
    plan.fidelity.push_back(c * c);
  }
  return plan;
}

}  // namespace zenoline
