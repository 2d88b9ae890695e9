/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "zenoline/core_model.hpp"
#include "zenoline/evolution.hpp"
#include "zenoline/rng.hpp"

namespace zenoline {

// Map an angle into (-pi, pi].
inline double normalize_angle(double theta) {
  const double r = std::remainder(theta, 2.0 * std::numbers::pi);
  return r <= -std::numbers::pi ? std::numbers::pi : r;
}

// Cross-Kerr nondemolition detector. theta is the conditional phase written
// onto the probe per signal photon, alpha_p the probe amplitude, eta the
// probability a present photon is heralded and survives, eps the probability
// it is absorbed by the device, delta a deterministic birefringent phase
// picked up by the V polarization per measurement.
struct QndDeviceModel {
  double theta = 0.0;
  complex alpha_p{0.0, 0.0};
  double eta = 1.0;
  double eps = 0.0;
  double delta = 0.0;

  static QndDeviceModel ideal() { return QndDeviceModel{}; }

  void validate() const {
    if (!std::isfinite(theta) || !std::isfinite(delta) ||
        !std::isfinite(alpha_p.real()) || !std::isfinite(alpha_p.imag())) {
      throw std::invalid_argument("device parameters must be finite");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
      throw std::invalid_argument("device eta must lie in [0, 1]");
    }
    if (!(eps >= 0.0 && eps <= 1.0)) {
      throw std::invalid_argument("device eps must lie in [0, 1]");
    }
    if (eta + eps > 1.0 + 1e-12) {
      throw std::invalid_argument("device requires eta + eps <= 1");
    }
  }
};

inline QndDeviceModel make_device(double theta, complex alpha_p, double eta,
                                  double eps, double delta) {
  QndDeviceModel device;
  device.theta = normalize_angle(theta);
  device.alpha_p = alpha_p;
  device.eta = eta;
  device.eps = eps;
  device.delta = delta;
  device.validate();
  return device;
}

// Probe phase factor e^{i n_s theta} for signal photon number n_s in {0, 1}.
inline complex probe_phase(int n_s, double theta) {
  if (n_s != 0 && n_s != 1) {
    throw std::invalid_argument("signal photon number must be 0 or 1");
  }
  return n_s == 1 ? std::polar(1.0, theta) : complex(1.0, 0.0);
}

inline constexpr double quadrature_variance = 0.5;

// Mean of the quadrature q_phi = (a e^{-i phi} + a^dagger e^{i phi})/sqrt(2)
// in the coherent state |beta>.
inline double quadrature_mean(complex beta, double phi) {
  return std::numbers::sqrt2 * (beta * std::polar(1.0, -phi)).real();
}

// Symmetric two-hypothesis readout errors. Only the first three fields go to
// JSON; the rest are diagnostics.
struct DiscriminationReport {
  double false_negative = 0.0;
  double false_positive = 0.0;
  double threshold = 0.0;
  double quadrature_angle = 0.0;
  double mean_absent = 0.0;
  double mean_present = 0.0;

  double separation() const { return std::abs(mean_present - mean_absent); }
};

// Homodyne readout of the probe after the cross-Kerr interaction. The probe
// ends in |alpha_p> (photon absent) or |alpha_p e^{i theta}> (present); both
// project onto Gaussians of variance 1/2 along the chosen quadrature, split
// at the midpoint threshold. Passing no angle picks the better of the two
// canonical quadratures arg(alpha_p) and arg(alpha_p) + pi/2, preferring the
// latter on a tie.
inline DiscriminationReport homodyne_discriminate(
    complex alpha_p, double theta, std::optional<double> phi = std::nullopt) {
  if (!std::isfinite(alpha_p.real()) || !std::isfinite(alpha_p.imag()) ||
      !std::isfinite(theta)) {
    throw std::invalid_argument("probe parameters must be finite");
  }
  if (phi && !std::isfinite(*phi)) {
    throw std::invalid_argument("quadrature angle must be finite");
  }
  const complex beta_absent = alpha_p;
  const complex beta_present = alpha_p * probe_phase(1, theta);
  double angle;
  if (phi) {
    angle = *phi;
  } else {
    const double base = std::arg(alpha_p);
    const double sep_position =
        std::abs(quadrature_mean(beta_present, base) -
                 quadrature_mean(beta_absent, base));
    const double momentum = base + std::numbers::pi / 2.0;
    const double sep_momentum =
        std::abs(quadrature_mean(beta_present, momentum) -
                 quadrature_mean(beta_absent, momentum));
    angle = sep_momentum >= sep_position ? momentum : base;
  }
  DiscriminationReport report;
  report.quadrature_angle = angle;
  report.mean_absent = quadrature_mean(beta_absent, angle);
  report.mean_present = quadrature_mean(beta_present, angle);
  report.threshold = 0.5 * (report.mean_absent + report.mean_present);
  const double sigma = std::sqrt(quadrature_variance);
  const double z =
      report.separation() / (2.0 * sigma * std::numbers::sqrt2);
  report.false_negative = 0.5 * std::erfc(z);
  report.false_positive = report.false_negative;
  return report;
}

enum class QndOutcome { present, destroyed, absent };

// Result of one measurement. post_state is the conditional state when one
// survives the branch; probability is the branch weight.
struct QndResult {
  QndOutcome outcome = QndOutcome::present;
  std::optional<ExcitationState> post_state;
  double probability = 0.0;
};

namespace detail {

inline QndResult qnd_branch(const ExcitationState& state,
                            const QndDeviceModel& device, QndOutcome branch) {
  const double p_s = survival_probability(state);
  QndResult result;
  result.outcome = branch;
  switch (branch) {
    case QndOutcome::present: {
      result.probability = device.eta * p_s;
      if (p_s > 0.0) {
        ExcitationState post = state;
        post.photon /= std::sqrt(p_s);
        post.phonon.setZero();
        post.beta *= std::polar(1.0, device.delta);
        result.post_state = std::move(post);
      }
      break;
    }
    case QndOutcome::destroyed:
      result.probability = device.eps * p_s;
      break;
    case QndOutcome::absent: {
      result.probability =
          std::max(0.0, 1.0 - (device.eta + device.eps) * p_s);
      ExcitationState post = state;
      const double w = post.phonon.squaredNorm();
      if (w > 0.0) {
        post.photon.setZero();
        post.phonon /= std::sqrt(w);
      }
      result.post_state = std::move(post);
      break;
    }
  }
  return result;
}

}  // namespace detail

// Conditional update for a chosen measurement branch.
inline QndResult apply_qnd(const ExcitationState& state,
                           const QndDeviceModel& device, QndOutcome branch) {
  device.validate();
  return detail::qnd_branch(state, device, branch);
}

// Sample one measurement outcome and return the matching conditional update.
inline QndResult apply_qnd(const ExcitationState& state,
                           const QndDeviceModel& device, PhiloxEngine& rng) {
  device.validate();
  const double p_s = survival_probability(state);
  const double p_present = device.eta * p_s;
  const double p_destroyed = device.eps * p_s;
  const double u = rng.uniform();
  QndOutcome branch;
  if (u < p_present) {
    branch = QndOutcome::present;
  } else if (u < p_present + p_destroyed) {
    branch = QndOutcome::destroyed;
  } else {
    branch = QndOutcome::absent;
  }
  return detail::qnd_branch(state, device, branch);
}

enum class CnotModel { klm, geometric };

// Success probability of a teleportation-based nondemolition CNOT with m
// ancilla pairs: m^2/(m+1)^2 for the interferometric construction, or
// 1 - (1 - p1)^m for m independent attempts at single-shot success p1.
inline double cnot_qnd_success(int m, CnotModel model, double p1 = 0.5) {
  if (m < 1) {
    throw std::invalid_argument("ancilla count must be at least 1");
  }
  switch (model) {
    case CnotModel::klm: {
      const double ratio = static_cast<double>(m) / (static_cast<double>(m) + 1.0);
      return ratio * ratio;
    }
    case CnotModel::geometric:
      if (!(p1 > 0.0 && p1 <= 1.0)) {
        throw std::invalid_argument(
            "single-shot success probability must lie in (0, 1]");
      }
      return 1.0 - std::pow(1.0 - p1, m);
  }
  throw std::invalid_argument("unknown cnot model");
}

}  // namespace zenoline
