/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zenoline/errors.hpp"

namespace zenoline {

using complex = std::complex<double>;

enum class ModeLabel { photon, phonon };

// A finite comb of mode frequencies, evenly spaced and strictly increasing.
struct ModeGrid {
  std::vector<double> frequencies;
  ModeLabel label = ModeLabel::photon;

  Eigen::Index count() const {
    return static_cast<Eigen::Index>(frequencies.size());
  }

  double omega_min() const { return frequencies.front(); }
  double omega_max() const { return frequencies.back(); }

  // Number of intervals per unit frequency, (count - 1) / range.
  double density() const {
    if (frequencies.size() < 2) {
      throw std::invalid_argument(
          "ModeGrid::density requires at least two modes");
    }
    return (static_cast<double>(frequencies.size()) - 1.0) /
           (frequencies.back() - frequencies.front());
  }

  double spacing() const {
    if (frequencies.size() < 2) {
      throw std::invalid_argument(
          "ModeGrid::spacing requires at least two modes");
    }
    return (frequencies.back() - frequencies.front()) /
           (static_cast<double>(frequencies.size()) - 1.0);
  }
};

inline ModeGrid build_mode_grid(int count, double omega_min, double omega_max,
                                ModeLabel label) {
  if (count < 1) {
    throw std::invalid_argument("mode count must be positive");
  }
  if (!std::isfinite(omega_min) || !std::isfinite(omega_max)) {
    throw std::invalid_argument("mode grid bounds must be finite");
  }
  if (count == 1) {
    if (omega_min != omega_max) {
      throw std::invalid_argument(
          "a single-mode grid requires omega_min == omega_max");
    }
  } else if (!(omega_min < omega_max)) {
    throw std::invalid_argument("mode grid requires omega_min < omega_max");
  }
  ModeGrid grid;
  grid.label = label;
  grid.frequencies.resize(static_cast<std::size_t>(count));
  const double step =
      count > 1 ? (omega_max - omega_min) / static_cast<double>(count - 1)
                : 0.0;
  for (int i = 0; i < count; ++i) {
    grid.frequencies[static_cast<std::size_t>(i)] =
        omega_min + step * static_cast<double>(i);
  }
  grid.frequencies.back() = omega_max;
  return grid;
}

// Poincare recurrence time of the discretized continuum, 2*pi over the mode
// spacing. Dynamics past this time are an artifact of the finite grid.
inline double recurrence_time(const ModeGrid& grid) {
  if (grid.frequencies.size() < 2) {
    return std::numeric_limits<double>::infinity();
  }
  return 2.0 * std::numbers::pi / grid.spacing();
}

enum class CouplingKind { flat, ohmic, lorentzian, custom };

struct CouplingParams {
  double center = 0.0;  // lorentzian peak position
  double width = 1.0;   // lorentzian half width
  double cutoff = 1.0;  // ohmic cutoff frequency
};

// Photon-by-phonon matrix of coupling amplitudes g(k, j).
struct CouplingSpectrum {
  CouplingKind kind = CouplingKind::flat;
  Eigen::MatrixXcd values;
};

inline CouplingSpectrum build_coupling(CouplingKind kind, double g,
                                       const CouplingParams& params,
                                       const ModeGrid& photon,
                                       const ModeGrid& phonon) {
  if (!std::isfinite(g)) {
    throw std::invalid_argument("coupling strength must be finite");
  }
  const Eigen::Index np = photon.count();
  const Eigen::Index nb = phonon.count();
  CouplingSpectrum spectrum;
  spectrum.kind = kind;
  spectrum.values.resize(np, nb);
  switch (kind) {
    case CouplingKind::flat:
      spectrum.values.setConstant(complex(g, 0.0));
      break;
    case CouplingKind::ohmic: {
      if (!(params.cutoff > 0.0)) {
        throw std::invalid_argument("ohmic coupling requires cutoff > 0");
      }
      for (Eigen::Index j = 0; j < nb; ++j) {
        const double w = phonon.frequencies[static_cast<std::size_t>(j)];
        const double amp =
            w > 0.0 ? g * std::sqrt(w / params.cutoff) *
                          std::exp(-w / (2.0 * params.cutoff))
                    : 0.0;
        spectrum.values.col(j).setConstant(complex(amp, 0.0));
      }
      break;
    }
    case CouplingKind::lorentzian: {
      if (!(params.width > 0.0)) {
        throw std::invalid_argument("lorentzian coupling requires width > 0");
      }
      const double w2 = params.width * params.width;
      for (Eigen::Index j = 0; j < nb; ++j) {
        const double d =
            phonon.frequencies[static_cast<std::size_t>(j)] - params.center;
        const double amp = g * w2 / (d * d + w2);
        spectrum.values.col(j).setConstant(complex(amp, 0.0));
      }
      break;
    }
    case CouplingKind::custom:
      throw std::invalid_argument(
          "custom coupling requires an explicit matrix; "
          "use build_custom_coupling");
  }
  return spectrum;
}

inline CouplingSpectrum build_custom_coupling(Eigen::MatrixXcd values,
                                              const ModeGrid& photon,
                                              const ModeGrid& phonon) {
  if (values.rows() != photon.count() || values.cols() != phonon.count()) {
    throw std::invalid_argument(
        "custom coupling matrix shape must be photon count by phonon count");
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("custom coupling matrix must be finite");
  }
  CouplingSpectrum spectrum;
  spectrum.kind = CouplingKind::custom;
  spectrum.values = std::move(values);
  return spectrum;
}

// Single-excitation Hamiltonian over the stacked basis of photon modes
// followed by phonon modes. Diagonal blocks hold the mode frequencies, the
// off-diagonal block holds the coupling amplitudes.
struct HamiltonianMatrix {
  Eigen::MatrixXcd matrix;
  Eigen::Index n_photon = 0;
  Eigen::Index n_phonon = 0;

  Eigen::Index dimension() const { return n_photon + n_phonon; }

  auto coupling_block() const {
    return matrix.block(0, n_photon, n_photon, n_phonon);
  }

  // Largest absolute deviation from H = H^dagger.
  double hermiticity_defect() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  }
};

inline HamiltonianMatrix assemble_hamiltonian(const ModeGrid& photon,
                                              const ModeGrid& phonon,
                                              const CouplingSpectrum& coupling) {
  if (photon.label != ModeLabel::photon || phonon.label != ModeLabel::phonon) {
    throw std::invalid_argument("grid labels do not match their roles");
  }
  const Eigen::Index np = photon.count();
  const Eigen::Index nb = phonon.count();
  if (coupling.values.rows() != np || coupling.values.cols() != nb) {
    throw std::invalid_argument(
        "coupling matrix shape must be photon count by phonon count");
  }
  HamiltonianMatrix h;
  h.n_photon = np;
  h.n_phonon = nb;
  h.matrix = Eigen::MatrixXcd::Zero(np + nb, np + nb);
  for (Eigen::Index k = 0; k < np; ++k) {
    h.matrix(k, k) = photon.frequencies[static_cast<std::size_t>(k)];
  }
  for (Eigen::Index j = 0; j < nb; ++j) {
    h.matrix(np + j, np + j) = phonon.frequencies[static_cast<std::size_t>(j)];
  }
  h.matrix.block(0, np, np, nb) = coupling.values;
  h.matrix.block(np, 0, nb, np) = coupling.values.adjoint();
  return h;
}

// One excitation shared between the photon and phonon branches, with a
// factorized polarization (alpha, beta) on the photon part.
struct ExcitationState {
  Eigen::VectorXcd photon;
  Eigen::VectorXcd phonon;
  complex alpha{1.0, 0.0};
  complex beta{0.0, 0.0};

  double photon_weight() const { return photon.squaredNorm(); }
  double phonon_weight() const { return phonon.squaredNorm(); }
  double total_norm() const {
    return std::sqrt(photon.squaredNorm() + phonon.squaredNorm());
  }
  double polarization_norm() const {
    return std::sqrt(std::norm(alpha) + std::norm(beta));
  }
};

// Overlap probability |<pol1|pol2>|^2 of two polarization states.
inline double polarization_fidelity(complex a1, complex b1, complex a2,
                                    complex b2) {
  return std::norm(std::conj(a1) * a2 + std::conj(b1) * b2);
}

enum class PulseShape { gaussian, single_mode };

struct PulseParams {
  double center = 0.0;
  double width = 1.0;
  Eigen::Index mode_index = 0;
};

inline ExcitationState initial_pulse(PulseShape shape,
                                     const PulseParams& params, complex alpha,
                                     complex beta, const ModeGrid& photon,
                                     const ModeGrid& phonon) {
  const double pol_norm2 = std::norm(alpha) + std::norm(beta);
  if (!(pol_norm2 > 0.0) || !std::isfinite(pol_norm2)) {
    throw std::invalid_argument("polarization must have positive finite norm");
  }
  ExcitationState state;
  const double pol_norm = std::sqrt(pol_norm2);
  state.alpha = alpha / pol_norm;
  state.beta = beta / pol_norm;
  const Eigen::Index np = photon.count();
  state.photon.resize(np);
  switch (shape) {
    case PulseShape::gaussian: {
      if (!(params.width > 0.0)) {
        throw std::invalid_argument("gaussian pulse requires width > 0");
      }
      for (Eigen::Index k = 0; k < np; ++k) {
        const double d =
            photon.frequencies[static_cast<std::size_t>(k)] - params.center;
        state.photon(k) =
            std::exp(-d * d / (4.0 * params.width * params.width));
      }
      break;
    }
    case PulseShape::single_mode: {
      if (params.mode_index < 0 || params.mode_index >= np) {
        throw std::invalid_argument("pulse mode index out of range");
      }
      state.photon.setZero();
      state.photon(params.mode_index) = 1.0;
      break;
    }
  }
  const double norm = state.photon.norm();
  if (!(norm > 0.0)) {
    throw std::invalid_argument("pulse envelope vanished on the mode grid");
  }
  state.photon /= norm;
  state.phonon = Eigen::VectorXcd::Zero(phonon.count());
  return state;
}

}  // namespace zenoline
