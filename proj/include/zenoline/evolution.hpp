/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "zenoline/core_model.hpp"
#include "zenoline/errors.hpp"

namespace zenoline {

// Sampled time evolution. All three lists share one length; survival[i] is
// the photon-branch weight of states[i].
struct Trajectory {
  std::vector<double> times;
  std::vector<ExcitationState> states;
  std::vector<double> survival;

  std::size_t size() const { return times.size(); }
};

inline double survival_probability(const ExcitationState& state) {
  const double p = state.photon.squaredNorm();
  return std::clamp(p, 0.0, 1.0);
}

namespace detail {

inline void check_state_shape(const ExcitationState& state,
                              const HamiltonianMatrix& h) {
  if (state.photon.size() != h.n_photon || state.phonon.size() != h.n_phonon) {
    throw std::invalid_argument("state dimensions do not match Hamiltonian");
  }
}

inline Eigen::VectorXcd stack(const ExcitationState& state) {
  Eigen::VectorXcd psi(state.photon.size() + state.phonon.size());
  psi << state.photon, state.phonon;
  return psi;
}

inline ExcitationState unstack(const Eigen::VectorXcd& psi,
                               const ExcitationState& like,
                               Eigen::Index n_photon) {
  ExcitationState out;
  out.photon = psi.head(n_photon);
  out.phonon = psi.tail(psi.size() - n_photon);
  out.alpha = like.alpha;
  out.beta = like.beta;
  return out;
}

}  // namespace detail

// Exact propagator exp(-i H t) through one eigendecomposition of the
// Hermitian Hamiltonian, reusable for any number of times and states.
class Propagator {
 public:
  explicit Propagator(const HamiltonianMatrix& h)
      : n_photon_(h.n_photon), n_phonon_(h.n_phonon) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
    if (solver.info() != Eigen::Success) {
      throw numeric_error("eigendecomposition of the Hamiltonian failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi, double t) const {
    Eigen::VectorXcd coeffs = eigenvectors_.adjoint() * psi;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
      coeffs(i) *= std::polar(1.0, -eigenvalues_(i) * t);
    }
    return eigenvectors_ * coeffs;
  }

  ExcitationState apply(const ExcitationState& state, double t) const {
    if (state.photon.size() != n_photon_ || state.phonon.size() != n_phonon_) {
      throw std::invalid_argument("state dimensions do not match Hamiltonian");
    }
    return detail::unstack(apply(detail::stack(state), t), state, n_photon_);
  }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::Index n_photon_;
  Eigen::Index n_phonon_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

// Evolve by eigendecomposition and sample at n_steps + 1 evenly spaced times
// including both endpoints.
inline Trajectory evolve(const ExcitationState& state,
                         const HamiltonianMatrix& h, double t_final,
                         int n_steps) {
  detail::check_state_shape(state, h);
  if (!(t_final > 0.0)) {
    throw std::invalid_argument("t_final must be positive");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("n_steps must be at least 1");
  }
  const Propagator prop(h);
  const Eigen::VectorXcd psi0 = detail::stack(state);
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.survival.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int j = 0; j <= n_steps; ++j) {
    const double t =
        t_final * static_cast<double>(j) / static_cast<double>(n_steps);
    // The propagator at t = 0 is the identity, so the first sample is the
    // input state itself rather than a numerically reconstructed copy.
    const Eigen::VectorXcd psi = (j == 0) ? psi0 : prop.apply(psi0, t);
    if (!psi.allFinite()) {
      throw numeric_error("propagated state has non-finite amplitudes");
    }
    ExcitationState sampled = detail::unstack(psi, state, h.n_photon);
    traj.times.push_back(t);
    traj.survival.push_back(survival_probability(sampled));
    traj.states.push_back(std::move(sampled));
  }
  return traj;
}

// Classic fixed-step fourth-order Runge-Kutta for d psi / dt = -i H psi,
// sampled after every step. Useful as an independent cross-check of the
// eigendecomposition path.
inline Trajectory evolve_rk4(const ExcitationState& state,
                             const HamiltonianMatrix& h, double t_final,
                             int n_steps) {
  detail::check_state_shape(state, h);
  if (!(t_final > 0.0)) {
    throw std::invalid_argument("t_final must be positive");
  }
  if (n_steps < 1) {
    throw std::invalid_argument("n_steps must be at least 1");
  }
  const double dt = t_final / static_cast<double>(n_steps);
  const complex minus_i(0.0, -1.0);
  const auto rhs = [&](const Eigen::VectorXcd& psi) -> Eigen::VectorXcd {
    return minus_i * (h.matrix * psi);
  };
  Eigen::VectorXcd psi = detail::stack(state);
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.survival.reserve(static_cast<std::size_t>(n_steps) + 1);
  const auto sample = [&](double t) {
    if (!psi.allFinite()) {
      throw numeric_error("propagated state has non-finite amplitudes");
    }
    ExcitationState sampled = detail::unstack(psi, state, h.n_photon);
    traj.times.push_back(t);
    traj.survival.push_back(survival_probability(sampled));
    traj.states.push_back(std::move(sampled));
  };
  sample(0.0);
  for (int j = 1; j <= n_steps; ++j) {
    const Eigen::VectorXcd k1 = rhs(psi);
    const Eigen::VectorXcd k2 = rhs(psi + (0.5 * dt) * k1);
    const Eigen::VectorXcd k3 = rhs(psi + (0.5 * dt) * k2);
    const Eigen::VectorXcd k4 = rhs(psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    sample(dt * static_cast<double>(j));
  }
  return traj;
}

// Global error bound for the fixed-step scheme, t * ||H|| * (||H|| dt)^4 / 120.
inline double rk4_error_bound(double h_norm, double t_final, double dt) {
  return t_final * h_norm * std::pow(h_norm * dt, 4) / 120.0;
}

// Quadratic decay coefficient gamma: the short-time survival law is
// P_s(t) = 1 - (gamma t)^2 + O(t^4), with gamma the norm of the coupling
// block applied to the photon amplitudes.
inline double compute_gamma(const HamiltonianMatrix& h,
                            const ExcitationState& state) {
  detail::check_state_shape(state, h);
  if (state.phonon.squaredNorm() > 1e-18) {
    throw std::invalid_argument(
        "compute_gamma requires a photon-branch state");
  }
  if (h.n_phonon == 0) {
    return 0.0;
  }
  return (h.matrix.block(h.n_photon, 0, h.n_phonon, h.n_photon) * state.photon)
      .norm();
}

}  // namespace zenoline
