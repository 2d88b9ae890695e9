/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "zenoline/core_model.hpp"
#include "zenoline/evolution.hpp"

using namespace zenoline;

namespace {

// One photon mode coupled to phonon modes with arbitrary amplitudes, all
// frequencies degenerate at zero so the dynamics are pure exchange.
HamiltonianMatrix exchange_model(const std::vector<double>& couplings) {
  const ModeGrid photon = build_mode_grid(1, 0.0, 0.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(
      static_cast<int>(couplings.size()), 0.0,
      couplings.size() > 1 ? 1e-12 * (couplings.size() - 1) : 0.0,
      ModeLabel::phonon);
  Eigen::MatrixXcd values(1, static_cast<Eigen::Index>(couplings.size()));
  for (std::size_t j = 0; j < couplings.size(); ++j) {
    values(0, static_cast<Eigen::Index>(j)) = couplings[j];
  }
  return assemble_hamiltonian(photon, phonon,
                              build_custom_coupling(values, photon, phonon));
}

ExcitationState photon_only_state(const HamiltonianMatrix& h) {
  ExcitationState state;
  state.photon = Eigen::VectorXcd::Zero(h.n_photon);
  state.photon(0) = 1.0;
  state.phonon = Eigen::VectorXcd::Zero(h.n_phonon);
  return state;
}

}  // namespace

TEST_CASE("two coupled degenerate modes oscillate as cos^2") {
  const HamiltonianMatrix h = exchange_model({1.0});
  const ExcitationState state = photon_only_state(h);
  const Trajectory traj = evolve(state, h, 3.0, 300);
  REQUIRE(traj.size() == 301);
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == 3.0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double c = std::cos(traj.times[i]);
    CHECK(traj.survival[i] == Catch::Approx(c * c).margin(1e-12));
  }
}

TEST_CASE("several degenerate bath modes act as one with the rms coupling") {
  const HamiltonianMatrix h = exchange_model({0.3, 0.4});
  const ExcitationState state = photon_only_state(h);
  const double gamma = compute_gamma(h, state);
  CHECK(gamma == Catch::Approx(0.5).margin(1e-12));
  const Trajectory traj = evolve(state, h, 2.0, 100);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double c = std::cos(gamma * traj.times[i]);
    CHECK(traj.survival[i] == Catch::Approx(c * c).margin(1e-10));
  }
}

TEST_CASE("evolution preserves the total norm") {
  const ModeGrid photon = build_mode_grid(3, 0.8, 1.2, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(21, 0.0, 2.0, ModeLabel::phonon);
  const CouplingSpectrum c =
      build_coupling(CouplingKind::flat, 0.05, {}, photon, phonon);
  const HamiltonianMatrix h = assemble_hamiltonian(photon, phonon, c);
  PulseParams params;
  params.center = 1.0;
  params.width = 0.1;
  const ExcitationState state =
      initial_pulse(PulseShape::gaussian, params, complex(1.0, 0.0),
                    complex(0.0, 0.0), photon, phonon);
  const Trajectory traj = evolve(state, h, 20.0, 50);
  for (const ExcitationState& s : traj.states) {
    CHECK(s.total_norm() == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("short-time survival follows the quadratic law") {
  const HamiltonianMatrix h = exchange_model({0.3, 0.4});
  const ExcitationState state = photon_only_state(h);
  const double gamma = compute_gamma(h, state);
  const double t_max = 0.05 / gamma;
  const Trajectory traj = evolve(state, h, t_max, 200);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    worst = std::max(worst,
                     std::abs(traj.survival[i] - (1.0 - gamma * gamma * t * t)));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("rk4 agrees with the exact propagator within its error bound") {
  const ModeGrid photon = build_mode_grid(2, 0.9, 1.1, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(11, 0.5, 1.5, ModeLabel::phonon);
  const CouplingSpectrum c =
      build_coupling(CouplingKind::flat, 0.1, {}, photon, phonon);
  const HamiltonianMatrix h = assemble_hamiltonian(photon, phonon, c);
  PulseParams params;
  params.center = 1.0;
  params.width = 0.2;
  const ExcitationState state =
      initial_pulse(PulseShape::gaussian, params, complex(1.0, 0.0),
                    complex(0.0, 0.0), photon, phonon);
  const double t_final = 4.0;
  const double h_norm = h.matrix.operatorNorm();

  const Trajectory exact = evolve(state, h, t_final, 100);
  const Trajectory coarse = evolve_rk4(state, h, t_final, 100);
  const Trajectory fine = evolve_rk4(state, h, t_final, 200);

  const auto end_error = [&](const Trajectory& traj) {
    return (detail::stack(traj.states.back()) -
            detail::stack(exact.states.back()))
        .norm();
  };
  const double err_coarse = end_error(coarse);
  const double err_fine = end_error(fine);
  CHECK(err_coarse <= rk4_error_bound(h_norm, t_final, t_final / 100));
  CHECK(err_fine <= rk4_error_bound(h_norm, t_final, t_final / 200));
  CHECK(err_fine < err_coarse / 8.0);  // fourth-order step refinement
}

TEST_CASE("compute_gamma rejects states with bath weight") {
  const HamiltonianMatrix h = exchange_model({0.3, 0.4});
  ExcitationState state = photon_only_state(h);
  state.phonon(0) = 0.5;
  CHECK_THROWS_AS(compute_gamma(h, state), std::invalid_argument);
}

TEST_CASE("evolve validates its arguments") {
  const HamiltonianMatrix h = exchange_model({1.0});
  const ExcitationState state = photon_only_state(h);
  CHECK_THROWS_AS(evolve(state, h, 0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(evolve(state, h, -1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(evolve(state, h, 1.0, 0), std::invalid_argument);
  ExcitationState wrong = state;
  wrong.photon = Eigen::VectorXcd::Zero(2);
  CHECK_THROWS_AS(evolve(wrong, h, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(evolve_rk4(wrong, h, 1.0, 10), std::invalid_argument);
}

TEST_CASE("survival probability clamps rounding noise into the unit range") {
  ExcitationState state;
  state.photon = Eigen::VectorXcd::Zero(1);
  state.photon(0) = complex(1.0 + 1e-16, 0.0);
  state.phonon = Eigen::VectorXcd::Zero(1);
  CHECK(survival_probability(state) <= 1.0);
  CHECK(survival_probability(state) >= 0.0);
}
