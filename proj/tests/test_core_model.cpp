/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "zenoline/core_model.hpp"

using namespace zenoline;

TEST_CASE("mode grid spans its interval evenly") {
  const ModeGrid grid = build_mode_grid(101, 0.0, 10.0, ModeLabel::phonon);
  REQUIRE(grid.count() == 101);
  CHECK(grid.frequencies.front() == 0.0);
  CHECK(grid.frequencies.back() == 10.0);
  CHECK(grid.density() == Catch::Approx(10.0).margin(1e-12));
  CHECK(grid.spacing() == Catch::Approx(0.1).margin(1e-12));
  for (std::size_t i = 1; i < grid.frequencies.size(); ++i) {
    REQUIRE(grid.frequencies[i] > grid.frequencies[i - 1]);
  }
}

TEST_CASE("single-mode grid needs equal bounds") {
  const ModeGrid grid = build_mode_grid(1, 2.5, 2.5, ModeLabel::photon);
  CHECK(grid.frequencies == std::vector<double>{2.5});
  CHECK_THROWS_AS(build_mode_grid(1, 0.0, 1.0, ModeLabel::photon),
                  std::invalid_argument);
}

TEST_CASE("mode grid rejects bad input") {
  CHECK_THROWS_AS(build_mode_grid(0, 0.0, 1.0, ModeLabel::photon),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_mode_grid(-3, 0.0, 1.0, ModeLabel::photon),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_mode_grid(5, 1.0, 1.0, ModeLabel::photon),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_mode_grid(5, 2.0, 1.0, ModeLabel::photon),
                  std::invalid_argument);
  const ModeGrid tiny = build_mode_grid(1, 0.0, 0.0, ModeLabel::photon);
  CHECK_THROWS_AS(tiny.density(), std::invalid_argument);
}

TEST_CASE("recurrence time is 2 pi over the spacing") {
  const ModeGrid grid = build_mode_grid(201, 0.0, 2.0, ModeLabel::phonon);
  CHECK(recurrence_time(grid) ==
        Catch::Approx(2.0 * std::numbers::pi / 0.01).epsilon(1e-12));
  const ModeGrid single = build_mode_grid(1, 1.0, 1.0, ModeLabel::phonon);
  CHECK(std::isinf(recurrence_time(single)));
}

TEST_CASE("flat coupling fills a constant matrix") {
  const ModeGrid photon = build_mode_grid(3, 0.5, 1.5, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(4, 0.0, 2.0, ModeLabel::phonon);
  const CouplingSpectrum c =
      build_coupling(CouplingKind::flat, 0.25, {}, photon, phonon);
  REQUIRE(c.values.rows() == 3);
  REQUIRE(c.values.cols() == 4);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      CHECK(c.values(i, j) == complex(0.25, 0.0));
    }
  }
}

TEST_CASE("ohmic coupling peaks at the cutoff and vanishes at zero") {
  const ModeGrid photon = build_mode_grid(1, 1.0, 1.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(401, 0.0, 8.0, ModeLabel::phonon);
  CouplingParams params;
  params.cutoff = 2.0;
  const CouplingSpectrum c =
      build_coupling(CouplingKind::ohmic, 0.1, params, photon, phonon);
  CHECK(c.values(0, 0) == complex(0.0, 0.0));
  Eigen::Index peak = 0;
  double best = 0.0;
  for (Eigen::Index j = 0; j < c.values.cols(); ++j) {
    const double a = std::abs(c.values(0, j));
    if (a > best) {
      best = a;
      peak = j;
    }
  }
  CHECK(phonon.frequencies[static_cast<std::size_t>(peak)] ==
        Catch::Approx(params.cutoff).margin(phonon.spacing()));
  const double at_cutoff = 0.1 * std::exp(-0.5);
  CHECK(best == Catch::Approx(at_cutoff).epsilon(1e-12));
  CHECK_THROWS_AS(build_coupling(CouplingKind::ohmic, 0.1,
                                 CouplingParams{0.0, 1.0, -1.0}, photon,
                                 phonon),
                  std::invalid_argument);
}

TEST_CASE("lorentzian coupling has the stated peak and half width") {
  const ModeGrid photon = build_mode_grid(1, 1.0, 1.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(9, 0.0, 2.0, ModeLabel::phonon);
  CouplingParams params;
  params.center = 1.0;
  params.width = 0.25;
  const CouplingSpectrum c =
      build_coupling(CouplingKind::lorentzian, 0.04, params, photon, phonon);
  CHECK(std::abs(c.values(0, 4)) == Catch::Approx(0.04).epsilon(1e-12));
  CHECK(std::abs(c.values(0, 5)) ==
        Catch::Approx(0.02).epsilon(1e-12));  // one half width off center
  CHECK_THROWS_AS(build_coupling(CouplingKind::lorentzian, 0.04,
                                 CouplingParams{1.0, 0.0, 1.0}, photon,
                                 phonon),
                  std::invalid_argument);
}

TEST_CASE("custom coupling requires the explicit entry point") {
  const ModeGrid photon = build_mode_grid(2, 0.0, 1.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(2, 0.0, 1.0, ModeLabel::phonon);
  CHECK_THROWS_AS(
      build_coupling(CouplingKind::custom, 1.0, {}, photon, phonon),
      std::invalid_argument);
  Eigen::MatrixXcd values(2, 2);
  values << complex(0.1, 0.0), complex(0.0, 0.2), complex(0.3, 0.0),
      complex(0.0, -0.1);
  const CouplingSpectrum c = build_custom_coupling(values, photon, phonon);
  CHECK(c.kind == CouplingKind::custom);
  CHECK(c.values(1, 0) == complex(0.3, 0.0));
  Eigen::MatrixXcd wrong(3, 2);
  wrong.setZero();
  CHECK_THROWS_AS(build_custom_coupling(wrong, photon, phonon),
                  std::invalid_argument);
}

TEST_CASE("assembled hamiltonian is hermitian with the right blocks") {
  const ModeGrid photon = build_mode_grid(2, 0.9, 1.1, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(3, 0.0, 2.0, ModeLabel::phonon);
  Eigen::MatrixXcd values(2, 3);
  values << complex(0.1, 0.05), complex(0.0, 0.2), complex(0.3, 0.0),
      complex(-0.1, 0.0), complex(0.0, -0.2), complex(0.05, 0.05);
  const CouplingSpectrum c = build_custom_coupling(values, photon, phonon);
  const HamiltonianMatrix h = assemble_hamiltonian(photon, phonon, c);
  REQUIRE(h.dimension() == 5);
  CHECK(h.hermiticity_defect() == 0.0);
  CHECK(h.matrix(0, 0) == complex(0.9, 0.0));
  CHECK(h.matrix(1, 1) == complex(1.1, 0.0));
  CHECK(h.matrix(2, 2) == complex(0.0, 0.0));
  CHECK(h.matrix(4, 4) == complex(2.0, 0.0));
  CHECK(h.matrix(0, 3) == values(0, 1));
  CHECK(h.matrix(3, 0) == std::conj(values(0, 1)));
  CHECK(h.matrix(1, 2) == complex(0.0, 0.0) + values(1, 0));

  const ModeGrid mislabeled = build_mode_grid(2, 0.9, 1.1, ModeLabel::phonon);
  CHECK_THROWS_AS(assemble_hamiltonian(mislabeled, phonon, c),
                  std::invalid_argument);
  const ModeGrid bigger = build_mode_grid(4, 0.0, 2.0, ModeLabel::phonon);
  CHECK_THROWS_AS(assemble_hamiltonian(photon, bigger, c),
                  std::invalid_argument);
}

TEST_CASE("gaussian pulse is normalized and centered") {
  const ModeGrid photon = build_mode_grid(201, 0.0, 2.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(11, 0.0, 2.0, ModeLabel::phonon);
  PulseParams params;
  params.center = 1.0;
  params.width = 0.1;
  const ExcitationState state =
      initial_pulse(PulseShape::gaussian, params, complex(1.0, 0.0),
                    complex(0.0, 0.0), photon, phonon);
  CHECK(state.total_norm() == Catch::Approx(1.0).margin(1e-12));
  CHECK(state.phonon_weight() == 0.0);
  REQUIRE(state.phonon.size() == 11);
  Eigen::Index peak = 0;
  state.photon.cwiseAbs().maxCoeff(&peak);
  CHECK(photon.frequencies[static_cast<std::size_t>(peak)] ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(std::abs(state.photon(0)) < std::abs(state.photon(peak)) * 1e-3);
}

TEST_CASE("single-mode pulse selects one amplitude") {
  const ModeGrid photon = build_mode_grid(5, 0.0, 1.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(2, 0.0, 1.0, ModeLabel::phonon);
  PulseParams params;
  params.mode_index = 3;
  const ExcitationState state =
      initial_pulse(PulseShape::single_mode, params, complex(1.0, 0.0),
                    complex(0.0, 0.0), photon, phonon);
  CHECK(state.photon(3) == complex(1.0, 0.0));
  CHECK(state.photon_weight() == 1.0);
  params.mode_index = 5;
  CHECK_THROWS_AS(initial_pulse(PulseShape::single_mode, params,
                                complex(1.0, 0.0), complex(0.0, 0.0), photon,
                                phonon),
                  std::invalid_argument);
}

TEST_CASE("polarization renormalizes and rejects the zero vector") {
  const ModeGrid photon = build_mode_grid(2, 0.0, 1.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(2, 0.0, 1.0, ModeLabel::phonon);
  PulseParams params;
  params.mode_index = 0;
  const ExcitationState state =
      initial_pulse(PulseShape::single_mode, params, complex(3.0, 0.0),
                    complex(0.0, 4.0), photon, phonon);
  CHECK(state.polarization_norm() == Catch::Approx(1.0).margin(1e-12));
  CHECK(state.alpha == complex(0.6, 0.0));
  CHECK(state.beta == complex(0.0, 0.8));
  CHECK_THROWS_AS(initial_pulse(PulseShape::single_mode, params,
                                complex(0.0, 0.0), complex(0.0, 0.0), photon,
                                phonon),
                  std::invalid_argument);
}

TEST_CASE("pulse width must be positive and envelopes must not vanish") {
  const ModeGrid photon = build_mode_grid(3, 0.0, 1.0, ModeLabel::photon);
  const ModeGrid phonon = build_mode_grid(2, 0.0, 1.0, ModeLabel::phonon);
  PulseParams bad;
  bad.width = 0.0;
  CHECK_THROWS_AS(initial_pulse(PulseShape::gaussian, bad, complex(1.0, 0.0),
                                complex(0.0, 0.0), photon, phonon),
                  std::invalid_argument);
  PulseParams far;
  far.center = 1e6;
  far.width = 1e-3;
  CHECK_THROWS_AS(initial_pulse(PulseShape::gaussian, far, complex(1.0, 0.0),
                                complex(0.0, 0.0), photon, phonon),
                  std::invalid_argument);
}

TEST_CASE("polarization fidelity is the squared overlap") {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CHECK(polarization_fidelity({1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0},
                              {0.0, 0.0}) == 1.0);
  CHECK(polarization_fidelity({1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0},
                              {1.0, 0.0}) == 0.0);
  CHECK(polarization_fidelity({inv_sqrt2, 0.0}, {inv_sqrt2, 0.0},
                              {inv_sqrt2, 0.0}, {-inv_sqrt2, 0.0}) ==
        Catch::Approx(0.0).margin(1e-15));
}
