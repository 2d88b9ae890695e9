/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "zenoline/core_model.hpp"
#include "zenoline/errors.hpp"
#include "zenoline/evolution.hpp"
#include "zenoline/numerics.hpp"
#include "zenoline/qnd.hpp"
#include "zenoline/rng.hpp"

namespace zenoline {

// Repeated-projection protocol: free evolution for tau, then a QND
// measurement, n_measurements times.
struct ZenoConfig {
  double tau = 0.0;
  int n_measurements = 0;
  std::optional<QndDeviceModel> device;

  double total_time() const { return tau * n_measurements; }

  void validate() const {
    if (!(tau > 0.0)) {
      throw std::invalid_argument("tau must be positive");
    }
    if (n_measurements < 1) {
      throw std::invalid_argument("n_measurements must be at least 1");
    }
    if (device) {
      device->validate();
    }
  }
};

struct MonteCarloTally {
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  // survivors_after[k] counts trials still alive after measurement k + 1.
  std::vector<std::uint64_t> survivors_after;

  double fraction() const {
    return trials == 0 ? 0.0
                       : static_cast<double>(successes) /
                             static_cast<double>(trials);
  }
};

struct ZenoRecord {
  // per_interval[k] is the probability q_{k+1} of heralding the photon at
  // measurement k + 1 given it survived the first k; cumulative[k] is the
  // running product.
  std::vector<double> per_interval;
  std::vector<double> cumulative;
  std::optional<double> gamma_eff;
  std::optional<MonteCarloTally> trials;
  ExcitationState final_state;
};

// Least-squares slope of -ln(cumulative_k) against k * tau.
inline double effective_decay_rate(const ZenoRecord& record, double tau) {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("tau must be positive");
  }
  const std::size_t n = record.cumulative.size();
  if (n < 2) {
    throw std::invalid_argument(
        "effective decay rate needs at least two measurements");
  }
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double c = record.cumulative[k];
    if (!(c > 0.0)) {
      throw numeric_error(
          "effective decay rate is undefined after survival reaches zero");
    }
    x[k] = tau * static_cast<double>(k + 1);
    y[k] = -std::log(c);
  }
  return fit_line(x, y).slope;
}

// Deterministic ensemble-average run of the protocol. Between measurements
// the state evolves exactly; each measurement projects onto the photon
// branch with heralding probability eta * P_s and applies the device phase.
// If survival hits zero the remaining entries are zero and evolution stops.
inline ZenoRecord run_ensemble(const ExcitationState& state,
                               const HamiltonianMatrix& h,
                               const ZenoConfig& config) {
  config.validate();
  detail::check_state_shape(state, h);
  if (state.phonon.squaredNorm() > 1e-18) {
    throw std::invalid_argument("protocol requires a photon-branch state");
  }
  const QndDeviceModel device =
      config.device.value_or(QndDeviceModel::ideal());
  const Propagator prop(h);
  ZenoRecord record;
  record.per_interval.reserve(static_cast<std::size_t>(config.n_measurements));
  record.cumulative.reserve(static_cast<std::size_t>(config.n_measurements));
  ExcitationState current = state;
  double cumulative = 1.0;
  for (int k = 0; k < config.n_measurements; ++k) {
    ExcitationState evolved = prop.apply(current, config.tau);
    const double p_s = survival_probability(evolved);
    const double q = device.eta * p_s;
    if (!(q > 0.0)) {
      const std::size_t remaining =
          static_cast<std::size_t>(config.n_measurements - k);
      record.per_interval.insert(record.per_interval.end(), remaining, 0.0);
      record.cumulative.insert(record.cumulative.end(), remaining, 0.0);
      cumulative = 0.0;
      current = std::move(evolved);
      break;
    }
    evolved.photon /= std::sqrt(p_s);
    evolved.phonon.setZero();
    evolved.beta *= std::polar(1.0, device.delta);
    cumulative *= q;
    record.per_interval.push_back(q);
    record.cumulative.push_back(cumulative);
    current = std::move(evolved);
  }
  record.final_state = std::move(current);
  if (record.cumulative.size() >= 2 && record.cumulative.back() > 0.0) {
    record.gamma_eff = effective_decay_rate(record, config.tau);
  }
  return record;
}

namespace detail {

// Survival probabilities per measurement are identical across trials, so a
// trial is a chain of Bernoulli draws against the ensemble per_interval
// values. Each trial owns Philox stream (seed, trial index), which makes the
// tally independent of how trials are split across threads.
inline void monte_carlo_range(const std::vector<double>& per_interval,
                              std::uint64_t seed, std::uint64_t begin,
                              std::uint64_t end, std::uint64_t& successes,
                              std::vector<std::uint64_t>& survivors) {
  const std::size_t n = per_interval.size();
  for (std::uint64_t trial = begin; trial < end; ++trial) {
    PhiloxEngine rng(seed, trial);
    bool alive = true;
    for (std::size_t k = 0; k < n && alive; ++k) {
      alive = rng.uniform() < per_interval[k];
      if (alive) {
        ++survivors[k];
      }
    }
    if (alive) {
      ++successes;
    }
  }
}

}  // namespace detail

// Monte-Carlo run over independent single-photon trials. The returned record
// carries the ensemble curves plus the trial tally; fraction() estimates the
// final cumulative survival.
inline ZenoRecord run_monte_carlo(const ExcitationState& state,
                                  const HamiltonianMatrix& h,
                                  const ZenoConfig& config,
                                  std::uint64_t trials, std::uint64_t seed,
                                  unsigned n_threads = 1) {
  if (trials == 0) {
    throw std::invalid_argument("trials must be positive");
  }
  ZenoRecord record = run_ensemble(state, h, config);
  MonteCarloTally tally;
  tally.trials = trials;
  tally.seed = seed;
  tally.survivors_after.assign(record.per_interval.size(), 0);
  const unsigned workers = std::max(
      1u, std::min(n_threads, static_cast<unsigned>(
                                  std::min<std::uint64_t>(trials, 1024))));
  if (workers == 1) {
    detail::monte_carlo_range(record.per_interval, seed, 0, trials,
                              tally.successes, tally.survivors_after);
  } else {
    std::vector<std::uint64_t> successes(workers, 0);
    std::vector<std::vector<std::uint64_t>> survivors(
        workers,
        std::vector<std::uint64_t>(record.per_interval.size(), 0));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(trials, w * chunk);
      const std::uint64_t end =
          std::min<std::uint64_t>(trials, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        detail::monte_carlo_range(record.per_interval, seed, begin, end,
                                  successes[w], survivors[w]);
      });
    }
    for (auto& t : pool) {
      t.join();
    }
    for (unsigned w = 0; w < workers; ++w) {
      tally.successes += successes[w];
      for (std::size_t k = 0; k < tally.survivors_after.size(); ++k) {
        tally.survivors_after[k] += survivors[w][k];
      }
    }
  }
  record.trials = std::move(tally);
  return record;
}

struct AnalyticSurvival {
  double exact_product = 1.0;       // (1 - (gamma tau)^2)^N
  double exponential_approx = 1.0;  // exp(-gamma^2 tau T)
  long long n_intervals = 0;
  bool rounded = false;  // total_time was not an integer multiple of tau
};

// Closed-form survival under the quadratic short-time law.
inline AnalyticSurvival analytic_survival(double gamma, double tau,
                                          double total_time) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be a finite non-negative rate");
  }
  if (!(tau > 0.0) || !(total_time > 0.0)) {
    throw std::invalid_argument("tau and total_time must be positive");
  }
  if (gamma * tau >= 1.0) {
    throw numeric_error(
        "quadratic survival law requires gamma * tau < 1");
  }
  AnalyticSurvival out;
  out.n_intervals = std::max<long long>(1, std::llround(total_time / tau));
  const double reconstructed = static_cast<double>(out.n_intervals) * tau;
  out.rounded = std::abs(reconstructed - total_time) >
                1e-9 * std::max(tau, total_time);
  const double loss = gamma * tau;
  out.exact_product =
      std::pow(1.0 - loss * loss, static_cast<double>(out.n_intervals));
  out.exponential_approx = std::exp(-gamma * gamma * tau * total_time);
  return out;
}

}  // namespace zenoline
