/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zenoline/core_model.hpp"
#include "zenoline/errors.hpp"
#include "zenoline/numerics.hpp"
#include "zenoline/qnd.hpp"
#include "zenoline/regime.hpp"

namespace zenoline {

using json = nlohmann::json;

struct GridConfig {
  int count = 1;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

struct CouplingConfig {
  CouplingKind kind = CouplingKind::flat;
  double g = 0.0;
  CouplingParams params;
  std::optional<Eigen::MatrixXcd> values;
};

struct PulseConfig {
  PulseShape shape = PulseShape::gaussian;
  PulseParams params;
};

struct ModelConfig {
  GridConfig photon;
  GridConfig phonon;
  CouplingConfig coupling;
  PulseConfig pulse;
  complex alpha{1.0, 0.0};
  complex beta{0.0, 0.0};
};

struct ProtocolConfig {
  double tau = 0.0;
  int n_measurements = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct AnalysisConfig {
  double t_final = 10.0;
  int n_steps = 200;
  FitOptions fit;
  std::vector<double> lengths;
  // Homodyne quadrature angle; empty means pick the optimal canonical one.
  std::optional<double> quadrature;
};

struct PlanSection {
  std::optional<double> gamma;
  std::optional<double> gamma_exp;
  std::optional<double> length;
  std::optional<double> v_f;
  std::optional<double> t_q;
  std::optional<int> devices;
  int m_max = 10000;
  double segment_transmission = 1.0;
  std::optional<double> loop_time;
  std::optional<int> round_trips;
};

struct OutputConfig {
  std::string directory = "out";
  bool write_csv = true;
  bool write_json = true;
};

struct RunConfig {
  std::optional<ModelConfig> model;
  std::optional<ProtocolConfig> protocol;
  std::optional<QndDeviceModel> device;
  AnalysisConfig analysis;
  std::optional<PlanSection> plan;
  OutputConfig output;
};

namespace detail {

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) {
    throw config_error(path + ": expected an object");
  }
}

inline void reject_unknown(const json& obj,
                           std::initializer_list<const char*> allowed,
                           const std::string& path) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw config_error(path + ": unknown key \"" + item.key() + "\"");
    }
  }
}

inline const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) {
    throw config_error(path + ": expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw config_error(path + ": must be finite");
  }
  return v;
}

inline int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    throw config_error(path + ": expected an integer");
  }
  return j.get<int>();
}

inline std::uint64_t as_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer() ||
      (j.is_number_integer() && !j.is_number_unsigned() &&
       j.get<std::int64_t>() < 0)) {
    throw config_error(path + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) {
    throw config_error(path + ": expected a string");
  }
  return j.get<std::string>();
}

inline bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) {
    throw config_error(path + ": expected a boolean");
  }
  return j.get<bool>();
}

inline complex as_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw config_error(path + ": expected [re, im]");
  }
  const complex v(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw config_error(path + ": must be finite");
  }
  return v;
}

inline json complex_to_json(complex v) {
  return json::array({v.real(), v.imag()});
}

inline GridConfig parse_grid(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"count", "omega_min", "omega_max"}, path);
  GridConfig grid;
  const json* count = find(j, "count");
  const json* lo = find(j, "omega_min");
  const json* hi = find(j, "omega_max");
  if (!count || !lo || !hi) {
    throw config_error(path + ": requires count, omega_min and omega_max");
  }
  grid.count = as_int(*count, path + ".count");
  if (grid.count < 1) {
    throw config_error(path + ".count: must be at least 1");
  }
  grid.omega_min = as_number(*lo, path + ".omega_min");
  grid.omega_max = as_number(*hi, path + ".omega_max");
  if (grid.count == 1) {
    if (grid.omega_min != grid.omega_max) {
      throw config_error(path +
                         ": a single mode requires omega_min == omega_max");
    }
  } else if (!(grid.omega_min < grid.omega_max)) {
    throw config_error(path + ": requires omega_min < omega_max");
  }
  return grid;
}

inline CouplingKind parse_coupling_kind(const std::string& s,
                                        const std::string& path) {
  if (s == "flat") return CouplingKind::flat;
  if (s == "ohmic") return CouplingKind::ohmic;
  if (s == "lorentzian") return CouplingKind::lorentzian;
  if (s == "custom") return CouplingKind::custom;
  throw config_error(path + ": expected flat, ohmic, lorentzian or custom");
}

inline const char* coupling_kind_name(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::flat: return "flat";
    case CouplingKind::ohmic: return "ohmic";
    case CouplingKind::lorentzian: return "lorentzian";
    case CouplingKind::custom: return "custom";
  }
  return "flat";
}

inline CouplingConfig parse_coupling(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"kind", "g", "center", "width", "cutoff", "values"},
                 path);
  const json* kind = find(j, "kind");
  if (!kind) {
    throw config_error(path + ": requires kind");
  }
  CouplingConfig coupling;
  coupling.kind = parse_coupling_kind(as_string(*kind, path + ".kind"),
                                      path + ".kind");
  if (const json* g = find(j, "g")) {
    coupling.g = as_number(*g, path + ".g");
  } else if (coupling.kind != CouplingKind::custom) {
    throw config_error(path + ": requires g for a built-in kind");
  }
  if (const json* center = find(j, "center")) {
    coupling.params.center = as_number(*center, path + ".center");
  }
  if (const json* width = find(j, "width")) {
    coupling.params.width = as_number(*width, path + ".width");
    if (!(coupling.params.width > 0.0)) {
      throw config_error(path + ".width: must be positive");
    }
  }
  if (const json* cutoff = find(j, "cutoff")) {
    coupling.params.cutoff = as_number(*cutoff, path + ".cutoff");
    if (!(coupling.params.cutoff > 0.0)) {
      throw config_error(path + ".cutoff: must be positive");
    }
  }
  if (const json* values = find(j, "values")) {
    if (coupling.kind != CouplingKind::custom) {
      throw config_error(path +
                         ".values: only valid for the custom kind");
    }
    if (!values->is_array() || values->empty()) {
      throw config_error(path + ".values: expected a non-empty 2d array");
    }
    const std::size_t rows = values->size();
    const std::size_t cols = (*values)[0].is_array() ? (*values)[0].size() : 0;
    if (cols == 0) {
      throw config_error(path + ".values: expected a non-empty 2d array");
    }
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const json& row = (*values)[r];
      if (!row.is_array() || row.size() != cols) {
        throw config_error(path + ".values: ragged rows");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            as_complex(row[c], path + ".values");
      }
    }
    coupling.values = std::move(m);
  } else if (coupling.kind == CouplingKind::custom) {
    throw config_error(path + ": the custom kind requires values");
  }
  return coupling;
}

inline PulseShape parse_pulse_shape(const std::string& s,
                                    const std::string& path) {
  if (s == "gaussian") return PulseShape::gaussian;
  if (s == "single_mode") return PulseShape::single_mode;
  throw config_error(path + ": expected gaussian or single_mode");
}

inline const char* pulse_shape_name(PulseShape shape) {
  return shape == PulseShape::gaussian ? "gaussian" : "single_mode";
}

inline PulseConfig parse_pulse(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"shape", "center", "width", "mode_index"}, path);
  const json* shape = find(j, "shape");
  if (!shape) {
    throw config_error(path + ": requires shape");
  }
  PulseConfig pulse;
  pulse.shape =
      parse_pulse_shape(as_string(*shape, path + ".shape"), path + ".shape");
  if (const json* center = find(j, "center")) {
    pulse.params.center = as_number(*center, path + ".center");
  }
  if (const json* width = find(j, "width")) {
    pulse.params.width = as_number(*width, path + ".width");
    if (!(pulse.params.width > 0.0)) {
      throw config_error(path + ".width: must be positive");
    }
  }
  if (const json* index = find(j, "mode_index")) {
    const int v = as_int(*index, path + ".mode_index");
    if (v < 0) {
      throw config_error(path + ".mode_index: must be non-negative");
    }
    pulse.params.mode_index = v;
  }
  return pulse;
}

inline ModelConfig parse_model(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"photon", "phonon", "coupling", "pulse", "alpha", "beta"},
                 path);
  const json* photon = find(j, "photon");
  const json* phonon = find(j, "phonon");
  const json* coupling = find(j, "coupling");
  const json* pulse = find(j, "pulse");
  if (!photon || !phonon || !coupling || !pulse) {
    throw config_error(path +
                       ": requires photon, phonon, coupling and pulse");
  }
  ModelConfig model;
  model.photon = parse_grid(*photon, path + ".photon");
  model.phonon = parse_grid(*phonon, path + ".phonon");
  model.coupling = parse_coupling(*coupling, path + ".coupling");
  model.pulse = parse_pulse(*pulse, path + ".pulse");
  if (const json* alpha = find(j, "alpha")) {
    model.alpha = as_complex(*alpha, path + ".alpha");
  }
  if (const json* beta = find(j, "beta")) {
    model.beta = as_complex(*beta, path + ".beta");
  }
  if (model.coupling.values &&
      (model.coupling.values->rows() != model.photon.count ||
       model.coupling.values->cols() != model.phonon.count)) {
    throw config_error(path +
                       ".coupling.values: shape must be photon count by "
                       "phonon count");
  }
  return model;
}

inline ProtocolConfig parse_protocol(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"tau", "n_measurements", "trials", "seed"}, path);
  const json* tau = find(j, "tau");
  const json* n = find(j, "n_measurements");
  if (!tau || !n) {
    throw config_error(path + ": requires tau and n_measurements");
  }
  ProtocolConfig protocol;
  protocol.tau = as_number(*tau, path + ".tau");
  if (!(protocol.tau > 0.0)) {
    throw config_error(path + ".tau: must be positive");
  }
  protocol.n_measurements = as_int(*n, path + ".n_measurements");
  if (protocol.n_measurements < 1) {
    throw config_error(path + ".n_measurements: must be at least 1");
  }
  if (const json* trials = find(j, "trials")) {
    protocol.trials = as_uint(*trials, path + ".trials");
  }
  if (const json* seed = find(j, "seed")) {
    protocol.seed = as_uint(*seed, path + ".seed");
  }
  return protocol;
}

inline QndDeviceModel parse_device(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"theta", "alpha_p", "eta", "eps", "delta"}, path);
  QndDeviceModel device;
  if (const json* theta = find(j, "theta")) {
    device.theta = normalize_angle(as_number(*theta, path + ".theta"));
  }
  if (const json* alpha_p = find(j, "alpha_p")) {
    device.alpha_p = as_complex(*alpha_p, path + ".alpha_p");
  }
  if (const json* eta = find(j, "eta")) {
    device.eta = as_number(*eta, path + ".eta");
  }
  if (const json* eps = find(j, "eps")) {
    device.eps = as_number(*eps, path + ".eps");
  }
  if (const json* delta = find(j, "delta")) {
    device.delta = as_number(*delta, path + ".delta");
  }
  try {
    device.validate();
  } catch (const std::invalid_argument& e) {
    throw config_error(path + ": " + e.what());
  }
  return device;
}

inline AnalysisConfig parse_analysis(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j,
                 {"t_final", "n_steps", "quad_window", "exp_window",
                  "crossover_tol", "lengths", "quadrature"},
                 path);
  AnalysisConfig analysis;
  if (const json* t = find(j, "t_final")) {
    analysis.t_final = as_number(*t, path + ".t_final");
    if (!(analysis.t_final > 0.0)) {
      throw config_error(path + ".t_final: must be positive");
    }
  }
  if (const json* n = find(j, "n_steps")) {
    analysis.n_steps = as_int(*n, path + ".n_steps");
    if (analysis.n_steps < 1) {
      throw config_error(path + ".n_steps: must be at least 1");
    }
  }
  const auto window = [&](const char* key, double& slot) {
    if (const json* w = find(j, key)) {
      slot = as_number(*w, path + "." + key);
      if (!(slot > 0.0 && slot < 1.0)) {
        throw config_error(path + "." + key + ": must lie in (0, 1)");
      }
    }
  };
  window("quad_window", analysis.fit.quad_window);
  window("exp_window", analysis.fit.exp_window);
  if (analysis.fit.quad_window + analysis.fit.exp_window > 1.0) {
    throw config_error(path + ": quad_window and exp_window overlap");
  }
  if (const json* tol = find(j, "crossover_tol")) {
    analysis.fit.crossover_tol = as_number(*tol, path + ".crossover_tol");
    if (!(analysis.fit.crossover_tol > 0.0)) {
      throw config_error(path + ".crossover_tol: must be positive");
    }
  }
  if (const json* lengths = find(j, "lengths")) {
    if (!lengths->is_array()) {
      throw config_error(path + ".lengths: expected an array of numbers");
    }
    for (std::size_t i = 0; i < lengths->size(); ++i) {
      analysis.lengths.push_back(
          as_number((*lengths)[i], path + ".lengths"));
    }
  }
  if (const json* q = find(j, "quadrature")) {
    if (q->is_string()) {
      if (q->get<std::string>() != "optimal") {
        throw config_error(path +
                           ".quadrature: expected a number or \"optimal\"");
      }
    } else {
      analysis.quadrature = as_number(*q, path + ".quadrature");
    }
  }
  return analysis;
}

inline PlanSection parse_plan(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j,
                 {"gamma", "gamma_exp", "length", "v_f", "t_q", "devices",
                  "m_max", "segment_transmission", "loop_time",
                  "round_trips"},
                 path);
  PlanSection plan;
  const auto positive = [&](const char* key, std::optional<double>& slot) {
    if (const json* v = find(j, key)) {
      const double parsed = as_number(*v, path + "." + key);
      if (!(parsed > 0.0)) {
        throw config_error(path + "." + key + ": must be positive");
      }
      slot = parsed;
    }
  };
  if (const json* gamma = find(j, "gamma")) {
    const double v = as_number(*gamma, path + ".gamma");
    if (v < 0.0) {
      throw config_error(path + ".gamma: must be non-negative");
    }
    plan.gamma = v;
  }
  if (const json* gamma_exp = find(j, "gamma_exp")) {
    const double v = as_number(*gamma_exp, path + ".gamma_exp");
    if (v < 0.0) {
      throw config_error(path + ".gamma_exp: must be non-negative");
    }
    plan.gamma_exp = v;
  }
  positive("length", plan.length);
  positive("v_f", plan.v_f);
  positive("t_q", plan.t_q);
  positive("loop_time", plan.loop_time);
  if (const json* devices = find(j, "devices")) {
    const int v = as_int(*devices, path + ".devices");
    if (v < 0) {
      throw config_error(path + ".devices: must be non-negative");
    }
    plan.devices = v;
  }
  if (const json* m_max = find(j, "m_max")) {
    plan.m_max = as_int(*m_max, path + ".m_max");
    if (plan.m_max < 0) {
      throw config_error(path + ".m_max: must be non-negative");
    }
  }
  if (const json* st = find(j, "segment_transmission")) {
    plan.segment_transmission = as_number(*st, path + ".segment_transmission");
    if (!(plan.segment_transmission > 0.0) ||
        plan.segment_transmission > 1.0) {
      throw config_error(path +
                         ".segment_transmission: must lie in (0, 1]");
    }
  }
  if (const json* rt = find(j, "round_trips")) {
    const int v = as_int(*rt, path + ".round_trips");
    if (v < 1) {
      throw config_error(path + ".round_trips: must be at least 1");
    }
    plan.round_trips = v;
  }
  return plan;
}

inline OutputConfig parse_output(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, {"directory", "formats"}, path);
  OutputConfig output;
  if (const json* dir = find(j, "directory")) {
    output.directory = as_string(*dir, path + ".directory");
    if (output.directory.empty()) {
      throw config_error(path + ".directory: must not be empty");
    }
  }
  if (const json* formats = find(j, "formats")) {
    if (!formats->is_array() || formats->empty()) {
      throw config_error(path + ".formats: expected a non-empty array");
    }
    output.write_csv = false;
    output.write_json = false;
    for (const auto& f : *formats) {
      const std::string name = as_string(f, path + ".formats");
      if (name == "csv") {
        output.write_csv = true;
      } else if (name == "json") {
        output.write_json = true;
      } else {
        throw config_error(path + ".formats: expected csv or json");
      }
    }
  }
  return output;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  detail::require_object(j, "config");
  detail::reject_unknown(
      j, {"model", "protocol", "device", "analysis", "plan", "output"},
      "config");
  RunConfig config;
  if (const json* model = detail::find(j, "model")) {
    config.model = detail::parse_model(*model, "model");
  }
  if (const json* protocol = detail::find(j, "protocol")) {
    config.protocol = detail::parse_protocol(*protocol, "protocol");
  }
  if (const json* device = detail::find(j, "device")) {
    config.device = detail::parse_device(*device, "device");
  }
  if (const json* analysis = detail::find(j, "analysis")) {
    config.analysis = detail::parse_analysis(*analysis, "analysis");
  }
  if (const json* plan = detail::find(j, "plan")) {
    config.plan = detail::parse_plan(*plan, "plan");
  }
  if (const json* output = detail::find(j, "output")) {
    config.output = detail::parse_output(*output, "output");
  }
  return config;
}

inline json to_config_json(const RunConfig& config) {
  json j = json::object();
  if (config.model) {
    const ModelConfig& m = *config.model;
    json model;
    model["photon"] = {{"count", m.photon.count},
                       {"omega_min", m.photon.omega_min},
                       {"omega_max", m.photon.omega_max}};
    model["phonon"] = {{"count", m.phonon.count},
                       {"omega_min", m.phonon.omega_min},
                       {"omega_max", m.phonon.omega_max}};
    json coupling;
    coupling["kind"] = detail::coupling_kind_name(m.coupling.kind);
    if (m.coupling.kind != CouplingKind::custom) {
      coupling["g"] = m.coupling.g;
      coupling["center"] = m.coupling.params.center;
      coupling["width"] = m.coupling.params.width;
      coupling["cutoff"] = m.coupling.params.cutoff;
    } else if (m.coupling.values) {
      json rows = json::array();
      for (Eigen::Index r = 0; r < m.coupling.values->rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.coupling.values->cols(); ++c) {
          row.push_back(detail::complex_to_json((*m.coupling.values)(r, c)));
        }
        rows.push_back(std::move(row));
      }
      coupling["values"] = std::move(rows);
    }
    model["coupling"] = std::move(coupling);
    json pulse;
    pulse["shape"] = detail::pulse_shape_name(m.pulse.shape);
    if (m.pulse.shape == PulseShape::gaussian) {
      pulse["center"] = m.pulse.params.center;
      pulse["width"] = m.pulse.params.width;
    } else {
      pulse["mode_index"] = static_cast<int>(m.pulse.params.mode_index);
    }
    model["pulse"] = std::move(pulse);
    model["alpha"] = detail::complex_to_json(m.alpha);
    model["beta"] = detail::complex_to_json(m.beta);
    j["model"] = std::move(model);
  }
  if (config.protocol) {
    j["protocol"] = {{"tau", config.protocol->tau},
                     {"n_measurements", config.protocol->n_measurements},
                     {"trials", config.protocol->trials},
                     {"seed", config.protocol->seed}};
  }
  if (config.device) {
    j["device"] = {{"theta", config.device->theta},
                   {"alpha_p", detail::complex_to_json(config.device->alpha_p)},
                   {"eta", config.device->eta},
                   {"eps", config.device->eps},
                   {"delta", config.device->delta}};
  }
  json analysis;
  analysis["t_final"] = config.analysis.t_final;
  analysis["n_steps"] = config.analysis.n_steps;
  analysis["quad_window"] = config.analysis.fit.quad_window;
  analysis["exp_window"] = config.analysis.fit.exp_window;
  analysis["crossover_tol"] = config.analysis.fit.crossover_tol;
  if (!config.analysis.lengths.empty()) {
    analysis["lengths"] = config.analysis.lengths;
  }
  if (config.analysis.quadrature) {
    analysis["quadrature"] = *config.analysis.quadrature;
  } else {
    analysis["quadrature"] = "optimal";
  }
  j["analysis"] = std::move(analysis);
  if (config.plan) {
    const PlanSection& p = *config.plan;
    json plan = json::object();
    if (p.gamma) plan["gamma"] = *p.gamma;
    if (p.gamma_exp) plan["gamma_exp"] = *p.gamma_exp;
    if (p.length) plan["length"] = *p.length;
    if (p.v_f) plan["v_f"] = *p.v_f;
    if (p.t_q) plan["t_q"] = *p.t_q;
    if (p.devices) plan["devices"] = *p.devices;
    plan["m_max"] = p.m_max;
    plan["segment_transmission"] = p.segment_transmission;
    if (p.loop_time) plan["loop_time"] = *p.loop_time;
    if (p.round_trips) plan["round_trips"] = *p.round_trips;
    j["plan"] = std::move(plan);
  }
  json output;
  output["directory"] = config.output.directory;
  json formats = json::array();
  if (config.output.write_csv) formats.push_back("csv");
  if (config.output.write_json) formats.push_back("json");
  output["formats"] = std::move(formats);
  j["output"] = std::move(output);
  return j;
}

// Canonical fingerprint of a config document: FNV-1a over the sorted-key
// compact dump.
inline std::string config_hash(const json& j) {
  return to_hex(fnv1a64(j.dump()));
}

// Everything a subcommand needs from the model section, assembled.
struct BuiltModel {
  ModeGrid photon;
  ModeGrid phonon;
  HamiltonianMatrix hamiltonian;
  ExcitationState state;
};

inline BuiltModel build_model(const ModelConfig& m) {
  BuiltModel built;
  built.photon = build_mode_grid(m.photon.count, m.photon.omega_min,
                                 m.photon.omega_max, ModeLabel::photon);
  built.phonon = build_mode_grid(m.phonon.count, m.phonon.omega_min,
                                 m.phonon.omega_max, ModeLabel::phonon);
  CouplingSpectrum coupling;
  if (m.coupling.kind == CouplingKind::custom) {
    coupling =
        build_custom_coupling(*m.coupling.values, built.photon, built.phonon);
  } else {
    coupling = build_coupling(m.coupling.kind, m.coupling.g, m.coupling.params,
                              built.photon, built.phonon);
  }
  built.hamiltonian = assemble_hamiltonian(built.photon, built.phonon, coupling);
  built.state = initial_pulse(m.pulse.shape, m.pulse.params, m.alpha, m.beta,
                              built.photon, built.phonon);
  return built;
}

// Apply one dotted-path override, creating intermediate objects as needed.
// The value parses as JSON when possible and falls back to a plain string.
inline void apply_override(json& root, const std::string& key,
                           const std::string& value) {
  if (key.empty()) {
    throw config_error("override key must not be empty");
  }
  json* node = &root;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) {
      throw config_error("override key \"" + key + "\" has an empty segment");
    }
    if (!node->is_object()) {
      throw config_error("override key \"" + key +
                         "\" descends into a non-object");
    }
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) {
      *node = json::object();
    }
    start = dot + 1;
  }
}

}  // namespace zenoline
