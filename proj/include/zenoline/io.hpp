/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zenoline/errors.hpp"
#include "zenoline/evolution.hpp"
#include "zenoline/numerics.hpp"
#include "zenoline/planner.hpp"
#include "zenoline/qnd.hpp"
#include "zenoline/regime.hpp"
#include "zenoline/version.hpp"
#include "zenoline/zeno.hpp"

namespace zenoline {

// Provenance stamp shared by every output file of a run. CSV files carry it
// as '#' comment lines ahead of the header row; JSON files embed it as a
// "_meta" object. Timestamps never appear here, only in the sidecar meta
// file, so reruns produce identical bytes.
struct RunMeta {
  std::string config_hash;
  std::uint64_t seed = 0;
};

inline void write_meta_lines(std::ostream& os, const RunMeta& meta) {
  os << "# zenoline " << version_string << "\n";
  os << "# config_hash=" << meta.config_hash << " seed=" << meta.seed << "\n";
}

inline nlohmann::json meta_json(const RunMeta& meta) {
  return {{"version", version_string},
          {"config_hash", meta.config_hash},
          {"seed", meta.seed}};
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                                 const RunMeta& meta) {
  write_meta_lines(os, meta);
  os << "t,P_s\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_double(traj.times[i]) << ','
       << format_double(traj.survival[i]) << '\n';
  }
}

inline void write_zeno_csv(std::ostream& os, const ZenoRecord& record,
                           double tau, const RunMeta& meta) {
  write_meta_lines(os, meta);
  os << "k,t,q_k,cumulative\n";
  for (std::size_t k = 0; k < record.per_interval.size(); ++k) {
    os << (k + 1) << ','
       << format_double(tau * static_cast<double>(k + 1)) << ','
       << format_double(record.per_interval[k]) << ','
       << format_double(record.cumulative[k]) << '\n';
  }
}

inline void write_tq_csv(std::ostream& os, const TqTable& table,
                         const RunMeta& meta) {
  write_meta_lines(os, meta);
  os << "length,P_s,departure,T_q_estimate\n";
  for (const TqRow& row : table.rows) {
    os << format_double(row.length) << ',' << format_double(row.survival)
       << ',' << (row.departure ? 1 : 0) << ',';
    if (table.t_q_estimate && row.departure &&
        row.time == *table.t_q_estimate) {
      os << format_double(*table.t_q_estimate);
    }
    os << '\n';
  }
}

inline void write_plan_scan_csv(std::ostream& os,
                                const std::vector<LinkPlan>& plans,
                                const RunMeta& meta) {
  write_meta_lines(os, meta);
  os << "devices,spacing,tau_seg,survival,fidelity\n";
  for (const LinkPlan& plan : plans) {
    os << plan.devices << ',' << format_double(plan.spacing) << ','
       << format_double(plan.tau_seg) << ',' << format_double(plan.survival)
       << ',' << format_double(plan.fidelity) << '\n';
  }
}

inline void write_memory_csv(std::ostream& os, const MemoryPlan& plan,
                             const RunMeta& meta) {
  write_meta_lines(os, meta);
  os << "k,survival,fidelity\n";
  for (std::size_t i = 0; i < plan.survival.size(); ++i) {
    os << (i + 1) << ',' << format_double(plan.survival[i]) << ','
       << format_double(plan.fidelity[i]) << '\n';
  }
}

// The pinned three-field readout report.
inline nlohmann::json discrimination_json(const DiscriminationReport& report) {
  return {{"false_negative", report.false_negative},
          {"false_positive", report.false_positive},
          {"threshold", report.threshold}};
}

inline nlohmann::json decay_fit_json(const DecayFit& fit) {
  nlohmann::json j = {{"gamma_fit", fit.gamma_fit},
                      {"quadratic_found", fit.quadratic_found},
                      {"quadratic_residual", fit.quadratic_residual},
                      {"gamma_exp", fit.gamma_exp},
                      {"prefactor", fit.prefactor},
                      {"exponential_found", fit.exponential_found},
                      {"exponential_residual", fit.exponential_residual}};
  if (fit.t_q) {
    j["t_q"] = *fit.t_q;
  }
  return j;
}

inline nlohmann::json link_plan_json(const LinkPlan& plan) {
  return {{"length", plan.length},
          {"v_f", plan.v_f},
          {"devices", plan.devices},
          {"spacing", plan.spacing},
          {"tau_seg", plan.tau_seg},
          {"survival", plan.survival},
          {"fidelity", plan.fidelity},
          {"baseline", plan.baseline}};
}

inline nlohmann::json memory_plan_json(const MemoryPlan& plan) {
  return {{"loop_time", plan.loop_time},
          {"round_trips", plan.round_trips},
          {"survival", plan.survival},
          {"fidelity", plan.fidelity}};
}

// Reads a two-column CSV of fiber length and measured transmission, in the
// column order of the header "length,transmission". '#' comment lines and
// the header row are skipped.
inline std::vector<std::pair<double, double>> read_length_transmission_csv(
    std::istream& is) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line.find_first_not_of("0123456789.,+-eE \t\r") !=
          std::string::npos) {
        continue;  // header row
      }
    }
    std::istringstream cells(line);
    std::string a, b, extra;
    if (!std::getline(cells, a, ',') || !std::getline(cells, b, ',')) {
      throw config_error("line " + std::to_string(line_no) +
                         ": expected length,transmission");
    }
    if (std::getline(cells, extra, ',')) {
      throw config_error("line " + std::to_string(line_no) +
                         ": expected exactly two columns");
    }
    try {
      std::size_t pos_a = 0, pos_b = 0;
      const double length = std::stod(a, &pos_a);
      const double transmission = std::stod(b, &pos_b);
      if (pos_a != a.find_last_not_of(" \t\r") + 1 ||
          pos_b != b.find_last_not_of(" \t\r") + 1) {
        throw config_error("line " + std::to_string(line_no) +
                           ": trailing characters in a numeric cell");
      }
      rows.emplace_back(length, transmission);
    } catch (const std::invalid_argument&) {
      throw config_error("line " + std::to_string(line_no) +
                         ": expected numeric length,transmission");
    } catch (const std::out_of_range&) {
      throw config_error("line " + std::to_string(line_no) +
                         ": numeric value out of range");
    }
  }
  if (rows.empty()) {
    throw config_error("transmission data holds no rows");
  }
  return rows;
}

}  // namespace zenoline
