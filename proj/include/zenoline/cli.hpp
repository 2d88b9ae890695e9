/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zenoline/config.hpp"
#include "zenoline/errors.hpp"
#include "zenoline/evolution.hpp"
#include "zenoline/io.hpp"
#include "zenoline/planner.hpp"
#include "zenoline/qnd.hpp"
#include "zenoline/regime.hpp"
#include "zenoline/rng.hpp"
#include "zenoline/version.hpp"
#include "zenoline/zeno.hpp"

namespace zenoline::cli {

// Worker pool size: ZENOLINE_THREADS when set, hardware concurrency
// otherwise. Thread count never changes any numeric result.
inline unsigned worker_threads() {
  if (const char* env = std::getenv("ZENOLINE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096) {
      throw config_error("ZENOLINE_THREADS must be a positive integer");
    }
    return static_cast<unsigned>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

namespace detail {

inline json load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw config_error("cannot open config file: " + path);
  }
  try {
    return json::parse(file);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config file is not valid JSON: ") +
                       e.what());
  }
}

inline void write_text(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot write " + path.string());
  }
  file << content;
  if (!file) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

inline std::string iso8601_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  RunConfig cfg;
  json raw;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  unsigned mc_threads = 1;
  std::optional<std::string> data_path;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

inline RunMeta make_meta(const Context& ctx) {
  return RunMeta{config_hash(ctx.raw), ctx.seed};
}

inline std::string json_text(const json& j) { return j.dump(2) + "\n"; }

inline void note_file(const Context& ctx, const std::filesystem::path& path) {
  *ctx.out << "wrote " << path.string() << "\n";
}

inline const ModelConfig& require_model(const Context& ctx) {
  if (!ctx.cfg.model) {
    throw config_error("this command requires a model section");
  }
  return *ctx.cfg.model;
}

inline double handle_simulate(const Context& ctx) {
  const BuiltModel built = build_model(require_model(ctx));
  const double t_rec = recurrence_time(built.phonon);
  if (ctx.cfg.analysis.t_final > t_rec) {
    *ctx.err << "warning: t_final " << ctx.cfg.analysis.t_final
             << " exceeds the grid recurrence time " << t_rec
             << "; late-time dynamics are discretization artifacts\n";
  }
  const Trajectory traj = evolve(built.state, built.hamiltonian,
                                 ctx.cfg.analysis.t_final,
                                 ctx.cfg.analysis.n_steps);
  DecayFit fit;
  try {
    fit = fit_decay(traj, ctx.cfg.analysis.fit);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  const RunMeta meta = make_meta(ctx);
  if (ctx.cfg.output.write_csv) {
    std::ostringstream os;
    write_trajectory_csv(os, traj, meta);
    const auto path = ctx.out_dir / "trajectory.csv";
    write_text(path, os.str());
    note_file(ctx, path);
  }
  if (ctx.cfg.output.write_json) {
    json summary;
    summary["_meta"] = meta_json(meta);
    summary["gamma"] = compute_gamma(built.hamiltonian, built.state);
    summary["recurrence_time"] = t_rec;
    summary["fit"] = decay_fit_json(fit);
    const auto path = ctx.out_dir / "simulate_summary.json";
    write_text(path, json_text(summary));
    note_file(ctx, path);
  }
  return traj.survival.back();
}

inline double handle_zeno(const Context& ctx) {
  const ModelConfig& model_cfg = require_model(ctx);
  if (!ctx.cfg.protocol) {
    throw config_error("zeno requires a protocol section");
  }
  const ProtocolConfig& protocol = *ctx.cfg.protocol;
  const BuiltModel built = build_model(model_cfg);
  ZenoConfig zc;
  zc.tau = protocol.tau;
  zc.n_measurements = protocol.n_measurements;
  zc.device = ctx.cfg.device;
  const ZenoRecord record =
      protocol.trials > 0
          ? run_monte_carlo(built.state, built.hamiltonian, zc,
                            protocol.trials, ctx.seed, ctx.mc_threads)
          : run_ensemble(built.state, built.hamiltonian, zc);
  const RunMeta meta = make_meta(ctx);
  if (ctx.cfg.output.write_csv) {
    std::ostringstream os;
    write_zeno_csv(os, record, zc.tau, meta);
    const auto path = ctx.out_dir / "zeno.csv";
    write_text(path, os.str());
    note_file(ctx, path);
  }
  if (ctx.cfg.output.write_json) {
    json summary;
    summary["_meta"] = meta_json(meta);
    summary["tau"] = zc.tau;
    summary["n_measurements"] = zc.n_measurements;
    const double gamma = compute_gamma(built.hamiltonian, built.state);
    summary["gamma"] = gamma;
    summary["final_survival"] = record.cumulative.back();
    if (record.gamma_eff) {
      summary["gamma_eff"] = *record.gamma_eff;
    }
    if (gamma * zc.tau < 1.0) {
      const AnalyticSurvival analytic =
          analytic_survival(gamma, zc.tau, zc.total_time());
      summary["analytic"] = {
          {"exact_product", analytic.exact_product},
          {"exponential_approx", analytic.exponential_approx},
          {"n_intervals", analytic.n_intervals}};
    }
    if (record.trials) {
      summary["monte_carlo"] = {{"successes", record.trials->successes},
                                {"trials", record.trials->trials},
                                {"fraction", record.trials->fraction()},
                                {"seed", record.trials->seed},
                                {"survivors_after",
                                 record.trials->survivors_after}};
    }
    const auto path = ctx.out_dir / "zeno_summary.json";
    write_text(path, json_text(summary));
    note_file(ctx, path);
  }
  return record.trials ? record.trials->fraction()
                       : record.cumulative.back();
}

inline double handle_tq(const Context& ctx) {
  if (!ctx.cfg.plan || !ctx.cfg.plan->v_f) {
    throw config_error("tq requires plan.v_f");
  }
  const double v_f = *ctx.cfg.plan->v_f;
  const double tol = ctx.cfg.analysis.fit.crossover_tol;
  TqTable table;
  try {
    if (ctx.data_path) {
      std::ifstream file(*ctx.data_path);
      if (!file) {
        throw config_error("cannot open data file: " + *ctx.data_path);
      }
      const auto rows = read_length_transmission_csv(file);
      std::vector<double> lengths, survival;
      lengths.reserve(rows.size());
      survival.reserve(rows.size());
      for (const auto& [length, transmission] : rows) {
        lengths.push_back(length);
        survival.push_back(transmission);
      }
      table = detect_departure(lengths, survival, v_f, tol);
    } else {
      const BuiltModel built = build_model(require_model(ctx));
      table = tq_experiment(built.hamiltonian, built.state,
                            ctx.cfg.analysis.lengths, v_f, tol);
    }
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  const RunMeta meta = make_meta(ctx);
  if (ctx.cfg.output.write_csv) {
    std::ostringstream os;
    write_tq_csv(os, table, meta);
    const auto path = ctx.out_dir / "tq.csv";
    write_text(path, os.str());
    note_file(ctx, path);
  }
  if (ctx.cfg.output.write_json) {
    json summary;
    summary["_meta"] = meta_json(meta);
    summary["gamma_exp"] = table.gamma_exp;
    summary["prefactor"] = table.prefactor;
    summary["exponential_ok"] = table.exponential_ok;
    if (table.t_q_estimate) {
      summary["t_q_estimate"] = *table.t_q_estimate;
      summary["max_device_spacing"] =
          max_device_spacing(*table.t_q_estimate, v_f);
    }
    const auto path = ctx.out_dir / "tq_summary.json";
    write_text(path, json_text(summary));
    note_file(ctx, path);
  }
  return table.t_q_estimate.value_or(
      std::numeric_limits<double>::quiet_NaN());
}

inline double handle_qnd(const Context& ctx) {
  if (!ctx.cfg.device) {
    throw config_error("qnd requires a device section");
  }
  const QndDeviceModel& device = *ctx.cfg.device;
  const DiscriminationReport report = homodyne_discriminate(
      device.alpha_p, device.theta, ctx.cfg.analysis.quadrature);
  if (ctx.cfg.output.write_json) {
    json doc;
    doc["_meta"] = meta_json(make_meta(ctx));
    doc["report"] = discrimination_json(report);
    const auto path = ctx.out_dir / "qnd_report.json";
    write_text(path, json_text(doc));
    note_file(ctx, path);
  }
  *ctx.out << "false_negative=" << format_double(report.false_negative)
           << " false_positive=" << format_double(report.false_positive)
           << " threshold=" << format_double(report.threshold) << "\n";
  return report.false_negative;
}

inline double resolve_gamma(const Context& ctx) {
  if (ctx.cfg.plan && ctx.cfg.plan->gamma) {
    return *ctx.cfg.plan->gamma;
  }
  if (ctx.cfg.model) {
    const BuiltModel built = build_model(*ctx.cfg.model);
    return compute_gamma(built.hamiltonian, built.state);
  }
  throw config_error("plan.gamma is required without a model section");
}

inline double handle_plan(const Context& ctx) {
  if (!ctx.cfg.plan) {
    throw config_error("plan requires a plan section");
  }
  const PlanSection& section = *ctx.cfg.plan;
  if (!section.length || !section.v_f || !section.t_q) {
    throw config_error("plan requires plan.length, plan.v_f and plan.t_q");
  }
  const double gamma = resolve_gamma(ctx);
  const QndDeviceModel device =
      ctx.cfg.device.value_or(QndDeviceModel::ideal());
  PlanOptions options;
  options.m_max = section.m_max;
  options.gamma_exp = section.gamma_exp;
  options.segment_transmission = section.segment_transmission;
  const LinkPlan best = plan_link(*section.length, *section.v_f, gamma,
                                  *section.t_q, device, section.devices,
                                  options);
  const RunMeta meta = make_meta(ctx);
  if (ctx.cfg.output.write_csv) {
    const std::vector<LinkPlan> scan = plan_link_scan(
        *section.length, *section.v_f, gamma, *section.t_q, device, options);
    std::ostringstream os;
    write_plan_scan_csv(os, scan, meta);
    const auto path = ctx.out_dir / "plan_scan.csv";
    write_text(path, os.str());
    note_file(ctx, path);
  }
  if (ctx.cfg.output.write_json) {
    json doc;
    doc["_meta"] = meta_json(meta);
    doc["gamma"] = gamma;
    doc["plan"] = link_plan_json(best);
    const auto path = ctx.out_dir / "link_plan.json";
    write_text(path, json_text(doc));
    note_file(ctx, path);
  }
  *ctx.out << "devices=" << best.devices
           << " survival=" << format_double(best.survival)
           << " fidelity=" << format_double(best.fidelity) << "\n";
  return best.survival;
}

inline double handle_memory(const Context& ctx) {
  if (!ctx.cfg.plan) {
    throw config_error("memory requires a plan section");
  }
  const PlanSection& section = *ctx.cfg.plan;
  if (!section.loop_time || !section.round_trips) {
    throw config_error(
        "memory requires plan.loop_time and plan.round_trips");
  }
  const double gamma = resolve_gamma(ctx);
  const QndDeviceModel device =
      ctx.cfg.device.value_or(QndDeviceModel::ideal());
  const MemoryPlan plan =
      memory_loop(*section.loop_time, *section.round_trips, gamma, device);
  const RunMeta meta = make_meta(ctx);
  if (ctx.cfg.output.write_csv) {
    std::ostringstream os;
    write_memory_csv(os, plan, meta);
    const auto path = ctx.out_dir / "memory.csv";
    write_text(path, os.str());
    note_file(ctx, path);
  }
  if (ctx.cfg.output.write_json) {
    json doc;
    doc["_meta"] = meta_json(meta);
    doc["gamma"] = gamma;
    doc["plan"] = memory_plan_json(plan);
    const auto path = ctx.out_dir / "memory_plan.json";
    write_text(path, json_text(doc));
    note_file(ctx, path);
  }
  return plan.survival.back();
}

inline double run_one(const std::string& command, Context& ctx) {
  std::filesystem::create_directories(ctx.out_dir);
  double headline = 0.0;
  if (command == "simulate") {
    headline = handle_simulate(ctx);
  } else if (command == "zeno") {
    headline = handle_zeno(ctx);
  } else if (command == "tq") {
    headline = handle_tq(ctx);
  } else if (command == "qnd") {
    headline = handle_qnd(ctx);
  } else if (command == "plan") {
    headline = handle_plan(ctx);
  } else if (command == "memory") {
    headline = handle_memory(ctx);
  } else {
    throw config_error("unknown run command: " + command);
  }
  json sidecar;
  sidecar["command"] = command;
  sidecar["config_hash"] = config_hash(ctx.raw);
  sidecar["seed"] = ctx.seed;
  sidecar["timestamp"] = iso8601_now();
  sidecar["version"] = version_string;
  write_text(ctx.out_dir / (command + ".meta.json"), json_text(sidecar));
  return headline;
}

inline std::string sanitize_component(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '-' ||
                      c == '_' || c == '=';
    out.push_back(keep ? c : '_');
  }
  return out.empty() ? std::string("_") : out;
}

struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
  std::string run;
};

inline int handle_sweep(const json& base_raw, const RunConfig& base_cfg,
                        const SweepSpec& spec,
                        std::optional<std::uint64_t> seed_override,
                        const std::filesystem::path& out_dir,
                        std::ostream& out, std::ostream& err) {
  static const char* runnable[] = {"simulate", "zeno", "tq",
                                   "qnd",      "plan", "memory"};
  if (std::find_if(std::begin(runnable), std::end(runnable),
                   [&](const char* name) { return spec.run == name; }) ==
      std::end(runnable)) {
    throw config_error("sweep --run must name one of simulate, zeno, tq, "
                       "qnd, plan, memory");
  }
  if (spec.values.empty()) {
    throw config_error("sweep --values must hold at least one value");
  }
  const std::uint64_t base_seed =
      seed_override ? *seed_override
                    : (base_cfg.protocol ? base_cfg.protocol->seed : 0);

  // Validate every point before running any of them.
  struct Point {
    Context ctx;
    std::ostringstream out_buf;
    std::ostringstream err_buf;
    double headline = 0.0;
    std::string failure;
    bool numeric_failure = false;
  };
  std::vector<Point> points(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    json raw = base_raw;
    apply_override(raw, spec.key, spec.values[i]);
    Point& point = points[i];
    try {
      point.ctx.cfg = parse_config(raw);
    } catch (const config_error& e) {
      throw config_error("sweep point " + std::to_string(i) + " (" +
                         spec.key + "=" + spec.values[i] + "): " + e.what());
    }
    point.ctx.raw = std::move(raw);
    point.ctx.seed = base_seed ^ splitmix64(static_cast<std::uint64_t>(i));
    point.ctx.out_dir =
        out_dir / (std::to_string(i) + "_" + sanitize_component(spec.key) +
                   "=" + sanitize_component(spec.values[i]));
    point.ctx.mc_threads = 1;
    point.ctx.out = &point.out_buf;
    point.ctx.err = &point.err_buf;
  }

  const unsigned workers = std::max(
      1u, std::min(worker_threads(),
                   static_cast<unsigned>(points.size())));
  const auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        points[i].headline = run_one(spec.run, points[i].ctx);
      } catch (const config_error& e) {
        points[i].failure = e.what();
      } catch (const std::exception& e) {
        points[i].failure = e.what();
        points[i].numeric_failure = true;
      }
    }
  };
  if (workers == 1) {
    run_range(0, points.size());
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (points.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(points.size(), w * chunk);
      const std::size_t end = std::min(points.size(), begin + chunk);
      pool.emplace_back([&, begin, end] { run_range(begin, end); });
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  bool any_failed = false;
  bool any_numeric = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << points[i].out_buf.str();
    err << points[i].err_buf.str();
    if (!points[i].failure.empty()) {
      any_failed = true;
      any_numeric = any_numeric || points[i].numeric_failure;
      err << "sweep point " << i << " (" << spec.key << "="
          << spec.values[i] << ") failed: " << points[i].failure << "\n";
    }
  }
  if (any_failed) {
    return any_numeric ? 1 : 2;
  }

  std::filesystem::create_directories(out_dir);
  std::ostringstream os;
  write_meta_lines(os, RunMeta{config_hash(base_raw), base_seed});
  os << "index,key,value,seed,result\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << i << ',' << spec.key << ',' << spec.values[i] << ','
       << points[i].ctx.seed << ',' << format_double(points[i].headline)
       << '\n';
  }
  const auto path = out_dir / "sweep_summary.csv";
  write_text(path, os.str());
  out << "wrote " << path.string() << "\n";
  return 0;
}

inline std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  for (const std::string& item : out) {
    if (item.empty()) {
      throw config_error("sweep --values holds an empty entry");
    }
  }
  return out;
}

}  // namespace detail

// Full command-line entry point. Writes human-readable progress to `out`,
// warnings and errors to `err`. Returns 0 on success, 1 on computation
// failure, 2 on configuration or usage errors.
inline int run(int argc, const char* const argv[], std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Zeno-protected single-photon transmission simulator"};
  app.require_subcommand(1);

  struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
  };
  CommonOptions common;
  std::optional<std::string> data_path;
  detail::SweepSpec sweep;
  std::string sweep_values;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path,
                    "JSON run configuration file")
        ->required();
    sub->add_option("--set", common.overrides,
                    "Override a config entry, key=value (repeatable)");
    sub->add_option("--seed", common.seed, "Random seed override");
    sub->add_option("--out", common.out_dir, "Output directory override");
    return sub;
  };

  add_common(app.add_subcommand("simulate",
                                "Propagate the pulse and fit decay regimes"));
  add_common(app.add_subcommand("zeno",
                                "Run the repeated-measurement protocol"));
  CLI::App* tq_cmd = add_common(app.add_subcommand(
      "tq", "Locate the quadratic-to-exponential crossover"));
  tq_cmd->add_option("--data", data_path,
                     "length,transmission CSV to analyze instead of "
                     "simulating");
  add_common(app.add_subcommand("qnd", "Analyze the homodyne readout"));
  add_common(app.add_subcommand("plan", "Plan a protected link"));
  add_common(app.add_subcommand("memory", "Plan a fiber-loop memory"));
  CLI::App* sweep_cmd =
      add_common(app.add_subcommand("sweep", "Run a command over a "
                                             "parameter sweep"));
  sweep_cmd->add_option("--key", sweep.key, "Dotted config key to vary")
      ->required();
  sweep_cmd->add_option("--values", sweep_values,
                        "Comma-separated values for the key")
      ->required();
  sweep_cmd
      ->add_option("--run", sweep.run, "Command to run at each point")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    json raw = detail::load_config_file(common.config_path);
    for (const std::string& entry : common.overrides) {
      const std::size_t eq = entry.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw config_error("--set expects key=value, got \"" + entry + "\"");
      }
      apply_override(raw, entry.substr(0, eq), entry.substr(eq + 1));
    }
    RunConfig cfg = parse_config(raw);
    const std::filesystem::path out_dir =
        common.out_dir ? *common.out_dir : cfg.output.directory;
    if (command == "sweep") {
      sweep.values = detail::split_csv_list(sweep_values);
      return detail::handle_sweep(raw, cfg, sweep, common.seed, out_dir, out,
                                  err);
    }
    detail::Context ctx;
    ctx.cfg = std::move(cfg);
    ctx.raw = std::move(raw);
    ctx.seed = common.seed ? *common.seed
                           : (ctx.cfg.protocol ? ctx.cfg.protocol->seed : 0);
    ctx.out_dir = out_dir;
    ctx.mc_threads = worker_threads();
    ctx.data_path = data_path;
    ctx.out = &out;
    ctx.err = &err;
    detail::run_one(command, ctx);
    return 0;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

inline int run(int argc, const char* const argv[]) {
  return run(argc, argv, std::cout, std::cerr);
}

// Convenience wrapper for in-process invocation, mainly from tests.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("zenoline");
  for (const std::string& arg : args) {
    argv.push_back(arg.c_str());
  }
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace zenoline::cli
