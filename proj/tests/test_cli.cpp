/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zenoline/cli.hpp"
#include "zenoline/planner.hpp"
#include "zenoline/rng.hpp"

namespace fs = std::filesystem;
using namespace zenoline;

namespace {

struct TempDir {
  fs::path path;

  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto stamp =
        std::chrono::steady_clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() /
           ("zenoline_cli_" + std::to_string(stamp) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }

  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }

  fs::path operator/(const std::string& leaf) const { return path / leaf; }
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult result;
  result.code = cli::run(args, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

json two_level_config() {
  return json::parse(R"({
    "model": {
      "photon": {"count": 1, "omega_min": 1.0, "omega_max": 1.0},
      "phonon": {"count": 1, "omega_min": 1.0, "omega_max": 1.0},
      "coupling": {"kind": "flat", "g": 1.0},
      "pulse": {"shape": "single_mode", "mode_index": 0}
    },
    "protocol": {"tau": 0.1, "n_measurements": 100, "seed": 42},
    "output": {"directory": "out", "formats": ["csv", "json"]}
  })");
}

fs::path write_config(const TempDir& dir, const json& cfg,
                      const std::string& name = "config.json") {
  const fs::path path = dir / name;
  std::ofstream file(path);
  file << cfg.dump(2) << "\n";
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file);
  std::ostringstream os;
  os << file.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("zeno runs write the expected files deterministically") {
  TempDir dir;
  const fs::path cfg = write_config(dir, two_level_config());
  const fs::path out1 = dir / "run1";
  const fs::path out2 = dir / "run2";

  const CliResult first = run_cli(
      {"zeno", "--config", cfg.string(), "--out", out1.string()});
  INFO(first.err);
  REQUIRE(first.code == 0);
  CHECK(fs::exists(out1 / "zeno.csv"));
  CHECK(fs::exists(out1 / "zeno_summary.json"));
  CHECK(fs::exists(out1 / "zeno.meta.json"));

  const CliResult second = run_cli(
      {"zeno", "--config", cfg.string(), "--out", out2.string()});
  REQUIRE(second.code == 0);
  CHECK(read_file(out1 / "zeno.csv") == read_file(out2 / "zeno.csv"));
  CHECK(read_file(out1 / "zeno_summary.json") ==
        read_file(out2 / "zeno_summary.json"));

  const json summary = json::parse(read_file(out1 / "zeno_summary.json"));
  CHECK(summary["gamma"] == 1.0);
  CHECK(summary["n_measurements"] == 100);
  CHECK(summary["final_survival"].get<double>() ==
        Catch::Approx(0.36726518216478750).margin(1e-10));
  CHECK(summary["analytic"]["n_intervals"] == 100);

  const json sidecar = json::parse(read_file(out1 / "zeno.meta.json"));
  CHECK(sidecar["command"] == "zeno");
  CHECK(sidecar["seed"] == 42);
  CHECK(sidecar.contains("timestamp"));
  CHECK(sidecar["version"] == "0.1.0");
}

TEST_CASE("usage errors exit with code 2") {
  TempDir dir;

  const CliResult unknown = run_cli({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Usage") != std::string::npos);

  const CliResult no_config = run_cli({"zeno"});
  CHECK(no_config.code == 2);

  const CliResult missing = run_cli(
      {"zeno", "--config", (dir / "missing.json").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open config file") != std::string::npos);

  const fs::path garbled = dir / "garbled.json";
  std::ofstream(garbled) << "{ this is not json";
  const CliResult invalid = run_cli({"zeno", "--config", garbled.string()});
  CHECK(invalid.code == 2);
  CHECK(invalid.err.find("not valid JSON") != std::string::npos);

  json typo = two_level_config();
  typo["protcol"] = typo["protocol"];
  const CliResult rejected = run_cli(
      {"zeno", "--config", write_config(dir, typo, "typo.json").string()});
  CHECK(rejected.code == 2);
  CHECK(rejected.err.find("protcol") != std::string::npos);
}

TEST_CASE("set overrides rewrite the configuration") {
  TempDir dir;
  const fs::path cfg = write_config(dir, two_level_config());
  const fs::path out_base = dir / "base";
  const fs::path out_set = dir / "set";

  REQUIRE(run_cli({"zeno", "--config", cfg.string(), "--out",
                   out_base.string()}).code == 0);
  REQUIRE(run_cli({"zeno", "--config", cfg.string(), "--out",
                   out_set.string(), "--set", "protocol.tau=0.05"})
              .code == 0);

  const auto base_lines = lines_of(read_file(out_base / "zeno.csv"));
  const auto set_lines = lines_of(read_file(out_set / "zeno.csv"));
  CHECK(base_lines[1] != set_lines[1]);  // config hash differs
  CHECK(set_lines[3].rfind("1,0.05", 0) == 0);

  const CliResult no_equals = run_cli(
      {"zeno", "--config", cfg.string(), "--set", "protocol.tau"});
  CHECK(no_equals.code == 2);
  CHECK(no_equals.err.find("key=value") != std::string::npos);

  const CliResult bad_type = run_cli(
      {"zeno", "--config", cfg.string(), "--set", "protocol.tau=fast"});
  CHECK(bad_type.code == 2);
  CHECK(bad_type.err.find("protocol.tau") != std::string::npos);
}

TEST_CASE("seed overrides reach the outputs and the sampler") {
  TempDir dir;
  const fs::path cfg = write_config(dir, two_level_config());
  const fs::path out = dir / "mc";

  const CliResult result = run_cli(
      {"zeno", "--config", cfg.string(), "--out", out.string(), "--seed",
       "123", "--set", "protocol.trials=200"});
  INFO(result.err);
  REQUIRE(result.code == 0);

  const auto lines = lines_of(read_file(out / "zeno.csv"));
  CHECK(lines[1].find(" seed=123") != std::string::npos);

  const json summary = json::parse(read_file(out / "zeno_summary.json"));
  REQUIRE(summary.contains("monte_carlo"));
  CHECK(summary["monte_carlo"]["seed"] == 123);
  CHECK(summary["monte_carlo"]["trials"] == 200);
  CHECK(summary["_meta"]["seed"] == 123);
}

TEST_CASE("simulate writes the trajectory and the fit summary") {
  TempDir dir;
  json cfg = two_level_config();
  cfg["analysis"] = {{"t_final", 10.0}, {"n_steps", 2000}};
  const fs::path path = write_config(dir, cfg);
  const fs::path out = dir / "sim";

  const CliResult result = run_cli(
      {"simulate", "--config", path.string(), "--out", out.string()});
  INFO(result.err);
  REQUIRE(result.code == 0);
  CHECK(fs::exists(out / "trajectory.csv"));

  const json summary = json::parse(read_file(out / "simulate_summary.json"));
  CHECK(summary["gamma"] == 1.0);
  CHECK(summary["fit"]["quadratic_found"] == true);
  CHECK(summary["fit"]["gamma_fit"].get<double>() ==
        Catch::Approx(1.0).margin(0.01));

  const auto lines = lines_of(read_file(out / "trajectory.csv"));
  CHECK(lines[2] == "t,P_s");
  CHECK(lines[3] == "0,1");
}

TEST_CASE("qnd reports the pinned three readout fields") {
  TempDir dir;
  json cfg = two_level_config();
  cfg["device"] = {{"theta", 1.5707963267948966},
                   {"alpha_p", {2.0, 0.0}},
                   {"eta", 0.95},
                   {"eps", 0.02},
                   {"delta", 0.0}};
  const fs::path path = write_config(dir, cfg);
  const fs::path out = dir / "qnd";

  const CliResult result = run_cli(
      {"qnd", "--config", path.string(), "--out", out.string()});
  INFO(result.err);
  REQUIRE(result.code == 0);
  CHECK(result.out.find("false_negative=0.0227501319481792") !=
        std::string::npos);

  const json doc = json::parse(read_file(out / "qnd_report.json"));
  REQUIRE(doc.contains("report"));
  CHECK(doc["report"].size() == 3);
  CHECK(doc["report"]["false_negative"].get<double>() ==
        Catch::Approx(0.022750131948179207).margin(1e-12));
  CHECK(doc["report"]["false_positive"].get<double>() ==
        Catch::Approx(0.022750131948179207).margin(1e-12));
  CHECK(doc["report"].contains("threshold"));

  json no_device = two_level_config();
  const CliResult refused = run_cli(
      {"qnd", "--config", write_config(dir, no_device, "nodev.json").string(),
       "--out", (dir / "qnd2").string()});
  CHECK(refused.code == 2);
}

TEST_CASE("tq analyzes measured transmission tables") {
  TempDir dir;
  const json cfg = json::parse(R"({"plan": {"v_f": 1.0}})");
  const fs::path cfg_path = write_config(dir, cfg);

  const fs::path data = dir / "transmission.csv";
  {
    std::ofstream file(data);
    file << "length,transmission\n";
    for (int length = 10; length >= 1; --length) {
      const double expected = 0.9 * std::exp(-0.3 * length);
      const double value = length <= 2 ? 1.5 * expected : expected;
      file << length << ',' << format_double(value) << '\n';
    }
  }

  const fs::path out = dir / "tq";
  const CliResult result = run_cli(
      {"tq", "--config", cfg_path.string(), "--data", data.string(), "--out",
       out.string()});
  INFO(result.err);
  REQUIRE(result.code == 0);
  CHECK(fs::exists(out / "tq.csv"));

  const json summary = json::parse(read_file(out / "tq_summary.json"));
  CHECK(summary["exponential_ok"] == true);
  CHECK(summary["gamma_exp"].get<double>() ==
        Catch::Approx(0.3).margin(1e-9));
  CHECK(summary["t_q_estimate"].get<double>() ==
        Catch::Approx(2.0).margin(1e-12));
  CHECK(summary["max_device_spacing"].get<double>() ==
        Catch::Approx(2.0).margin(1e-12));

  const fs::path ascending = dir / "ascending.csv";
  std::ofstream(ascending) << "1,0.5\n2,0.4\n3,0.3\n4,0.2\n";
  const CliResult refused = run_cli(
      {"tq", "--config", cfg_path.string(), "--data", ascending.string(),
       "--out", (dir / "tq2").string()});
  CHECK(refused.code == 2);
  CHECK(refused.err.find("config error") != std::string::npos);
}

TEST_CASE("sweep fans a command out over one key") {
  TempDir dir;
  const fs::path cfg = write_config(dir, two_level_config());
  const fs::path out = dir / "sweep";

  const CliResult result = run_cli(
      {"sweep", "--config", cfg.string(), "--out", out.string(), "--key",
       "protocol.tau", "--values", "0.1,0.05", "--run", "zeno"});
  INFO(result.err);
  REQUIRE(result.code == 0);

  const fs::path point0 = out / "0_protocol.tau=0.1";
  const fs::path point1 = out / "1_protocol.tau=0.05";
  CHECK(fs::exists(point0 / "zeno.csv"));
  CHECK(fs::exists(point1 / "zeno.csv"));

  const std::uint64_t seed0 = 42ull ^ splitmix64(0);
  const std::uint64_t seed1 = 42ull ^ splitmix64(1);
  CHECK(lines_of(read_file(point0 / "zeno.csv"))[1].find(
            "seed=" + std::to_string(seed0)) != std::string::npos);
  CHECK(lines_of(read_file(point1 / "zeno.csv"))[1].find(
            "seed=" + std::to_string(seed1)) != std::string::npos);

  const auto summary_lines = lines_of(read_file(out / "sweep_summary.csv"));
  REQUIRE(summary_lines.size() == 5);
  CHECK(summary_lines[2] == "index,key,value,seed,result");
  CHECK(summary_lines[3].rfind("0,protocol.tau,0.1," +
                                   std::to_string(seed0) + ",",
                               0) == 0);
  CHECK(summary_lines[4].rfind("1,protocol.tau,0.05," +
                                   std::to_string(seed1) + ",",
                               0) == 0);

  const CliResult bogus = run_cli(
      {"sweep", "--config", cfg.string(), "--out", (dir / "s2").string(),
       "--key", "protocol.tau", "--values", "0.1", "--run", "dance"});
  CHECK(bogus.code == 2);

  const CliResult bad_point = run_cli(
      {"sweep", "--config", cfg.string(), "--out", (dir / "s3").string(),
       "--key", "protocol.tau", "--values", "0.1,-1", "--run", "zeno"});
  CHECK(bad_point.code == 2);
  CHECK(bad_point.err.find("sweep point 1") != std::string::npos);
}

TEST_CASE("plan output matches the library planner") {
  TempDir dir;
  json cfg = json::parse(R"({
    "plan": {"gamma": 0.5, "length": 4.0, "v_f": 1.0, "t_q": 10.0,
             "devices": 4},
    "device": {"theta": 0.2, "alpha_p": [2.0, 0.0], "eta": 0.9,
               "eps": 0.05, "delta": 0.1}
  })");
  const fs::path path = write_config(dir, cfg);
  const fs::path out = dir / "plan";

  const CliResult result = run_cli(
      {"plan", "--config", path.string(), "--out", out.string()});
  INFO(result.err);
  REQUIRE(result.code == 0);
  CHECK(result.out.find("devices=4") != std::string::npos);
  CHECK(fs::exists(out / "plan_scan.csv"));

  const QndDeviceModel device =
      make_device(0.2, complex(2.0, 0.0), 0.9, 0.05, 0.1);
  const LinkPlan expected = plan_link(4.0, 1.0, 0.5, 10.0, device, 4);
  const json doc = json::parse(read_file(out / "link_plan.json"));
  CHECK(doc["gamma"] == 0.5);
  CHECK(doc["plan"]["devices"] == 4);
  CHECK(doc["plan"]["survival"].get<double>() == expected.survival);
  CHECK(doc["plan"]["fidelity"].get<double>() == expected.fidelity);
}

TEST_CASE("memory output matches the library loop model") {
  TempDir dir;
  const json cfg = json::parse(R"({
    "plan": {"gamma": 0.1, "loop_time": 1.0, "round_trips": 10}
  })");
  const fs::path path = write_config(dir, cfg);
  const fs::path out = dir / "memory";

  const CliResult result = run_cli(
      {"memory", "--config", path.string(), "--out", out.string()});
  INFO(result.err);
  REQUIRE(result.code == 0);

  const json doc = json::parse(read_file(out / "memory_plan.json"));
  REQUIRE(doc["plan"]["survival"].size() == 10);
  CHECK(doc["plan"]["survival"].back().get<double>() ==
        Catch::Approx(std::pow(0.99, 10)).margin(1e-12));
  CHECK(doc["plan"]["fidelity"].back() == 1.0);

  const auto lines = lines_of(read_file(out / "memory.csv"));
  REQUIRE(lines.size() == 13);
  CHECK(lines[2] == "k,survival,fidelity");
  CHECK(lines[3] == "1,0.98999999999999999,1");
}

TEST_CASE("help is a success, not an error") {
  const CliResult help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(help.out.find("sweep") != std::string::npos);
  CHECK(help.err.empty());
}

TEST_CASE("worker thread count honors the environment") {
  const char* previous = std::getenv("ZENOLINE_THREADS");
  const std::string saved = previous ? previous : "";

  setenv("ZENOLINE_THREADS", "3", 1);
  CHECK(cli::worker_threads() == 3u);

  setenv("ZENOLINE_THREADS", "nope", 1);
  CHECK_THROWS_AS(cli::worker_threads(), config_error);
  setenv("ZENOLINE_THREADS", "0", 1);
  CHECK_THROWS_AS(cli::worker_threads(), config_error);

  TempDir dir;
  const fs::path cfg = write_config(dir, two_level_config());
  const CliResult surfaced = run_cli(
      {"zeno", "--config", cfg.string(), "--out", (dir / "t").string()});
  CHECK(surfaced.code == 2);
  CHECK(surfaced.err.find("ZENOLINE_THREADS") != std::string::npos);

  if (previous) {
    setenv("ZENOLINE_THREADS", saved.c_str(), 1);
  } else {
    unsetenv("ZENOLINE_THREADS");
  }
}
