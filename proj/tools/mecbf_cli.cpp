// mecbf: run, sweep, convergence and oracle-check subcommands.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mecbf/config.hpp"
#include "mecbf/harness.hpp"
#include "mecbf/records.hpp"
#include "mecbf/verify.hpp"

namespace fs = std::filesystem;
using namespace mecbf;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool desk = false;
  std::string algo;
  std::string format = "csv";
  std::optional<int> trials, frames, slots;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "scenario file (YAML key: value)");
  app->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "master seed");
  app->add_flag("--desk-scale", c.desk, "N=16, N_a=N_b=4, N_rf=4, N_rfa=N_rfb=2, 20 trials");
  app->add_option("--algo", c.algo, "pcccp | heuristic | binary | ideal-csi");
  app->add_option("--format", c.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app->add_option("--trials", c.trials, "override sim.trials");
  app->add_option("--frames", c.frames, "override sim.frames");
  app->add_option("--slots", c.slots, "override sim.slots");
}

ScenarioConfig load(const Common& c) {
  ScenarioConfig cfg = c.config_path.empty() ? ScenarioConfig{} : parse_config_file(c.config_path);
  if (c.desk) cfg = desk_scale(cfg);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.algo.empty()) cfg.algorithm = parse_algorithm(c.algo);
  if (c.trials) cfg.trials = *c.trials;
  if (c.frames) cfg.frames = *c.frames;
  if (c.slots) cfg.slots = *c.slots;
  cfg.validate();
  return cfg;
}

class Outputs {
 public:
  Outputs(const Common& c, const ScenarioConfig& cfg, const std::string& command)
      : dir_(c.out_dir), manifest_(make_manifest(cfg, command)) {
    fs::create_directories(dir_);
    write("config.yaml", serialize_config(cfg));
  }

  void write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    manifest_.outputs.push_back(p.string());
  }

  ~Outputs() {
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << manifest_json(manifest_);
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

std::string ext(OutputFormat f) { return f == OutputFormat::kCsv ? ".csv" : ".json"; }

int failure_status(int failed, int total, double threshold) {
  const double rate = total > 0 ? static_cast<double>(failed) / total : 0.0;
  std::fprintf(stderr, "solver failures: %d of %d slots (%.2f%%)\n", failed, total, 100.0 * rate);
  if (rate > threshold) {
    std::fprintf(stderr, "failure rate above sim.max_failure_rate = %g\n", threshold);
    return 2;
  }
  return 0;
}

int cmd_run(const Common& c, const std::string& line) {
  const ScenarioConfig cfg = load(c);
  const OutputFormat fmt = parse_format(c.format);
  Outputs out(c, cfg, line);
  int failed = 0, total = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    const SuperframeResult r = run_trial(cfg, t);
    for (const SlotRecord& s : r.slots) failed += s.failed ? 1 : 0;
    total += static_cast<int>(r.slots.size());
    out.write("slots_trial" + std::to_string(t) + ext(fmt), emit_results(r.slots, fmt));
  }
  return failure_status(failed, total, cfg.max_failure_rate);
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) v.push_back(std::stod(item));
  }
  if (v.empty()) throw std::invalid_argument("--values: expected a comma-separated list");
  return v;
}

int cmd_sweep(const Common& c, const std::string& axis_name, const std::string& values,
              const std::string& algos, const std::string& line) {
  const ScenarioConfig cfg = load(c);
  const SweepAxis axis = parse_axis(axis_name);
  std::vector<Algorithm> algorithms;
  if (algos.empty()) {
    algorithms.push_back(cfg.algorithm);
  } else {
    std::stringstream ss(algos);
    std::string a;
    while (std::getline(ss, a, ',')) algorithms.push_back(parse_algorithm(a));
  }
  Outputs out(c, cfg, line);
  const std::vector<SweepRow> rows = run_sweep(cfg, axis, parse_values(values), algorithms);
  const bool csv = parse_format(c.format) == OutputFormat::kCsv;
  out.write("sweep_" + axis_name + (csv ? ".csv" : ".json"), csv ? sweep_csv(rows) : sweep_json(rows));
  int failed = 0, total = 0;
  for (const SweepRow& r : rows) {
    failed += r.failed_slots;
    total += r.slots;
  }
  return failure_status(failed, total, cfg.max_failure_rate);
}

int cmd_convergence(const Common& c, int mc_samples, const std::string& line) {
  const ScenarioConfig cfg = load(c);
  Outputs out(c, cfg, line);
  const ConvergenceResult r = convergence_run(cfg, mc_samples);
  std::string ssca = "frame,mc_weighted_capacity,sample_objective\n";
  for (std::size_t f = 0; f < r.learning.capacity.size(); ++f) {
    ssca += std::to_string(f) + ',' + format_number(r.learning.capacity[f]) + ',' +
            (f == 0 ? std::string() : format_number(r.learning.sample_objective[f - 1])) + '\n';
  }
  out.write("convergence_ssca.csv", ssca);
  std::string pc = "outer,inner,block,objective,penalty,varrho\n";
  for (const PcccpTraceRecord& t : r.uplink.trace) {
    pc += std::to_string(t.outer) + ',' + std::to_string(t.inner) + ',' + std::to_string(t.block) +
          ',' + format_number(t.objective) + ',' + format_number(t.penalty) + ',' +
          format_number(t.varrho) + '\n';
  }
  out.write("convergence_pcccp.csv", pc);
  std::fprintf(stderr, "pcccp: %s after %d outer iterations, penalty %.3g\n",
               r.uplink.converged ? "converged" : "not converged", r.uplink.outer_iterations,
               r.uplink.penalty);
  return r.uplink.converged ? 0 : 2;
}

int cmd_oracle_check(bool full) {
  std::vector<Check> checks = extra_oracle_checks();
  for (Check& c : acceptance_checks()) checks.push_back(std::move(c));
  int failed = 0;
  for (const Check& c : checks) {
    if (c.heavy && !full) {
      std::printf("SKIP [%s] %s (use --full)\n", c.id.c_str(), c.title.c_str());
      continue;
    }
    const CheckResult r = run_check(c);
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d failed\n", failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::string line;
  for (int i = 0; i < argc; ++i) line += (i ? " " : "") + std::string(argv[i]);

  CLI::App app{"Two-timescale hybrid beamforming and offloading simulator"};
  app.require_subcommand(1);
  Common common;

  CLI::App* run = app.add_subcommand("run", "simulate one scenario, one slot file per trial");
  add_common(run, common);

  CLI::App* sweep = app.add_subcommand("sweep", "mean latency over one parameter axis");
  add_common(sweep, common);
  std::string axis, values, algos;
  sweep->add_option("--axis", axis, "p_ua | d_y | eta | psi | tau_csi | phase_bits")->required();
  sweep->add_option("--values", values, "comma-separated axis values")->required();
  sweep->add_option("--algos", algos, "comma-separated algorithms (default --algo)");

  CLI::App* conv = app.add_subcommand("convergence", "analog learning and penalty traces");
  add_common(conv, common);
  int mc_samples = 50;
  conv->add_option("--mc-samples", mc_samples, "evaluation channels per frame")->capture_default_str();

  CLI::App* oracle = app.add_subcommand("oracle-check", "oracle and acceptance table");
  bool full = false;
  oracle->add_flag("--full", full, "include the checks that take minutes");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(common, line);
    if (*sweep) return cmd_sweep(common, axis, values, algos, line);
    if (*conv) return cmd_convergence(common, mc_samples, line);
    if (*oracle) return cmd_oracle_check(full);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error:\n");
    for (const std::string& p : e.problems()) std::fprintf(stderr, "  %s\n", p.c_str());
    return 64;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
