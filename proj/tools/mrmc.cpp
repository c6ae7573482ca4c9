// Experiment harness CLI: single runs, Monte Carlo sweeps, verification suite.

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "mrmc/experiment.hpp"
#include "mrmc/oracles.hpp"

namespace {

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--grid", "empty grid");
  return out;
}

std::vector<mrmc::DesignKind> parse_designs(const std::string& s) {
  std::vector<mrmc::DesignKind> out{mrmc::DesignKind::co_design};
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(mrmc::design_kind_from_string(tok));
  }
  return out;
}

int cmd_run(const std::string& config_path, uint64_t seed, const std::string& out_path,
            const std::vector<std::string>& overrides) {
  mrmc::SystemConfig cfg =
      config_path.empty() ? mrmc::default_config() : mrmc::load_config_file(config_path);
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value");
    mrmc::apply_override(cfg, ov.substr(0, eq), ov.substr(eq + 1));
  }
  mrmc::ExperimentSpec spec;
  spec.cfg = cfg;
  spec.seed = seed;
  auto rows = mrmc::run_sweep(spec);
  if (!out_path.empty()) mrmc::write_outputs(spec, rows, out_path);
  const auto& r = rows.front();
  std::printf("design=%s I_CWSM=%.6f I_FD=%.6f min_rate_slack=%.6f iters=%d seconds=%.2f%s\n",
              r.design.c_str(), r.I_cwsm, r.I_fd, r.min_rate_slack, r.iterations, r.seconds,
              r.failed ? " [FAILED]" : "");
  return r.failed ? 1 : 0;
}

int cmd_sweep(const std::string& config_path, const std::string& var, const std::string& grid,
              int trials, const std::string& baselines, uint64_t seed,
              const std::string& out_path) {
  mrmc::ExperimentSpec spec;
  spec.cfg = config_path.empty() ? mrmc::default_config() : mrmc::load_config_file(config_path);
  spec.sweep_var = var;
  spec.grid = parse_grid(grid);
  spec.trials = trials;
  spec.designs = parse_designs(baselines);
  spec.seed = seed;
  auto rows = mrmc::run_sweep(spec);
  mrmc::write_outputs(spec, rows, out_path);

  // per-point summary: mean +/- standard error of I_CWSM for each design
  for (double v : spec.grid) {
    for (auto kind : spec.designs) {
      std::string name = mrmc::to_string(kind);
      double s = 0.0, s2 = 0.0;
      int n = 0;
      for (const auto& r : rows)
        if (r.value == v && r.design == name && !r.failed) {
          s += r.I_cwsm;
          s2 += r.I_cwsm * r.I_cwsm;
          ++n;
        }
      if (n == 0) {
        std::printf("%s=%g %-18s all trials failed\n", var.c_str(), v, name.c_str());
        continue;
      }
      double mean = s / n;
      double se = n > 1 ? std::sqrt(std::max(0.0, s2 / n - mean * mean) / (n - 1)) : 0.0;
      std::printf("%s=%g %-18s I_CWSM = %.4f +/- %.4f  (n=%d)\n", var.c_str(), v, name.c_str(),
                  mean, se, n);
    }
  }
  std::printf("wrote %s (+ .meta.json)\n", out_path.c_str());
  return 0;
}

int cmd_verify(uint64_t seed) {
  auto reports = mrmc::run_all_oracles(seed);
  bool all = true;
  for (const auto& r : reports) {
    std::printf("[%s] %-24s %-28s err=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.instance.c_str(), r.max_rel_err, r.tol);
    all &= r.pass;
  }
  std::printf("%s (%zu checks)\n", all ? "VERIFY OK" : "VERIFY FAILED", reports.size());
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint radar-code / precoder / receive-filter design harness"};
  app.require_subcommand(1);

  std::string config_path, out_path, var = "SNR_r", grid = "0", baselines;
  std::vector<std::string> overrides;
  uint64_t seed = 1;
  int trials = 1;

  auto* run = app.add_subcommand("run", "single optimization run at the configured operating point");
  run->add_option("--config", config_path, "config file (flat key=value)");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out_path, "CSV output path (metadata JSON written alongside)");
  run->add_option("--set", overrides, "config override key=value (repeatable)");

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over one scenario variable");
  sweep->add_option("--config", config_path, "config file (flat key=value)");
  sweep->add_option("--sweep", var, "SNR_r | CNR | sigma2_SI | eta2_CSI")->required();
  sweep->add_option("--grid", grid, "comma-separated values (dB for SNR_r/CNR/sigma2_SI)")
      ->required();
  sweep->add_option("--trials", trials, "trials per grid point")->check(CLI::PositiveNumber);
  sweep->add_option("--baselines", baselines,
                    "comma-separated designs run alongside co-design: uniform-precoding, "
                    "random-precoding, random-radar-code, uncoded-radar");
  sweep->add_option("--seed", seed, "master seed");
  sweep->add_option("--out", out_path, "CSV output path")->required();

  auto* verify = app.add_subcommand("verify", "run the independent verification oracles");
  verify->add_option("--seed", seed, "oracle seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_path, overrides);
    if (sweep->parsed()) return cmd_sweep(config_path, var, grid, trials, baselines, seed, out_path);
    return cmd_verify(seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
