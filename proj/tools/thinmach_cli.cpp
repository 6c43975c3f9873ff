#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thinmach/harness.hpp"
#include "thinmach/kernels.hpp"

using namespace thinmach;

namespace {

struct Common {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON run configuration");
  app->add_option("--out", c.out, "output directory (overrides output_dir)");
  app->add_option("--seed", c.seed, "ensemble seed")->each([&c](const std::string&) { c.seed_set = true; });
  app->add_option("--threads", c.threads, "worker threads for the sweep");
  app->allow_extras();
}

// Remaining arguments are generic overrides: --key value or --key=value, keys may be dotted.
RunConfig resolve(const Common& c, const std::vector<std::string>& extras) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0) throw Error(ErrorKind::config, "unexpected argument '" + a + "'");
    std::string key = a.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw Error(ErrorKind::config, "missing value for --" + key);
      value = extras[++i];
    }
    cfg = apply_override(cfg, key, value);
  }
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed_set) cfg.seed = c.seed;
  if (c.threads > 0) cfg.threads = c.threads;
  return cfg;
}

int report_sweep(const SweepResult& r, const RunConfig& cfg) {
  write_sweep(r, cfg, cfg.output_dir);
  int failed = 0;
  for (const auto& run : r.runs) {
    if (run.ok) {
      std::printf("eps=%-10g eta=%-8g steps=%-7ld wall=%.2fs\n", run.epsilon, run.eta, run.steps, run.wall_seconds);
    } else {
      std::printf("FAILED %s\n", run.error.c_str());
      ++failed;
    }
  }
  for (const auto& f : r.fits) {
    if (f.rate)
      std::printf("rate eta=%g tau=%g: %.4f (all points %.4f)\n", f.eta, f.tau, *f.rate, *f.rate_all);
    else
      std::printf("rate eta=%g tau=%g: %s\n", f.eta, f.tau, f.note.c_str());
  }
  std::printf("E_naive_B(T) strictly decreasing in eps: %s\n", r.monotone_decreasing ? "yes" : "no");
  std::printf("wrote %s/rows.csv and summary.json\n", cfg.output_dir.c_str());
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thinmach: low-Mach thin-layer Euler convergence study"};
  app.require_subcommand(1);
  Common common;
  auto* run_cmd = app.add_subcommand("run", "single (epsilon, eta) run using the first entries of the lists");
  auto* sweep_cmd = app.add_subcommand("sweep", "epsilon x eta sweep with rate fits");
  auto* bench_cmd = app.add_subcommand("acoustic-bench", "dispersive scaling of the acoustic system");
  auto* validate_cmd = app.add_subcommand("validate", "invariant suite on small grids");
  auto* config_cmd = app.add_subcommand("config", "print the resolved configuration as JSON");
  auto* kernels_cmd = app.add_subcommand("kernels", "print the detected and active flux kernels");
  for (auto* sub : {run_cmd, sweep_cmd, bench_cmd, validate_cmd, config_cmd}) add_common(sub, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (kernels_cmd->parsed()) {
      std::printf("detected %s, active %s\n", kernels::name(kernels::detect()), kernels::name(kernels::active()));
      return 0;
    }
    CLI::App* sub = app.get_subcommands().front();
    RunConfig cfg = resolve(common, sub->remaining());

    if (sub == config_cmd) {
      std::printf("%s\n", to_json(cfg).dump(2).c_str());
      return 0;
    }
    if (sub == run_cmd) {
      cfg.epsilon_list.resize(1);
      cfg.eta_list.resize(1);
      return report_sweep(sweep(cfg), cfg);
    }
    if (sub == sweep_cmd) return report_sweep(sweep(cfg), cfg);
    if (sub == bench_cmd) {
      const auto r = acoustic_bench(cfg);
      write_acoustic_bench(r, cfg.output_dir);
      std::printf("%-10s %-14s %-12s %s\n", "epsilon", "value", "normalized", "undersampled");
      for (const auto& row : r.rows)
        std::printf("%-10g %-14.6e %-12.6f %s\n", row.epsilon, row.value, row.normalized, row.undersampled ? "yes" : "no");
      std::printf("C = %.6e, bounded %s, monotone within 20%% %s\n", r.C, r.bounded ? "yes" : "no",
                  r.monotone ? "yes" : "no");
      return 0;
    }
    const auto rep = validate(cfg);
    write_validation(rep, cfg.output_dir);
    for (const auto& c : rep.checks) std::printf("[%s] %-22s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    std::printf("%s\n", rep.passed() ? "validation passed" : "validation FAILED");
    return rep.passed() ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
    return 2;
  }
}
