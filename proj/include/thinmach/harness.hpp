#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thinmach/compressible.hpp"
#include "thinmach/initial_data.hpp"
#include "thinmach/pressure.hpp"
#include "json.hpp"

namespace thinmach {

struct LawConfig {
  std::string name = "gamma";  ///< "gamma" (p = coefficient rho^gamma) or "linear" (p = coefficient rho)
  double gamma = 2.0;
  double coefficient = 1.0;
  double rho_tilde = 1.0;

  PressureLaw make() const;
};

struct RecipeConfig {
  DataKind kind = DataKind::well_prepared;
  /// Convenience shear v0 = (amplitude sin(2 pi mode x2 / L), 0), added to v0_stream.
  double shear_amplitude = 1.0;
  int shear_mode = 4;
  std::vector<Mode> v0_stream;
  std::vector<Mode> s0;
  std::vector<Mode> psi0;
  double support_fraction = 0.5;
  double taper_fraction = 0.25;

  DataRecipe make(double L, double epsilon, double eta) const;
};

struct AcousticBenchConfig {
  double q = 8.0;
  double p = 4.0;
  int k = 0;
  int samples = 512;
  int nx = 64;  ///< horizontal resolution of the spectral study (L is shared with the sweep)
};

struct RunConfig {
  double L = 8.0 * 3.14159265358979323846;
  int nx = 64;
  int ny = 64;
  int nz = 4;
  std::vector<double> epsilon_list{0.25, 0.125, 0.0625};
  double delta_beta = 1.0;  ///< delta = epsilon^beta
  std::vector<double> eta_list{0.25};
  double end_time = 0.5;
  double snapshot_interval = 0.0625;
  double cfl = 0.45;
  FluxScheme scheme = FluxScheme::low_mach;
  LawConfig law;
  RecipeConfig recipe;
  double box_fraction = 0.25;  ///< side of the compact set B relative to L
  int ensemble_size = 1;
  double ensemble_noise = 1e-2;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir = "out";
  bool record_wall_time = false;
  bool write_snapshots = false;
  double incompressible_cfl = 0.5;
  double incompressible_max_dt = 1e-2;
  AcousticBenchConfig acoustic;

  /// Throws ErrorKind::config naming the first violated invariant.
  void validate() const;
  double delta(double epsilon) const;
};

nlohmann::ordered_json to_json(const RunConfig& c);
/// Strict parse: unknown keys and wrong types raise ErrorKind::config. Missing keys keep defaults.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
/// Sets `key` (dotted path such as "recipe.kind" or "law.gamma") to `value`, parsed as JSON when it
/// parses and as a string otherwise. Unknown keys raise ErrorKind::config.
RunConfig apply_override(const RunConfig& c, const std::string& key, const std::string& value);

struct ConvergenceRow {
  double epsilon = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  double E_naive_B = 0.0;
  double E_naive_full = 0.0;
  double E_corrected = 0.0;
  double kinetic = 0.0;        ///< kinetic part of E_naive_full
  double pressure_ess = 0.0;   ///< essential pressure part of E_naive_full
  double pressure_res = 0.0;   ///< residual pressure part of E_naive_full
  double dissipation = 0.0;
  double mbar_norm = 0.0;
  double rho_ess_norm = 0.0;
  double rho_res_norm = 0.0;
  double wall_seconds = 0.0;
};

const char* csv_header();
std::string csv_line(const ConvergenceRow& row);

struct RunOutcome {
  double epsilon = 0.0;
  double eta = 0.0;
  std::vector<ConvergenceRow> rows;
  bool ok = true;
  std::string error;
  long steps = 0;
  double wall_seconds = 0.0;
  double max_mass_drift = 0.0;         ///< relative, over snapshots and members
  double max_energy_increase = 0.0;    ///< relative, between consecutive snapshots
  double min_density = 0.0;
  bool under_resolved = false;
};

/// One (epsilon, eta) member of the sweep. Solver errors are caught and reported in the outcome,
/// labelled with epsilon and eta.
RunOutcome run_single(const RunConfig& config, double epsilon, double eta);

struct RateFit {
  double eta = 0.0;
  double tau = 0.0;
  std::optional<double> rate;       ///< slope through the two smallest epsilon
  std::optional<double> rate_all;   ///< least-squares slope over every epsilon
  std::string note;
};

struct SweepResult {
  std::vector<RunOutcome> runs;  ///< ordered by (epsilon index, eta index)
  std::vector<RateFit> fits;
  bool monotone_decreasing = false;  ///< E_naive_B(T) strictly decreasing along epsilon_list at the smallest eta
  double wall_seconds = 0.0;
  std::vector<ConvergenceRow> rows() const;
};

/// Runs every (epsilon, eta) pair on config.threads workers; aggregation order is fixed.
SweepResult sweep(const RunConfig& config);
/// rows.csv and summary.json in `dir`.
void write_sweep(const SweepResult& result, const RunConfig& config, const std::filesystem::path& dir);

struct AcousticBenchRow {
  double epsilon = 0.0;
  double value = 0.0;
  double psi_norm = 0.0;
  double s_norm = 0.0;
  double normalized = 0.0;  ///< value / (C eps^(1/q)), C calibrated at the largest epsilon
  bool undersampled = false;
};

struct AcousticBenchResult {
  std::vector<AcousticBenchRow> rows;
  double C = 0.0;
  bool bounded = true;    ///< normalized <= 1.2 for every epsilon
  bool monotone = true;   ///< normalized(eps_{i+1}) <= 1.2 normalized(eps_i)
};

/// Dispersive scaling study over config.epsilon_list with the recipe's (s0, Psi0) at eta_list.front().
AcousticBenchResult acoustic_bench(const RunConfig& config);
void write_acoustic_bench(const AcousticBenchResult& result, const std::filesystem::path& dir);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;  ///< the measured quantity compared against its tolerance
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Invariant suite on small grids built from `config` (32^2 x 4 layer, 64^2 plane).
ValidationReport validate(const RunConfig& config);
void write_validation(const ValidationReport& report, const std::filesystem::path& dir);

}  // namespace thinmach
