#include "thinmach/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "thinmach/acoustic.hpp"
#include "thinmach/incompressible.hpp"
#include "thinmach/relative_energy.hpp"
#include "thinmach/snapshot_io.hpp"

namespace thinmach {

using nlohmann::ordered_json;

const char* csv_header() {
  return "epsilon,delta,eta,tau,E_naive_B,E_naive_full,E_corrected,kinetic,pressure_ess,pressure_res,"
         "dissipation,mbar_norm,rho_ess_norm,rho_res_norm,wall_seconds";
}

std::string csv_line(const ConvergenceRow& r) {
  const double v[] = {r.epsilon,      r.delta,        r.eta,         r.tau,          r.E_naive_B,
                      r.E_naive_full, r.E_corrected,  r.kinetic,     r.pressure_ess, r.pressure_res,
                      r.dissipation,  r.mbar_norm,    r.rho_ess_norm, r.rho_res_norm, r.wall_seconds};
  std::string line;
  char buf[32];
  for (std::size_t i = 0; i < std::size(v); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) line += ',';
    line += buf;
  }
  return line;
}

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

// splitmix64 step: decorrelates member seeds derived from one user seed.
std::uint64_t member_seed(std::uint64_t seed, std::uint64_t member) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (member + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::string label(double epsilon, double eta) {
  std::ostringstream s;
  s << "eps=" << epsilon << ", eta=" << eta;
  return s.str();
}

}  // namespace

RunOutcome run_single(const RunConfig& config, double epsilon, double eta) {
  const auto start = clock_type::now();
  RunOutcome out;
  out.epsilon = epsilon;
  out.eta = eta;
  try {
    const PressureLaw law = config.law.make();
    const double delta = config.delta(epsilon);
    const Grid3D grid(config.nx, config.ny, config.nz, config.L, delta);
    const Grid2D plane = grid.horizontal();
    const DataRecipe base = config.recipe.make(config.L, epsilon, eta);

    SolverParams sp;
    sp.epsilon = epsilon;
    sp.cfl = config.cfl;
    sp.law = law;
    sp.end_time = config.end_time;
    sp.snapshot_interval = config.snapshot_interval;
    sp.scheme = config.scheme;

    std::vector<RunResult> members;
    for (int k = 0; k < config.ensemble_size; ++k) {
      const DataRecipe recipe =
          config.ensemble_size == 1 ? base : perturbed(base, member_seed(config.seed, k), config.ensemble_noise);
      members.push_back(run(build_initial_3d(recipe, grid, law), sp));
      out.steps += members.back().steps;
    }
    const auto& times = members.front().snapshots.times();

    IncompressibleSolver flow_solver(plane);
    IncompressibleState2D flow = limit_initial_2d(base, plane);
    const InitialFields2D f0 = build_initial_2d(base, plane, law);
    const AcousticState2D acoustic0 = make_acoustic_state(f0.s0, f0.psi0, epsilon, law);
    const HorizontalBox box = HorizontalBox::central(config.L, config.box_fraction);
    const CutoffPsi psi = CutoffPsi::around(law.rho_tilde());

    std::vector<double> e0, m0;
    for (const auto& m : members) {
      const Totals t = totals(m.snapshots[0], law, epsilon);
      e0.push_back(t.energy);
      m0.push_back(t.mass);
    }
    out.min_density = kInfinity;
    const double n_members = static_cast<double>(members.size());

    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      const double tau = times[ti];
      flow = flow_solver.advance(flow, tau, config.incompressible_cfl, config.incompressible_max_dt);
      out.under_resolved = out.under_resolved || flow.under_resolved;
      const AcousticState2D acoustic = propagate(acoustic0, tau);
      const ReferenceSample ref = make_reference_sample(acoustic, flow, flow_solver, law);
      const ReferencePair naive(ScalarField2D(plane, law.rho_tilde()), flow_solver.velocity(flow));

      EnsembleMeasure measure;
      ConvergenceRow row;
      for (std::size_t k = 0; k < members.size(); ++k) {
        const auto& series = members[k].snapshots;
        if (series.size() != times.size() || series.times()[ti] != tau)
          throw Error(ErrorKind::misaligned_times, "ensemble members produced different snapshot times");
        const FluidState3D& s = series[ti];
        measure.members.push_back(s);
        const Totals t = totals(s, law, epsilon);
        out.max_mass_drift = std::max(out.max_mass_drift, std::abs(t.mass - m0[k]) / m0[k]);
        if (ti > 0) {
          const double prev = total_energy(series[ti - 1], law, epsilon);
          out.max_energy_increase = std::max(out.max_energy_increase, (t.energy - prev) / std::max(e0[k], 1e-300));
        }
        row.dissipation += (e0[k] - t.energy) / delta;
        const UniformBoundReport b = uniform_bound_report(s, law, epsilon, delta, psi);
        row.mbar_norm += b.mbar_norm;
        row.rho_ess_norm += b.rho_ess_norm;
        row.rho_res_norm += b.rho_res_norm;
        for (double rho : s.rho.comp(0)) out.min_density = std::min(out.min_density, rho);
        if (config.write_snapshots && k == 0) {
          const std::filesystem::path dir = std::filesystem::path(config.output_dir) / "snapshots";
          std::filesystem::create_directories(dir);
          char name[96];
          std::snprintf(name, sizeof name, "eps%.6g_eta%.6g_t%03zu.bin", epsilon, eta, ti);
          SnapshotMeta meta{tau, epsilon, delta, law.name(), law.gamma(), law.coefficient(), law.rho_tilde(),
                            to_string(config.scheme), 1};
          write_snapshot(dir / name, s, meta);
        }
      }
      row.dissipation /= n_members;
      row.mbar_norm /= n_members;
      row.rho_ess_norm /= n_members;
      row.rho_res_norm /= n_members;

      const auto eb = relative_energy(measure, naive, law, epsilon, delta, box);
      const auto ef = relative_energy(measure, naive, law, epsilon, delta);
      const auto ec = relative_energy(measure, ref.pair, law, epsilon, delta);
      row.epsilon = epsilon;
      row.delta = delta;
      row.eta = eta;
      row.tau = tau;
      row.E_naive_B = eb.value;
      row.E_naive_full = ef.value;
      row.E_corrected = ec.value;
      row.kinetic = ef.kinetic_part;
      row.pressure_ess = ef.ess_pressure;
      row.pressure_res = ef.res_pressure;
      out.rows.push_back(row);
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = label(epsilon, eta) + ": " + e.what();
  }
  out.wall_seconds = seconds_since(start);
  if (config.record_wall_time)
    for (auto& r : out.rows) r.wall_seconds = out.wall_seconds;
  return out;
}

std::vector<ConvergenceRow> SweepResult::rows() const {
  std::vector<ConvergenceRow> all;
  for (const auto& r : runs) all.insert(all.end(), r.rows.begin(), r.rows.end());
  return all;
}

namespace {

const ConvergenceRow* row_at(const RunOutcome& run, double tau, double T) {
  for (const auto& r : run.rows)
    if (std::abs(r.tau - tau) <= 1e-12 * T) return &r;
  return nullptr;
}

std::vector<RateFit> fit_rates(const RunConfig& c, const std::vector<RunOutcome>& runs) {
  std::vector<RateFit> fits;
  const std::size_t n_eta = c.eta_list.size();
  const double T = c.end_time;
  for (std::size_t h = 0; h < n_eta; ++h)
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
      RateFit fit;
      fit.eta = c.eta_list[h];
      fit.tau = frac * T;
      std::vector<std::pair<double, double>> pts;  // (log2 eps, log2 E)
      bool zero = false, missing = false, unsampled = false;
      for (std::size_t e = 0; e < c.epsilon_list.size(); ++e) {
        const RunOutcome& run = runs[e * n_eta + h];
        if (!run.ok) {
          missing = true;
          continue;
        }
        const ConvergenceRow* row = row_at(run, fit.tau, T);
        if (!row) {
          unsampled = true;
          continue;
        }
        if (!(row->E_naive_B > 0.0) || !std::isfinite(row->E_naive_B)) {
          zero = true;
          continue;
        }
        pts.emplace_back(std::log2(row->epsilon), std::log2(row->E_naive_B));
      }
      if (unsampled) {
        fit.note = "tau not on the snapshot grid";
      } else if (zero) {
        fit.note = "zero energy; rate undefined";
      } else if (pts.size() < 2) {
        fit.note = missing ? "insufficient points (failed runs)" : "insufficient points";
      } else {
        const auto& a = pts[pts.size() - 2];
        const auto& b = pts.back();
        fit.rate = (a.second - b.second) / (a.first - b.first);
        double mx = 0.0, my = 0.0;
        for (const auto& p : pts) mx += p.first, my += p.second;
        mx /= pts.size();
        my /= pts.size();
        double sxy = 0.0, sxx = 0.0;
        for (const auto& p : pts) sxy += (p.first - mx) * (p.second - my), sxx += (p.first - mx) * (p.first - mx);
        fit.rate_all = sxy / sxx;
        if (missing) fit.note = "some runs failed";
      }
      fits.push_back(fit);
    }
  return fits;
}

}  // namespace

SweepResult sweep(const RunConfig& config) {
  config.validate();
  const PressureLaw law = config.law.make();
  std::vector<double> samples;
  for (int i = 0; i <= 200; ++i) samples.push_back(law.rho_tilde() * std::pow(10.0, -3.0 + 6.0 * i / 200.0));
  const HypothesisReport hyp = check_hypotheses(law, samples);
  if (!hyp.passed) throw Error(ErrorKind::hypothesis_violated, "pressure law rejected: " + hyp.failure);

  const auto start = clock_type::now();
  const std::size_t n_eta = config.eta_list.size();
  const std::size_t jobs = config.epsilon_list.size() * n_eta;
  SweepResult result;
  result.runs.resize(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t j = next++; j < jobs; j = next++)
      result.runs[j] = run_single(config, config.epsilon_list[j / n_eta], config.eta_list[j % n_eta]);
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), jobs);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  result.wall_seconds = seconds_since(start);
  result.fits = fit_rates(config, result.runs);

  const std::size_t h = static_cast<std::size_t>(
      std::min_element(config.eta_list.begin(), config.eta_list.end()) - config.eta_list.begin());
  result.monotone_decreasing = config.epsilon_list.size() >= 2;
  double prev = kInfinity;
  for (std::size_t e = 0; e < config.epsilon_list.size(); ++e) {
    const RunOutcome& run = result.runs[e * n_eta + h];
    const ConvergenceRow* row = run.ok ? row_at(run, config.end_time, config.end_time) : nullptr;
    if (!row || !(row->E_naive_B < prev)) {
      result.monotone_decreasing = false;
      break;
    }
    prev = row->E_naive_B;
  }
  return result;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

void write_sweep(const SweepResult& result, const RunConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string csv = std::string(csv_header()) + "\n";
  for (const auto& row : result.rows()) csv += csv_line(row) + "\n";
  write_text(dir / "rows.csv", csv);

  ordered_json s;
  s["config"] = to_json(config);
  ordered_json runs = ordered_json::array();
  ordered_json gaps = ordered_json::array();
  bool mass_ok = true, energy_ok = true, positive = true;
  for (const auto& r : result.runs) {
    ordered_json j;
    j["epsilon"] = r.epsilon;
    j["eta"] = r.eta;
    j["ok"] = r.ok;
    if (!r.ok) {
      j["error"] = r.error;
      gaps.push_back(label(r.epsilon, r.eta));
    }
    j["steps"] = r.steps;
    j["wall_seconds"] = r.wall_seconds;
    j["max_mass_drift"] = r.max_mass_drift;
    j["max_energy_increase"] = r.max_energy_increase;
    j["min_density"] = r.ok ? ordered_json(r.min_density) : ordered_json(nullptr);
    j["under_resolved"] = r.under_resolved;
    runs.push_back(j);
    if (r.ok) {
      mass_ok = mass_ok && r.max_mass_drift <= 1e-13;
      energy_ok = energy_ok && r.max_energy_increase <= 1e-12;
      positive = positive && r.min_density > 0.0;
    }
  }
  s["runs"] = runs;
  s["gaps"] = gaps;
  ordered_json fits = ordered_json::array();
  for (const auto& f : result.fits) {
    ordered_json j;
    j["eta"] = f.eta;
    j["tau"] = f.tau;
    j["rate"] = optional_json(f.rate);
    j["rate_all"] = optional_json(f.rate_all);
    if (!f.note.empty()) j["note"] = f.note;
    fits.push_back(j);
  }
  s["rate_fits"] = fits;
  s["monotone_decreasing"] = result.monotone_decreasing;
  s["invariants"] = {{"mass_conservation", mass_ok}, {"energy_nonincreasing", energy_ok}, {"positivity", positive}};
  s["wall_seconds"] = result.wall_seconds;
  write_text(dir / "summary.json", s.dump(2) + "\n");
}

AcousticBenchResult acoustic_bench(const RunConfig& config) {
  config.validate();
  const PressureLaw law = config.law.make();
  const auto& ac = config.acoustic;
  const Grid2D grid(ac.nx, ac.nx, config.L);
  const DataRecipe recipe = config.recipe.make(config.L, config.epsilon_list.front(), config.eta_list.front());
  const InitialFields2D f = build_initial_2d(recipe, grid, law);

  AcousticBenchResult res;
  for (double eps : config.epsilon_list) {
    const auto d = dispersive_norms(make_acoustic_state(f.s0, f.psi0, eps, law), config.end_time, ac.samples, ac.q,
                                    ac.p, ac.k);
    res.rows.push_back({eps, d.value, d.psi_norm, d.s_norm, 0.0, d.undersampled});
  }
  const double inv_q = 1.0 / ac.q;
  res.C = res.rows.front().value / std::pow(res.rows.front().epsilon, inv_q);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    auto& r = res.rows[i];
    r.normalized = res.C > 0.0 ? r.value / (res.C * std::pow(r.epsilon, inv_q)) : 0.0;
    if (r.normalized > 1.2) res.bounded = false;
    if (i > 0 && r.normalized > 1.2 * res.rows[i - 1].normalized) res.monotone = false;
  }
  return res;
}

void write_acoustic_bench(const AcousticBenchResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string csv = "epsilon,value,psi_norm,s_norm,normalized,undersampled\n";
  char buf[160];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.epsilon, r.value, r.psi_norm, r.s_norm,
                  r.normalized, r.undersampled ? 1 : 0);
    csv += buf;
  }
  write_text(dir / "acoustic.csv", csv);
  ordered_json s;
  s["C"] = result.C;
  s["bounded"] = result.bounded;
  s["monotone"] = result.monotone;
  write_text(dir / "acoustic_summary.json", s.dump(2) + "\n");
}

void write_validation(const ValidationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  ordered_json s;
  s["passed"] = report.passed();
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
  s["checks"] = checks;
  write_text(dir / "validation.json", s.dump(2) + "\n");
}

bool ValidationReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

}  // namespace thinmach
