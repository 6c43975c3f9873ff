#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "thinmach/harness.hpp"

namespace thinmach {

using nlohmann::json;
using nlohmann::ordered_json;

PressureLaw LawConfig::make() const {
  if (name == "gamma") {
    if (!(coefficient > 0.0)) throw Error(ErrorKind::config, "law.coefficient must be positive for a gamma law");
    if (!(gamma >= 1.0)) throw Error(ErrorKind::config, "law.gamma must be >= 1");
    return PressureLaw::gamma_law(gamma, coefficient, rho_tilde);
  }
  if (name == "linear") return PressureLaw::linear_law(coefficient, rho_tilde);
  throw Error(ErrorKind::config, "unknown law.name '" + name + "' (expected gamma or linear)");
}

DataRecipe RecipeConfig::make(double L, double epsilon, double eta) const {
  DataRecipe r;
  r.kind = kind;
  r.v0_stream.modes = v0_stream;
  if (shear_amplitude != 0.0)
    r.v0_stream.modes.push_back(shear_streamfunction(shear_amplitude, shear_mode, L).modes.front());
  r.s0.modes = s0;
  r.psi0.modes = psi0;
  r.epsilon = epsilon;
  r.eta = eta;
  r.support = SupportBox{support_fraction, taper_fraction};
  r.validate();
  return r;
}

double RunConfig::delta(double epsilon) const { return std::pow(epsilon, delta_beta); }

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::config, m); };
  if (!(L > 0.0)) fail("L must be positive");
  if (nx < 2 || ny < 2 || nz < 1) fail("grid needs nx, ny >= 2 and nz >= 1");
  if (epsilon_list.empty()) fail("epsilon_list is empty");
  for (std::size_t i = 0; i < epsilon_list.size(); ++i) {
    if (!(epsilon_list[i] > 0.0)) fail("epsilon_list entries must be positive");
    if (i > 0 && !(epsilon_list[i] < epsilon_list[i - 1])) fail("epsilon_list must be strictly decreasing");
  }
  if (eta_list.empty()) fail("eta_list is empty");
  for (double e : eta_list)
    if (!(e > 0.0)) fail("eta_list entries must be positive");
  if (!(delta_beta > 0.0)) fail("delta_beta must be positive");
  if (!(end_time > 0.0)) fail("end_time must be positive");
  if (!(snapshot_interval > 0.0)) fail("snapshot_interval must be positive");
  if (!(cfl > 0.0 && cfl < 1.0)) {
    std::ostringstream m;
    m << "CFL violation: cfl = " << cfl << " must lie in (0, 1)";
    fail(m.str());
  }
  if (!(box_fraction > 0.0 && box_fraction <= 1.0)) fail("box_fraction must lie in (0, 1]");
  if (ensemble_size < 1) fail("ensemble_size must be >= 1");
  if (!(ensemble_noise >= 0.0)) fail("ensemble_noise must be >= 0");
  if (threads < 1) fail("threads must be >= 1");
  if (!(incompressible_cfl > 0.0) || !(incompressible_max_dt > 0.0))
    fail("incompressible_cfl and incompressible_max_dt must be positive");
  if (!(acoustic.q > 0.0) || !(acoustic.p >= 1.0) || acoustic.k < 0 || acoustic.samples < 2 || acoustic.nx < 2)
    fail("acoustic settings out of range");
  const PressureLaw law = this->law.make();
  const double a2 = law.a2();
  if (a2 > 0.0) {
    const double need = 2.0 * std::sqrt(a2) * end_time / epsilon_list.back();
    if (!(L > need)) {
      std::ostringstream m;
      m << "wrap-around guard: L = " << L << " must exceed 2 a T / min(eps) = " << need;
      fail(m.str());
    }
  }
  (void)recipe.make(L, epsilon_list.front(), eta_list.front());
}

namespace {

ordered_json modes_json(const std::vector<Mode>& modes) {
  ordered_json a = ordered_json::array();
  for (const auto& m : modes)
    a.push_back({{"n1", m.n1}, {"n2", m.n2}, {"amplitude", m.amplitude}, {"phase", m.phase}});
  return a;
}

/// Strict object reader: every key must be consumed.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error(ErrorKind::config, where() + " must be an object");
  }

  template <class F>
  void field(const char* key, F&& assign) {
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    seen_.insert(key);
    try {
      assign(*it, path_ + key);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::config, path_ + key + ": " + e.what());
    }
  }

  void number(const char* key, double& v) {
    field(key, [&](const json& x, const std::string& p) {
      if (!x.is_number()) throw Error(ErrorKind::config, p + " must be a number");
      v = x.get<double>();
    });
  }
  void integer(const char* key, int& v) {
    field(key, [&](const json& x, const std::string& p) {
      if (!x.is_number_integer()) throw Error(ErrorKind::config, p + " must be an integer");
      v = x.get<int>();
    });
  }
  void unsigned64(const char* key, std::uint64_t& v) {
    field(key, [&](const json& x, const std::string& p) {
      if (!x.is_number_unsigned()) throw Error(ErrorKind::config, p + " must be a nonnegative integer");
      v = x.get<std::uint64_t>();
    });
  }
  void boolean(const char* key, bool& v) {
    field(key, [&](const json& x, const std::string& p) {
      if (!x.is_boolean()) throw Error(ErrorKind::config, p + " must be true or false");
      v = x.get<bool>();
    });
  }
  void string(const char* key, std::string& v) {
    field(key, [&](const json& x, const std::string& p) {
      if (!x.is_string()) throw Error(ErrorKind::config, p + " must be a string");
      v = x.get<std::string>();
    });
  }
  void numbers(const char* key, std::vector<double>& v) {
    field(key, [&](const json& x, const std::string& p) {
      if (!x.is_array()) throw Error(ErrorKind::config, p + " must be an array of numbers");
      v.clear();
      for (const auto& e : x) {
        if (!e.is_number()) throw Error(ErrorKind::config, p + " must be an array of numbers");
        v.push_back(e.get<double>());
      }
    });
  }
  void modes(const char* key, std::vector<Mode>& v) {
    field(key, [&](const json& x, const std::string& p) {
      if (!x.is_array()) throw Error(ErrorKind::config, p + " must be an array of modes");
      v.clear();
      for (std::size_t i = 0; i < x.size(); ++i) {
        Reader r(x[i], p + "[" + std::to_string(i) + "].");
        Mode m;
        r.integer("n1", m.n1);
        r.integer("n2", m.n2);
        r.number("amplitude", m.amplitude);
        r.number("phase", m.phase);
        r.finish();
        v.push_back(m);
      }
    });
  }
  template <class F>
  void object(const char* key, F&& read) {
    field(key, [&](const json& x, const std::string& p) {
      Reader r(x, p + ".");
      read(r);
      r.finish();
    });
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw Error(ErrorKind::config, "unknown key '" + path_ + item.key() + "'");
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_.substr(0, path_.size() - 1); }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["L"] = c.L;
  j["nx"] = c.nx;
  j["ny"] = c.ny;
  j["nz"] = c.nz;
  j["epsilon_list"] = c.epsilon_list;
  j["delta_beta"] = c.delta_beta;
  j["eta_list"] = c.eta_list;
  j["end_time"] = c.end_time;
  j["snapshot_interval"] = c.snapshot_interval;
  j["cfl"] = c.cfl;
  j["scheme"] = to_string(c.scheme);
  j["law"] = {{"name", c.law.name}, {"gamma", c.law.gamma}, {"coefficient", c.law.coefficient},
              {"rho_tilde", c.law.rho_tilde}};
  ordered_json r;
  r["kind"] = to_string(c.recipe.kind);
  r["shear_amplitude"] = c.recipe.shear_amplitude;
  r["shear_mode"] = c.recipe.shear_mode;
  r["v0_stream"] = modes_json(c.recipe.v0_stream);
  r["s0"] = modes_json(c.recipe.s0);
  r["psi0"] = modes_json(c.recipe.psi0);
  r["support_fraction"] = c.recipe.support_fraction;
  r["taper_fraction"] = c.recipe.taper_fraction;
  j["recipe"] = r;
  j["box_fraction"] = c.box_fraction;
  j["ensemble_size"] = c.ensemble_size;
  j["ensemble_noise"] = c.ensemble_noise;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir;
  j["record_wall_time"] = c.record_wall_time;
  j["write_snapshots"] = c.write_snapshots;
  j["incompressible_cfl"] = c.incompressible_cfl;
  j["incompressible_max_dt"] = c.incompressible_max_dt;
  j["acoustic"] = {{"q", c.acoustic.q}, {"p", c.acoustic.p}, {"k", c.acoustic.k},
                   {"samples", c.acoustic.samples}, {"nx", c.acoustic.nx}};
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Reader r(j, "");
  r.number("L", c.L);
  r.integer("nx", c.nx);
  r.integer("ny", c.ny);
  r.integer("nz", c.nz);
  r.numbers("epsilon_list", c.epsilon_list);
  r.number("delta_beta", c.delta_beta);
  r.numbers("eta_list", c.eta_list);
  r.number("end_time", c.end_time);
  r.number("snapshot_interval", c.snapshot_interval);
  r.number("cfl", c.cfl);
  r.field("scheme", [&](const json& x, const std::string& p) {
    if (!x.is_string()) throw Error(ErrorKind::config, p + " must be a string");
    try {
      c.scheme = flux_scheme_from_string(x.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorKind::config, e.what());
    }
  });
  r.object("law", [&](Reader& l) {
    l.string("name", c.law.name);
    l.number("gamma", c.law.gamma);
    l.number("coefficient", c.law.coefficient);
    l.number("rho_tilde", c.law.rho_tilde);
  });
  r.object("recipe", [&](Reader& s) {
    s.field("kind", [&](const json& x, const std::string& p) {
      if (!x.is_string()) throw Error(ErrorKind::config, p + " must be a string");
      c.recipe.kind = data_kind_from_string(x.get<std::string>());
    });
    s.number("shear_amplitude", c.recipe.shear_amplitude);
    s.integer("shear_mode", c.recipe.shear_mode);
    s.modes("v0_stream", c.recipe.v0_stream);
    s.modes("s0", c.recipe.s0);
    s.modes("psi0", c.recipe.psi0);
    s.number("support_fraction", c.recipe.support_fraction);
    s.number("taper_fraction", c.recipe.taper_fraction);
  });
  r.number("box_fraction", c.box_fraction);
  r.integer("ensemble_size", c.ensemble_size);
  r.number("ensemble_noise", c.ensemble_noise);
  r.unsigned64("seed", c.seed);
  r.integer("threads", c.threads);
  r.string("output_dir", c.output_dir);
  r.boolean("record_wall_time", c.record_wall_time);
  r.boolean("write_snapshots", c.write_snapshots);
  r.number("incompressible_cfl", c.incompressible_cfl);
  r.number("incompressible_max_dt", c.incompressible_max_dt);
  r.object("acoustic", [&](Reader& a) {
    a.number("q", c.acoustic.q);
    a.number("p", c.acoustic.p);
    a.integer("k", c.acoustic.k);
    a.integer("samples", c.acoustic.samples);
    a.integer("nx", c.acoustic.nx);
  });
  r.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::config, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

RunConfig apply_override(const RunConfig& c, const std::string& key, const std::string& value) {
  json j = to_json(c);
  json* node = &j;
  std::stringstream ss(key);
  std::string part;
  std::string seen;
  while (std::getline(ss, part, '.')) {
    seen += seen.empty() ? part : "." + part;
    if (node->is_object()) {
      auto it = node->find(part);
      if (it == node->end()) throw Error(ErrorKind::config, "unknown key '" + seen + "'");
      node = &*it;
    } else if (node->is_array() && !part.empty() && part.find_first_not_of("0123456789") == std::string::npos) {
      const std::size_t idx = std::stoul(part);
      if (idx >= node->size()) throw Error(ErrorKind::config, "index out of range in '" + seen + "'");
      node = &(*node)[idx];
    } else {
      throw Error(ErrorKind::config, "unknown key '" + seen + "'");
    }
  }
  json parsed = json::parse(value, nullptr, false);
  *node = parsed.is_discarded() ? json(value) : parsed;
  return config_from_json(j);
}

}  // namespace thinmach
