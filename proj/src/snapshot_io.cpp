#include "thinmach/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include "json.hpp"

namespace thinmach {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'T', 'H', 'N', 'M', 'S', 'N', 'P', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kComponents = 4;

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw Error(ErrorKind::io, "truncated snapshot header");
  return v;
}

std::filesystem::path sidecar(const std::filesystem::path& p) { return p.string() + ".json"; }

}  // namespace

void write_snapshot(const std::filesystem::path& path, const FluidState3D& state, const SnapshotMeta& meta) {
  const Grid3D& g = state.grid();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof kMagic);
  put(out, kVersion);
  put(out, kComponents);
  put(out, static_cast<std::uint64_t>(g.nx));
  put(out, static_cast<std::uint64_t>(g.ny));
  put(out, static_cast<std::uint64_t>(g.nz));
  auto block = [&](std::span<const double> v) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
  };
  block(state.rho.comp(0));
  for (int c = 0; c < 3; ++c) block(state.mom.comp(c));
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());

  nlohmann::ordered_json j;
  j["time"] = meta.time;
  j["epsilon"] = meta.epsilon;
  j["delta"] = meta.delta;
  j["law"] = {{"name", meta.law_name}, {"gamma", meta.gamma}, {"coefficient", meta.law_coefficient},
              {"rho_tilde", meta.rho_tilde}};
  j["scheme"] = meta.scheme;
  j["scheme_version"] = meta.scheme_version;
  j["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"nz", g.nz}, {"L", g.L}, {"delta", g.delta}};
  std::ofstream side(sidecar(path), std::ios::trunc);
  side << j.dump(2) << '\n';
  if (!side) throw Error(ErrorKind::io, "failed writing " + sidecar(path).string());
}

LoadedSnapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error(ErrorKind::io, "bad snapshot magic");
  if (get<std::uint32_t>(in) != kVersion) throw Error(ErrorKind::io, "unsupported snapshot version");
  if (get<std::uint32_t>(in) != kComponents) throw Error(ErrorKind::io, "unexpected component count");
  const auto nx = get<std::uint64_t>(in), ny = get<std::uint64_t>(in), nz = get<std::uint64_t>(in);

  std::ifstream side(sidecar(path));
  if (!side) throw Error(ErrorKind::io, "missing sidecar " + sidecar(path).string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(side);
    const auto& jg = j.at("grid");
    if (jg.at("nx").get<std::uint64_t>() != nx || jg.at("ny").get<std::uint64_t>() != ny ||
        jg.at("nz").get<std::uint64_t>() != nz)
      throw Error(ErrorKind::io, "sidecar grid disagrees with the binary header");
    LoadedSnapshot out{FluidState3D(Grid3D(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz),
                                           jg.at("L").get<double>(), jg.at("delta").get<double>())),
                       SnapshotMeta{}};
    auto block = [&](std::span<double> v) {
      in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
      if (!in) throw Error(ErrorKind::io, "truncated snapshot data");
    };
    block(out.state.rho.comp(0));
    for (int c = 0; c < 3; ++c) block(out.state.mom.comp(c));
    auto& m = out.meta;
    m.time = j.at("time").get<double>();
    m.epsilon = j.at("epsilon").get<double>();
    m.delta = j.at("delta").get<double>();
    m.law_name = j.at("law").at("name").get<std::string>();
    m.gamma = j.at("law").at("gamma").get<double>();
    m.law_coefficient = j.at("law").at("coefficient").get<double>();
    m.rho_tilde = j.at("law").at("rho_tilde").get<double>();
    m.scheme = j.at("scheme").get<std::string>();
    m.scheme_version = j.at("scheme_version").get<int>();
    out.state.time = m.time;
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed sidecar: ") + e.what());
  }
}

}  // namespace thinmach
