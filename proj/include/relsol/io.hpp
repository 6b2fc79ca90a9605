#pragma once

// Field snapshots: <base>.bin holds little-endian float64 pairs (re, im),
// <base>.json holds {L, N, p, c, M, kind}. Infinite c is written as the
// string "inf".

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <limits>
#include <fstream>
#include <string>

#include <json.hpp>

#include "relsol/error.hpp"
#include "relsol/grid.hpp"

namespace relsol {

struct SnapshotMeta {
  double p = 0.0;
  double c = 0.0;
  double M = 0.0;
  std::string kind;  ///< e.g. "ground_state", "eigenvector", "evolution"
};

inline nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw UsageError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

namespace detail {

inline std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  else return __builtin_bswap64(v);
}

}  // namespace detail

inline void write_snapshot(const std::filesystem::path& base, const Field& u, const SnapshotMeta& meta) {
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  std::ofstream bin(base.string() + ".bin", std::ios::binary);
  if (!bin) throw Error("cannot write " + base.string() + ".bin");
  for (const auto& z : u.values()) {
    for (double part : {z.real(), z.imag()}) {
      const std::uint64_t w = detail::to_little(std::bit_cast<std::uint64_t>(part));
      bin.write(reinterpret_cast<const char*>(&w), sizeof w);
    }
  }
  nlohmann::json j = {{"L", u.grid().length()}, {"N", u.grid().size()}, {"p", meta.p},
                      {"c", number_or_inf(meta.c)}, {"M", meta.M}, {"kind", meta.kind}};
  std::ofstream side(base.string() + ".json");
  if (!side) throw Error("cannot write " + base.string() + ".json");
  side << j.dump(2) << '\n';
}

struct Snapshot {
  Field u;
  SnapshotMeta meta;
};

inline Snapshot read_snapshot(const std::filesystem::path& base) {
  std::ifstream side(base.string() + ".json");
  if (!side) throw UsageError("cannot open " + base.string() + ".json");
  const auto j = nlohmann::json::parse(side);
  const Grid g(j.at("L").get<double>(), j.at("N").get<std::size_t>());
  Snapshot s{Field(g), {j.at("p").get<double>(), number_from_json(j.at("c")), j.at("M").get<double>(),
                        j.at("kind").get<std::string>()}};
  std::ifstream bin(base.string() + ".bin", std::ios::binary);
  if (!bin) throw UsageError("cannot open " + base.string() + ".bin");
  for (std::size_t k = 0; k < g.size(); ++k) {
    double part[2];
    for (double& d : part) {
      std::uint64_t w = 0;
      if (!bin.read(reinterpret_cast<char*>(&w), sizeof w)) throw UsageError("snapshot binary is truncated");
      d = std::bit_cast<double>(detail::to_little(w));
    }
    s.u[k] = cplx(part[0], part[1]);
  }
  if (bin.peek() != std::char_traits<char>::eof()) throw UsageError("snapshot binary has trailing data");
  return s;
}

}  // namespace relsol
