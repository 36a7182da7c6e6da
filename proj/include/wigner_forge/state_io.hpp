#pragma once

// File formats.
//
// .wst state file: one line of JSON, a newline, then n_x * n_p little-endian
// float64 values in row-major [x][p] order. The header carries the magic
// "wigner-state", a format version, every grid field, beta and log_norm
// (written with round-trip precision), the byte order, element type and
// layout, and optionally the V and K sources that produced the state.
//
// CSV: marginals as "x,density" / "p,density"; heatmaps as a header line
// "x\p,<p_0>,<p_1>,..." followed by one row "x_j,w_j0,w_j1,..." per x.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wigner_forge/error.hpp"
#include "wigner_forge/grid.hpp"
#include "wigner_forge/hamlang.hpp"
#include "wigner_forge/observables.hpp"

namespace wigner_forge {

inline constexpr const char* state_magic = "wigner-state";
inline constexpr int state_version = 1;

struct StateFile {
  WignerState state;
  std::optional<std::string> v_source;
  std::optional<std::string> k_source;
};

inline nlohmann::ordered_json grid_to_json(const PhaseGrid& g) {
  nlohmann::ordered_json j;
  j["n_x"] = g.n_x();
  j["n_p"] = g.n_p();
  j["x_min"] = g.x_min();
  j["x_max"] = g.x_max();
  j["p_min"] = g.p_min();
  j["p_max"] = g.p_max();
  j["hbar"] = g.hbar();
  return j;
}

namespace detail {

inline void write_le_doubles(std::ostream& out, const double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      auto bits = std::bit_cast<std::uint64_t>(data[i]);
      char b[8];
      for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
      out.write(b, 8);
    }
  }
}

inline void read_le_doubles(std::istream& in, double* data, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      unsigned char b[8];
      in.read(reinterpret_cast<char*>(b), 8);
      std::uint64_t bits = 0;
      for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
      data[i] = std::bit_cast<double>(bits);
    }
  }
}

inline std::string shape(std::size_t a, std::size_t b) {
  return std::to_string(a) + "x" + std::to_string(b);
}

}  // namespace detail

inline void save_state(const WignerState& s, const std::filesystem::path& path,
                       const HamiltonianSpec* h = nullptr) {
  nlohmann::ordered_json header;
  header["magic"] = state_magic;
  header["version"] = state_version;
  header["grid"] = grid_to_json(s.grid);
  header["beta"] = s.beta;
  header["log_norm"] = s.log_norm;
  header["byte_order"] = "little";
  header["dtype"] = "float64";
  header["layout"] = "row-major [x][p]";
  if (h != nullptr) {
    header["V"] = h->v_source;
    header["K"] = h->k_source;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << header.dump() << '\n';
  detail::write_le_doubles(out, s.w.data(), s.w.size());
  if (!out) throw ConfigError("write failed: " + path.string());
}

inline StateFile load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": malformed header: " + e.what());
  }
  try {
    if (header.at("magic").get<std::string>() != state_magic)
      throw FormatError(path.string() + ": not a wigner state file");
    const int version = header.at("version").get<int>();
    if (version != state_version)
      throw FormatError(path.string() + ": unsupported version " + std::to_string(version) +
                        " (expected " + std::to_string(state_version) + ")");
    if (header.at("byte_order").get<std::string>() != "little" ||
        header.at("dtype").get<std::string>() != "float64")
      throw FormatError(path.string() + ": unsupported element encoding");
    const auto& g = header.at("grid");
    const PhaseGrid grid =
        make_grid(g.at("n_x").get<std::size_t>(), g.at("n_p").get<std::size_t>(),
                  g.at("x_min").get<double>(), g.at("x_max").get<double>(),
                  g.at("p_min").get<double>(), g.at("p_max").get<double>(),
                  g.at("hbar").get<double>());
    StateFile f{WignerState(grid), std::nullopt, std::nullopt};
    f.state.beta = header.at("beta").get<double>();
    f.state.log_norm = header.at("log_norm").get<double>();
    if (header.contains("V")) f.v_source = header["V"].get<std::string>();
    if (header.contains("K")) f.k_source = header["K"].get<std::string>();
    detail::read_le_doubles(in, f.state.w.data(), f.state.w.size());
    if (!in)
      throw FormatError(path.string() + ": truncated data (expected " +
                        detail::shape(grid.n_x(), grid.n_p()) + " float64 values)");
    in.peek();
    if (!in.eof()) throw FormatError(path.string() + ": trailing bytes after data");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad header field: " + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(path.string() + ": bad grid: " + e.what());
  }
}

inline WignerState load_state(const std::filesystem::path& path) {
  return load_state_file(path).state;
}

/// Loads and checks the grid against `expected`.
inline WignerState load_state(const std::filesystem::path& path, const PhaseGrid& expected) {
  WignerState s = load_state(path);
  if (s.grid.n_x() != expected.n_x() || s.grid.n_p() != expected.n_p())
    throw FormatError(path.string() + ": shape mismatch: expected " +
                      detail::shape(expected.n_x(), expected.n_p()) + ", found " +
                      detail::shape(s.grid.n_x(), s.grid.n_p()));
  if (!(s.grid == expected))
    throw FormatError(path.string() + ": grid bounds or hbar differ from the expected grid");
  return s;
}

inline std::string csv_number(double v) { return detail::format_double(v); }

inline void write_marginals_csv(const WignerState& s, const Marginals& m,
                                const std::filesystem::path& x_path,
                                const std::filesystem::path& p_path) {
  auto write = [](const std::filesystem::path& path, const char* axis,
                  const std::vector<double>& density, double origin, double step) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << axis << ",density\n";
    for (std::size_t i = 0; i < density.size(); ++i)
      out << csv_number(origin + static_cast<double>(i) * step) << ',' << csv_number(density[i])
          << '\n';
  };
  write(x_path, "x", m.x, s.grid.x_min(), s.grid.dx());
  write(p_path, "p", m.p, s.grid.p_min(), s.grid.dp());
}

inline void write_heatmap_csv(const WignerState& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  const PhaseGrid& g = s.grid;
  out << "x\\p";
  for (std::size_t k = 0; k < g.n_p(); ++k) out << ',' << csv_number(g.p(k));
  out << '\n';
  for (std::size_t j = 0; j < g.n_x(); ++j) {
    out << csv_number(g.x(j));
    for (double v : s.w.row(j)) out << ',' << csv_number(v);
    out << '\n';
  }
}

}  // namespace wigner_forge
