#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinwave/entanglement.hpp"
#include "spinwave/groundstate.hpp"
#include "spinwave/model.hpp"

namespace spinwave {

enum class OutputFormat { csv, json };
enum class EngineChoice { automatic, dense, fft, infinite };

/// Everything a subcommand needs. Parsed from `key = value` lines.
struct RunConfig {
  CouplingParams params{};
  int side = 80;
  std::string boundary = "periodic";  // periodic | open | infinite
  EngineChoice engine = EngineChoice::automatic;
  EntropyMode entropy_mode = EntropyMode::count_all;
  double degeneracy_tol = 1e-8;
  std::vector<int> blocks{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};

  // g axis: explicit values win over the linear grid.
  std::vector<double> g_values;
  double g_min = 1.0;
  std::optional<double> g_max;  // unset: g_c - 1e-4
  int g_points = 200;
  double derivative_step = 1e-4;
  std::vector<int> sizes{21, 31, 41};
  std::vector<double> g1_values{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  int max_displacement = 3;

  OutputFormat format = OutputFormat::csv;
  std::string output;  // empty: stdout
  int workers = 0;

  QuadratureSpec quad{};

  LatticeSpec lattice() const;
  Engine resolved_engine() const;
  std::vector<double> g_grid() const;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the key and line.
RunConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_digest(const RunConfig& config);

}  // namespace spinwave
