#include "spinwave/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include "json.hpp"

#include "spinwave/errors.hpp"
#include "spinwave/oracle.hpp"
#include "spinwave/scan.hpp"
#include "spinwave/spectrum.hpp"

namespace spinwave {

namespace {

using Command = std::function<Table(const RunConfig&)>;

EntropyOptions entropy_options(const RunConfig& c) {
  return {c.entropy_mode, c.degeneracy_tol, c.quad};
}

Table phase_diagram(const RunConfig& c) {
  Table t{{"g1", "g2_critical", "branch", "kx", "ky", "g2_numeric"}, {}};
  for (double g1 : c.g1_values) {
    const auto p = critical_g2(c.params, g1);
    t.add({g1, p.g2_critical, std::string(to_string(p.branch)), p.kx, p.ky,
           p.g2_numeric.value_or(std::numeric_limits<double>::quiet_NaN())});
  }
  return t;
}

Table gap_scan(const RunConfig& c) {
  Table t{{"g", "gc_minus_g", "gap", "status"}, {}};
  const double gc = critical_g_equal(c.params);
  const auto lattice = c.lattice();
  for (double g : c.g_grid()) {
    double gap = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
    try {
      gap = energy_gap(c.params.with_equal_coupling(g), lattice);
    } catch (const std::exception& e) {
      status = e.what();
    }
    t.add({g, gc - g, gap, status});
  }
  return t;
}

Table covariance(const RunConfig& c) {
  Table t{{"dx", "dy", "qq", "pp"}, {}};
  const auto lattice = c.lattice();
  const auto state = solve_ground_state(c.params, lattice, c.resolved_engine(), c.max_displacement, c.quad);
  if (const auto* table = std::get_if<CorrelationTable>(&state)) {
    for (int dx = 0; dx <= std::min(c.max_displacement, table->extent_x()); ++dx) {
      for (int dy = 0; dy <= std::min(c.max_displacement, table->extent_y()); ++dy) {
        t.add({static_cast<long long>(dx), static_cast<long long>(dy), table->qq({dx, dy}), table->pp({dx, dy})});
      }
    }
    return t;
  }
  const auto& pair = std::get<CovariancePair>(state);
  const int m = lattice.side;
  const int origin = lattice.index(m / 2, m / 2);
  for (int dx = 0; dx <= c.max_displacement && m / 2 + dx < m; ++dx) {
    for (int dy = 0; dy <= c.max_displacement && m / 2 + dy < m; ++dy) {
      const int j = lattice.index(m / 2 + dx, m / 2 + dy);
      t.add({static_cast<long long>(dx), static_cast<long long>(dy), pair.Q(origin, j), pair.P(origin, j)});
    }
  }
  return t;
}

Table entropy_scan(const RunConfig& c) {
  Table t{{"L", "entropy_bits", "mode", "engine"}, {}};
  const Engine engine = c.resolved_engine();
  for (const auto& p : entropy_vs_L(c.params, c.lattice(), engine, c.blocks, entropy_options(c))) {
    t.add({static_cast<long long>(p.L), p.entropy, std::string(to_string(c.entropy_mode)), std::string(to_string(engine))});
  }
  return t;
}

Table two_site(const RunConfig& c) {
  Table t{{"g", "distance_class", "dx", "dy", "n", "c", "zeta", "eof", "separable", "sign_anomaly", "status"}, {}};
  const std::vector<std::pair<std::string, Displacement>> classes{
      {"nearest", {1, 0}}, {"diagonal", {1, 1}}, {"distance2", {2, 0}}};
  const auto lattice = c.lattice();
  const Engine engine = c.resolved_engine();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double g : c.g_grid()) {
    std::optional<GroundState> state;
    std::string failure;
    try {
      state = solve_ground_state(c.params.with_equal_coupling(g), lattice, engine, 2, c.quad);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    for (const auto& [name, r] : classes) {
      std::vector<Cell> row{g, name, static_cast<long long>(r.dx), static_cast<long long>(r.dy)};
      try {
        if (!state) throw std::runtime_error(failure);
        const auto p = pair_params(*state, r);
        row.insert(row.end(), {p.n, p.c, p.zeta, p.eof, static_cast<long long>(p.separable),
                               static_cast<long long>(p.sign_anomaly), std::string("ok")});
      } catch (const std::exception& e) {
        row.insert(row.end(), {nan, nan, nan, nan, 0LL, 0LL, std::string(e.what())});
      }
      t.add(std::move(row));
    }
  }
  return t;
}

void add_derivative_rows(Table& t, long long side, const std::vector<DerivativeRow>& rows) {
  for (const auto& r : rows) t.add({side, r.g, r.zeta1, r.d.raw, r.d.richardson, r.status});
}

Table derivative_table() { return {{"side", "g", "zeta1", "dzeta_dg", "dzeta_dg_richardson", "status"}, {}}; }

Table derivative_scan_cmd(const RunConfig& c) {
  Table t = derivative_table();
  const auto lattice = c.lattice();
  const auto grid = c.g_grid();
  add_derivative_rows(t, lattice.infinite ? 0 : lattice.side,
                      derivative_scan(c.params, lattice, c.resolved_engine(), grid, c.derivative_step, c.quad,
                                      c.workers));
  return t;
}

Table finite_size(const RunConfig& c) {
  Table t{{"side", "peak_abs_dzeta_dg", "argmax_g"}, {}};
  const auto grid = c.g_grid();
  for (const auto& p : finite_size_peak(c.params, c.sizes, grid, c.derivative_step, c.workers)) {
    t.add({static_cast<long long>(p.side), p.peak, p.argmax});
  }
  return t;
}

Table oracle_check(const RunConfig&) {
  Table t{{"check", "passed", "quantity", "value", "note"}, {}};
  for (const auto& check : run_oracle_battery()) {
    if (check.values.empty()) t.add({check.name, static_cast<long long>(check.passed), std::string(), 0.0, check.note});
    for (const auto& [key, value] : check.values) {
      t.add({check.name, static_cast<long long>(check.passed), key, value, check.note});
    }
  }
  return t;
}

Table reproduce_fig2(const RunConfig& c) {
  Table t{{"curve", "g", "engine", "side", "L", "entropy_bits", "status"}, {}};
  const double gc = critical_g_equal(c.params);
  const std::vector<std::pair<std::string, double>> curves{
      {"g=1.25", 1.25}, {"g=1.5", 1.5}, {"near_critical", gc * (1.0 - 1e-11)}};
  std::vector<double> gs;
  for (const auto& cv : curves) gs.push_back(cv.second);
  const std::vector<std::pair<LatticeSpec, Engine>> settings{
      {LatticeSpec::periodic(c.side), Engine::fft}, {LatticeSpec::infinite_lattice(), Engine::infinite}};
  for (const auto& [lattice, engine] : settings) {
    const auto rows = sweep_g({c.params, gs, lattice, engine, c.blocks, entropy_options(c), c.workers});
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < c.blocks.size(); ++k) {
        t.add({curves[i].first, rows[i].g, std::string(to_string(engine)),
               static_cast<long long>(lattice.infinite ? 0 : lattice.side), static_cast<long long>(c.blocks[k]),
               rows[i].entropies[k], rows[i].status});
      }
    }
  }
  return t;
}

Table reproduce_fig3(const RunConfig& c) {
  Table t = derivative_table();
  const auto grid = c.g_grid();
  add_derivative_rows(t, 0,
                      derivative_scan(c.params, LatticeSpec::infinite_lattice(), Engine::infinite, grid,
                                      c.derivative_step, c.quad, c.workers, true));
  for (int m : c.sizes) {
    add_derivative_rows(t, m,
                        derivative_scan(c.params, LatticeSpec::periodic(m), Engine::fft, grid, c.derivative_step,
                                        c.quad, c.workers));
  }
  return t;
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"phase-diagram", phase_diagram}, {"gap-scan", gap_scan},
      {"covariance", covariance},       {"entropy-scan", entropy_scan},
      {"two-site", two_site},           {"derivative-scan", derivative_scan_cmd},
      {"finite-size", finite_size},     {"oracle-check", oracle_check},
      {"reproduce-fig2", reproduce_fig2}, {"reproduce-fig3", reproduce_fig3},
  };
  return table;
}

void write_oracle_json(std::ostream& out, const RunConfig& config) {
  nlohmann::ordered_json doc;
  const auto checks = run_oracle_battery();
  doc["config_digest"] = config_digest(config);
  doc["passed"] = std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
  auto list = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["passed"] = c.passed;
    entry["note"] = c.note;
    entry["values"] = c.values;
    list.push_back(std::move(entry));
  }
  doc["checks"] = std::move(list);
  out << doc.dump(2) << "\n";
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : commands()) out.push_back(name);
    return out;
  }();
  return names;
}

Table run_table(const std::string& command, const RunConfig& config) {
  const auto it = commands().find(command);
  if (it == commands().end()) throw ConfigError("unknown subcommand '" + command + "'");
  config.validate();
  return it->second(config);
}

int dispatch(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.output.empty()) {
      file.open(config.output, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + config.output + "'");
      sink = &file;
    }
    if (command == "oracle-check") {
      config.validate();
      write_oracle_json(*sink, config);
    } else {
      write_table(*sink, run_table(command, config), command, config);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InstabilityError& e) {
    err << e.what() << "\n";
    return kExitInstability;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInstability;
  }
}

}  // namespace spinwave
