#include "spinwave/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "spinwave/errors.hpp"
#include "spinwave/spectrum.hpp"

namespace spinwave {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& key, int line, const std::string& what) {
  throw ConfigError(what + " for key '" + key + "' (line " + std::to_string(line) + ")");
}

double to_double(std::string_view v, const std::string& key, int line) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) fail(key, line, "expected a number, got '" + std::string(v) + "'");
  return out;
}

int to_int(std::string_view v, const std::string& key, int line) {
  int out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) fail(key, line, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

template <class T, class F>
std::vector<T> to_list(std::string_view v, F convert) {
  std::vector<T> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(convert(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>) {
      out += fmt(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

const char* engine_name(EngineChoice e) {
  switch (e) {
    case EngineChoice::automatic: return "auto";
    case EngineChoice::dense: return "dense";
    case EngineChoice::fft: return "fft";
    case EngineChoice::infinite: return "infinite";
  }
  return "?";
}

using Setter = std::function<void(RunConfig&, std::string_view, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"omega", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.params.omega = to_double(v, k, l); }},
      {"kappa", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.params.kappa = to_double(v, k, l); }},
      {"n_atoms", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.params.n_atoms = to_double(v, k, l); }},
      {"g1", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.params.g1 = to_double(v, k, l); }},
      {"g2", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.params.g2 = to_double(v, k, l); }},
      {"side", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.side = to_int(v, k, l); }},
      {"boundary",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         if (v != "periodic" && v != "open" && v != "infinite") fail(k, l, "expected periodic, open or infinite");
         c.boundary = std::string(v);
       }},
      {"engine",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         if (v == "auto") c.engine = EngineChoice::automatic;
         else if (v == "dense") c.engine = EngineChoice::dense;
         else if (v == "fft") c.engine = EngineChoice::fft;
         else if (v == "infinite") c.engine = EngineChoice::infinite;
         else fail(k, l, "expected auto, dense, fft or infinite");
       }},
      {"entropy_mode",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         if (v == "count_all") c.entropy_mode = EntropyMode::count_all;
         else if (v == "degenerate_once") c.entropy_mode = EntropyMode::degenerate_once;
         else fail(k, l, "expected count_all or degenerate_once");
       }},
      {"degeneracy_tol", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.degeneracy_tol = to_double(v, k, l); }},
      {"blocks",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         c.blocks = to_list<int>(v, [&](std::string_view x) { return to_int(x, k, l); });
       }},
      {"g_values",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         c.g_values = to_list<double>(v, [&](std::string_view x) { return to_double(x, k, l); });
       }},
      {"g_min", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.g_min = to_double(v, k, l); }},
      {"g_max",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         if (v == "auto") c.g_max.reset();
         else c.g_max = to_double(v, k, l);
       }},
      {"g_points", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.g_points = to_int(v, k, l); }},
      {"derivative_step", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.derivative_step = to_double(v, k, l); }},
      {"sizes",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         c.sizes = to_list<int>(v, [&](std::string_view x) { return to_int(x, k, l); });
       }},
      {"g1_values",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         c.g1_values = to_list<double>(v, [&](std::string_view x) { return to_double(x, k, l); });
       }},
      {"max_displacement", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.max_displacement = to_int(v, k, l); }},
      {"format",
       [](RunConfig& c, std::string_view v, const std::string& k, int l) {
         if (v == "csv") c.format = OutputFormat::csv;
         else if (v == "json") c.format = OutputFormat::json;
         else fail(k, l, "expected csv or json");
       }},
      {"output", [](RunConfig& c, std::string_view v, const std::string&, int) { c.output = std::string(v); }},
      {"workers", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.workers = to_int(v, k, l); }},
      {"quad_base", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.quad.base_order = to_int(v, k, l); }},
      {"quad_tol", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.quad.tolerance = to_double(v, k, l); }},
      {"quad_max", [](RunConfig& c, std::string_view v, const std::string& k, int l) { c.quad.max_order = to_int(v, k, l); }},
  };
  return table;
}

}  // namespace

LatticeSpec RunConfig::lattice() const {
  if (boundary == "infinite") return LatticeSpec::infinite_lattice();
  return boundary == "open" ? LatticeSpec::open(side) : LatticeSpec::periodic(side);
}

Engine RunConfig::resolved_engine() const {
  switch (engine) {
    case EngineChoice::dense: return Engine::dense;
    case EngineChoice::fft: return Engine::fft;
    case EngineChoice::infinite: return Engine::infinite;
    case EngineChoice::automatic: break;
  }
  return default_engine(lattice());
}

std::vector<double> RunConfig::g_grid() const {
  if (!g_values.empty()) return g_values;
  const double hi = g_max ? *g_max : critical_g_equal(params) - 1e-4;
  if (g_points == 1) return {g_min};
  std::vector<double> out(static_cast<std::size_t>(g_points));
  for (int i = 0; i < g_points; ++i) out[i] = g_min + (hi - g_min) * i / (g_points - 1);
  out.back() = hi;
  return out;
}

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError("invalid value for key '" + key + "': " + what);
  };
  check(params.omega > 0.0, "omega", "must be positive");
  check(params.kappa > 0.0, "kappa", "must be positive");
  check(params.n_atoms > 0.0, "n_atoms", "must be positive");
  check(params.g1 >= 0.0, "g1", "must be non-negative");
  check(params.g2 >= 0.0, "g2", "must be non-negative");
  check(side >= 1, "side", "must be at least 1");
  check(boundary != "periodic" || side >= 3, "side", "periodic lattices need side >= 3");
  check(degeneracy_tol > 0.0, "degeneracy_tol", "must be positive");
  check(!blocks.empty(), "blocks", "must not be empty");
  for (int L : blocks) check(L >= 1, "blocks", "block sizes must be positive");
  check(g_points >= 1, "g_points", "must be at least 1");
  check(derivative_step > 0.0, "derivative_step", "must be positive");
  for (int m : sizes) check(m >= 5 && m % 2 == 1, "sizes", "sizes must be odd and >= 5");
  check(max_displacement >= 0, "max_displacement", "must be non-negative");
  check(workers >= 0, "workers", "must be non-negative");
  check(quad.base_order >= 16, "quad_base", "must be at least 16");
  check(quad.max_order >= quad.base_order, "quad_max", "must be at least quad_base");
  check(quad.tolerance > 0.0, "quad_tol", "must be positive");
  if (engine == EngineChoice::infinite) check(boundary == "infinite", "engine", "infinite engine needs boundary = infinite");
  if (engine == EngineChoice::dense || engine == EngineChoice::fft) {
    check(boundary != "infinite", "engine", "finite engines need a finite boundary");
  }
  if (engine == EngineChoice::fft) check(boundary == "periodic", "engine", "fft engine needs periodic boundary");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  int line_no = 0;
  for (std::size_t start = 0; start < text.size();) {
    ++line_no;
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value' (line " + std::to_string(line_no) + ")");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("unknown key '" + key + "' (line " + std::to_string(line_no) + ")");
    }
    if (value.empty() && key != "output" && key != "g_values") fail(key, line_no, "missing value");
    it->second(config, value, key, line_no);
  }
  config.validate();
  return config;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "omega = " << fmt(c.params.omega) << "\n"
      << "kappa = " << fmt(c.params.kappa) << "\n"
      << "n_atoms = " << fmt(c.params.n_atoms) << "\n"
      << "g1 = " << fmt(c.params.g1) << "\n"
      << "g2 = " << fmt(c.params.g2) << "\n"
      << "side = " << c.side << "\n"
      << "boundary = " << c.boundary << "\n"
      << "engine = " << engine_name(c.engine) << "\n"
      << "entropy_mode = " << to_string(c.entropy_mode) << "\n"
      << "degeneracy_tol = " << fmt(c.degeneracy_tol) << "\n"
      << "blocks = " << join(c.blocks) << "\n"
      << "g_values = " << join(c.g_values) << "\n"
      << "g_min = " << fmt(c.g_min) << "\n"
      << "g_max = " << (c.g_max ? fmt(*c.g_max) : std::string("auto")) << "\n"
      << "g_points = " << c.g_points << "\n"
      << "derivative_step = " << fmt(c.derivative_step) << "\n"
      << "sizes = " << join(c.sizes) << "\n"
      << "g1_values = " << join(c.g1_values) << "\n"
      << "max_displacement = " << c.max_displacement << "\n"
      << "format = " << (c.format == OutputFormat::csv ? "csv" : "json") << "\n"
      << "output = " << c.output << "\n"
      << "workers = " << c.workers << "\n"
      << "quad_base = " << c.quad.base_order << "\n"
      << "quad_tol = " << fmt(c.quad.tolerance) << "\n"
      << "quad_max = " << c.quad.max_order << "\n";
  return out.str();
}

std::string config_digest(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spinwave
