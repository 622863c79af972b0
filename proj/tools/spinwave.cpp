// Command-line front end: spinwave <subcommand> [--config FILE] [--set key=value]...

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"

#include "spinwave/commands.hpp"
#include "spinwave/config.hpp"
#include "spinwave/errors.hpp"

int main(int argc, char** argv) {
  using namespace spinwave;

  CLI::App app{"Spin-wave lattice: ground-state entanglement of a 2D harmonic lattice"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::string format;
  std::string output;
  int workers = -1;
  app.add_option("--config,-c", config_path, "key = value configuration file");
  app.add_option("--set,-s", overrides, "extra 'key=value' lines applied after the file");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output,-o", output, "output path (default stdout)");
  app.add_option("--workers,-j", workers, "worker threads (falls back to SPINWAVE_WORKERS)")->check(CLI::NonNegativeNumber);
  for (const auto& name : subcommands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "config error: cannot read '" << config_path << "'\n";
      return kExitConfig;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    if (!text.empty() && text.back() != '\n') text += '\n';
  }
  for (const auto& line : overrides) text += line + "\n";
  if (!format.empty()) text += "format = " + format + "\n";
  if (!output.empty()) text += "output = " + output + "\n";

  RunConfig config;
  try {
    config = parse_config(text);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (workers >= 0) {
    config.workers = workers;
  } else if (config.workers == 0) {
    if (const char* env = std::getenv("SPINWAVE_WORKERS")) config.workers = std::atoi(env);
  }
  if (config.workers > 0) omp_set_num_threads(config.workers);

  return dispatch(app.get_subcommands().front()->get_name(), config, std::cout, std::cerr);
}
