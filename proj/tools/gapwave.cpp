#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gapwave/error.hpp"
#include "gapwave/scenarios.hpp"

namespace {

using namespace gapwave;

using Command = int (*)(const ScenarioConfig&, const CommandContext&);

struct Options {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Options& o, bool config_required) {
  auto* c = sub->add_option("--config", o.config, "scenario file (INI)");
  if (config_required) c->required();
  sub->add_option("--out-dir", o.out_dir, "output directory (overrides GAPWAVE_OUT_DIR and [run] out_dir)");
  sub->add_option("--seed", o.seed, "seed for random states");
}

std::filesystem::path resolve_out_dir(const Options& o, const ScenarioConfig& cfg) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv("GAPWAVE_OUT_DIR"); env && *env) return env;
  if (cfg.has("run", "out_dir")) return cfg.resolve(cfg.get_string("run", "out_dir"));
  return "gapwave-out";
}

int run(Command cmd, const Options& o) {
  try {
    const ScenarioConfig cfg = o.config.empty() ? ScenarioConfig{} : ScenarioConfig::load(o.config);
    CommandContext ctx;
    ctx.out_dir = resolve_out_dir(o, cfg);
    ctx.seed = o.seed;
    ctx.log = &std::cout;
    const int code = cmd(cfg, ctx);
    std::cout << "outputs in " << ctx.out_dir.string() << '\n';
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitScientificFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gapwave: energy-level gaps from the bipartite wave equation"};
  app.require_subcommand(1);

  Options opts;
  Command chosen = nullptr;
  const std::pair<const char*, Command> commands[] = {
      {"gaps", cmd_gaps}, {"evolve", cmd_evolve}, {"schmidt", cmd_schmidt},
      {"doubleslit", cmd_doubleslit}, {"validate", cmd_validate}};
  const std::pair<const char*, const char*> help[] = {
      {"gaps", "gap spectrum: pairwise, direct, and their match"},
      {"evolve", "propagate a one-body or bipartite state"},
      {"schmidt", "Schmidt decomposition of a configured state"},
      {"doubleslit", "wave and particle double-slit densities"},
      {"validate", "run the invariant suite"}};
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    auto* sub = app.add_subcommand(commands[k].first, help[k].second);
    const bool is_validate = std::string(commands[k].first) == "validate";
    add_common(sub, opts, !is_validate);
    sub->callback([&chosen, cmd = commands[k].second] { chosen = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return run(chosen, opts);
}
