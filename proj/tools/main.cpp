#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "plrkit/cli.hpp"
#include "plrkit/errors.hpp"

namespace {

// Every flag writes into `flags`; a --config file supplies the base values.
template <class T>
CLI::Option* opt(CLI::App* app, const std::string& name, std::optional<T>& dst, const std::string& help) {
  return app->add_option_function<T>(name, [&dst](const T& v) { dst = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  using plrkit::ExperimentConfig;
  CLI::App app{"plrkit: slopes, Ekeland points, descent orbits, and PLR certificates on finite spaces"};
  app.require_subcommand(0, 1);  // a --config file may name the command instead
  app.set_help_flag("--help", "print this help and exit");  // frees -h; subcommands inherit it

  ExperimentConfig flags;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  opt(&app, "--seed", seed, "RNG seed (default 0)");
  opt(&app, "--threads", threads, "worker threads, 0 = hardware concurrency");
  opt(&app, "--config", config_path, "JSON experiment config; flags override it");
  opt(&app, "--catalog-file", flags.catalog_file, "catalog JSON replacing the built-in entries");

  auto* slope = app.add_subcommand("slope", "discrete local slope of a field at a point");
  opt(slope, "--space", flags.space, "space file");
  opt(slope, "--field", flags.field, "field name");
  opt(slope, "--point", flags.point, "point label or index");
  opt(slope, "--eps", flags.eps, "resolution; omitted = exact finite-space slope");

  auto* ekeland = app.add_subcommand("ekeland", "Ekeland point with both inequality margins");
  opt(ekeland, "--space", flags.space, "space file");
  opt(ekeland, "--field", flags.field, "field name");
  opt(ekeland, "--start", flags.start, "starting point");
  opt(ekeland, "--lambda", flags.lambda, "lambda > 0");

  auto* orbit = app.add_subcommand("orbit", "determination-map orbit with S1/S2/S3 diagnostics");
  opt(orbit, "--space", flags.space, "space file");
  opt(orbit, "--map", flags.map, "map kind (determination)");
  opt(orbit, "--field", flags.field, "field f");
  opt(orbit, "--g-field", flags.g_field, "field g");
  opt(orbit, "--start", flags.start, "starting point");
  opt(orbit, "--x-bar", flags.x_bar, "sharp minimum of f (default: argmin)");
  opt(orbit, "--eps", flags.eps, "sharp-minimum gap");
  opt(orbit, "--c", flags.c, "slope coefficient c");
  opt(orbit, "--resolution", flags.resolution, "slope resolution");
  opt(orbit, "--max-iter", flags.max_iter, "iteration cap (default 10 |space|)");

  auto* plr = app.add_subcommand("plr-check", "PLR certificate for a catalog entry");
  opt(plr, "--catalog", flags.catalog, "catalog entry id");
  opt(plr, "--center", flags.center, "center, comma separated")->delimiter(',');
  opt(plr, "--c", flags.c, "c > 0");
  opt(plr, "--delta", flags.delta, "delta > 0");
  opt(plr, "--spacing", flags.spacing, "sample spacing (default delta/20)");

  auto* series = app.add_subcommand("series-check", "series lemma on a JSON {a, b} file");
  opt(series, "--file", flags.file, "sequence file");
  opt(series, "--c", flags.c, "c > 0");

  auto* sharp = app.add_subcommand("sharp-min", "sharp-minimum transform f1 = f - <p,.> + 4|. - x|");
  opt(sharp, "--catalog", flags.catalog, "catalog entry id");
  opt(sharp, "--center", flags.center, "center, comma separated")->delimiter(',');
  opt(sharp, "--p", flags.p, "subgradient at the center, comma separated")->delimiter(',');
  opt(sharp, "--c", flags.c, "c > 0");
  opt(sharp, "--delta", flags.delta, "delta > 0");
  opt(sharp, "--spacing", flags.spacing, "PLR sample spacing (default delta/20)");

  auto* determine = app.add_subcommand("determine", "end-to-end determination experiment");
  opt(determine, "--instance", flags.instance, "instance file or shipped id");
  opt(determine, "--h", flags.h, "grid spacing (default 0.01)");
  opt(determine, "--report", flags.report, "write the JSON report here");
  opt(determine, "--csv", flags.csv, "write per-point samples here");
  opt(determine, "--plot", flags.plot, "write (radius, max deviation) pairs here");

  app.add_subcommand("catalog-list", "list catalog entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (app.get_subcommands().empty()) {
    if (!config_path) {
      std::cerr << "error: a command is required\nRun with --help for more information.\n";
      return 2;
    }
  } else {
    flags.command = app.get_subcommands().front()->get_name();
  }
  if (seed) flags.seed = *seed;
  if (threads) flags.threads = *threads;
  ExperimentConfig cfg;
  try {
    if (config_path) cfg = plrkit::config_from_json(plrkit::read_json_file(*config_path), *config_path);
  } catch (const plrkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  cfg = plrkit::merge(cfg, flags);
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = *threads;
  return plrkit::run(cfg, std::cout, std::cerr);
}
