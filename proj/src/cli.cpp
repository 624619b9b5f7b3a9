#include "plrkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "plrkit/catalog.hpp"
#include "plrkit/determination.hpp"
#include "plrkit/ekeland.hpp"
#include "plrkit/errors.hpp"
#include "plrkit/orbit.hpp"
#include "plrkit/parallel.hpp"
#include "plrkit/plr.hpp"
#include "plrkit/report.hpp"
#include "plrkit/slope.hpp"
#include "plrkit/space_file.hpp"

namespace plrkit {

namespace {

template <class T>
void read_opt(const json& j, const char* key, std::optional<T>& dst, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw InputError(where + ": '" + key + "' must be a string");
      dst = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw InputError(where + ": '" + key + "' must be a list of numbers");
      std::vector<double> out;
      for (const json& e : v) {
        if (!e.is_number()) throw InputError(where + ": '" + key + "' must be a list of numbers");
        out.push_back(e.get<double>());
      }
      dst = std::move(out);
    } else if constexpr (std::is_same_v<T, std::size_t>) {
      if (!v.is_number_unsigned()) throw InputError(where + ": '" + key + "' must be a non-negative integer");
      dst = v.get<std::size_t>();
    } else {
      if (!v.is_number()) throw InputError(where + ": '" + key + "' must be a number");
      dst = v.get<T>();
    }
  } catch (const json::exception& e) {
    throw InputError(where + ": '" + key + "': " + e.what());
  }
}

template <class T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

template <class T>
const T& need(const std::optional<T>& v, const char* name) {
  if (!v) throw InputError(std::string("missing --") + name);
  return *v;
}

double positive(const std::optional<double>& v, const char* name) {
  const double x = need(v, name);
  if (!(x > 0.0) || !std::isfinite(x)) throw InputError(std::string("--") + name + " must be positive");
  return x;
}

Vector to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void write_file(const std::string& path, const std::string& text) { write_text_file(path, text); }

Catalog active_catalog(const ExperimentConfig& cfg) {
  return cfg.catalog_file ? Catalog::load(*cfg.catalog_file) : Catalog::builtin();
}

const CatalogEntry& entry_with_dim(const Catalog& cat, const ExperimentConfig& cfg, Vector& center) {
  const CatalogEntry& e = cat.at(need(cfg.catalog, "catalog"));
  center = to_eigen(need(cfg.center, "center"));
  if (center.size() != e.expr.dim()) throw InputError("--center has the wrong dimension for " + e.id);
  return e;
}

int cmd_slope(const ExperimentConfig& cfg, std::ostream& out) {
  const SpaceFile sf = load_space_file(need(cfg.space, "space"), active_catalog(cfg));
  const ScalarField& f = sf.field(need(cfg.field, "field"));
  const PointIndex x = resolve_point(*sf.space, need(cfg.point, "point"));
  const SlopeEstimate s = cfg.eps ? discrete_slope(f, x, positive(cfg.eps, "eps")) : local_slope_finite(f, x);
  json j = report_json(s, *sf.space, x);
  j["constants"] = nullptr;
  emit(out, j);
  return 0;
}

int cmd_ekeland(const ExperimentConfig& cfg, std::ostream& out) {
  const SpaceFile sf = load_space_file(need(cfg.space, "space"), active_catalog(cfg));
  const ScalarField& f = sf.field(need(cfg.field, "field"));
  const PointIndex x0 = resolve_point(*sf.space, need(cfg.start, "start"));
  const EkelandResult r = ekeland_point(f, x0, positive(cfg.lambda, "lambda"));
  json j = report_json(r, *sf.space);
  j["constants"] = nullptr;
  emit(out, j);
  return r.check.ok ? 0 : 1;
}

int cmd_orbit(const ExperimentConfig& cfg, std::ostream& out) {
  const std::string map = cfg.map.value_or("determination");
  if (map != "determination") throw InputError("unknown --map '" + map + "' (expected determination)");
  const SpaceFile sf = load_space_file(need(cfg.space, "space"), active_catalog(cfg));
  const ScalarField& f = sf.field(need(cfg.field, "field"));
  const ScalarField& g = sf.field(need(cfg.g_field, "g-field"));
  const double eps = positive(cfg.eps, "eps");
  const double c = positive(cfg.c, "c");
  const double res = positive(cfg.resolution, "resolution");
  const PointIndex x0 = resolve_point(*sf.space, need(cfg.start, "start"));
  const PointIndex xb = cfg.x_bar ? resolve_point(*sf.space, *cfg.x_bar) : f.argmin();

  const ScalarField F = f.shifted(-f.value(xb));
  const ScalarField G = g.shifted(-g.value(xb));
  std::vector<ExtReal> slopes;
  for (const auto& e : discrete_slopes(F, res)) slopes.push_back(e.value);
  const MultiMap S = build_determination_map(F, G, slopes, eps, c, xb);
  const StarReport star = check_star_property(*sf.space, S);
  const Orbit orbit = run_orbit(*sf.space, S, x0, cfg.max_iter.value_or(0));
  const auto bad = verify_orbit(S, orbit);
  const LengthBoundReport len = orbit_length_bound(orbit, F, eps);

  json j = report_json(orbit, S, *sf.space);
  j["x_bar"] = sf.space->label(xb);
  j["eps"] = eps;
  j["resolution"] = res;
  j["constants"] = constants_json(c, std::nullopt);
  j["star_property"] = report_json(star);
  j["membership_ok"] = !bad.has_value();
  j["length_bound"] = report_json(len);
  const bool ok = star.pass && !bad && len.ok && orbit.termination == Termination::empty_s;
  j["ok"] = ok;
  emit(out, j);
  return ok ? 0 : 1;
}

PlrSampling plr_sampling(const ExperimentConfig& cfg) {
  PlrSampling s;
  s.seed = cfg.seed;
  if (cfg.spacing) s.spacing = positive(cfg.spacing, "spacing");
  return s;
}

int cmd_plr_check(const ExperimentConfig& cfg, std::ostream& out) {
  const Catalog cat = active_catalog(cfg);
  Vector center;
  const CatalogEntry& e = entry_with_dim(cat, cfg, center);
  const double c = positive(cfg.c, "c");
  const double delta = positive(cfg.delta, "delta");
  const PlrCertificate cert = certify_plr(e.expr, SubdifferentialOracle::of(e), center, c, delta, plr_sampling(cfg));
  json j = report_json(cert);
  j["entry"] = e.id;
  emit(out, j);
  return cert.pass ? 0 : 1;
}

int cmd_series_check(const ExperimentConfig& cfg, std::ostream& out) {
  const std::string path = need(cfg.file, "file");
  const json j = read_json_file(path);
  require_keys(j, {"a", "b", "c"}, path);
  std::optional<std::vector<double>> a;
  std::optional<std::vector<double>> b;
  std::optional<double> c_file;
  read_opt(j, "a", a, path);
  read_opt(j, "b", b, path);
  read_opt(j, "c", c_file, path);
  const double c = positive(cfg.c ? cfg.c : c_file, "c");
  const SeriesReport r = verify_series_bound(need(a, "a"), need(b, "b"), c);
  json rep = report_json(r);
  rep["constants"] = constants_json(c, std::nullopt);
  rep["ok"] = r.hypothesis_ok && r.bound_ok;
  emit(out, rep);
  return r.hypothesis_ok && r.bound_ok ? 0 : 1;
}

int cmd_sharp_min(const ExperimentConfig& cfg, std::ostream& out) {
  const Catalog cat = active_catalog(cfg);
  Vector center;
  const CatalogEntry& e = entry_with_dim(cat, cfg, center);
  const double c = positive(cfg.c, "c");
  const double delta = positive(cfg.delta, "delta");
  const Vector p = to_eigen(need(cfg.p, "p"));
  const SharpMinReport r = sharp_min_transform(e.expr, SubdifferentialOracle::of(e), center, c, delta, p,
                                               plr_sampling(cfg));
  json j = report_json(r);
  j["entry"] = e.id;
  j["constants"] = constants_json(c, delta);
  emit(out, j);
  return r.ok ? 0 : 1;
}

DeterminationInstance resolve_instance(const std::string& token) {
  if (std::ifstream(token).good()) return DeterminationInstance::load(token);
  return DeterminationInstance::builtin(token);
}

int cmd_determine(const ExperimentConfig& cfg, std::ostream& out) {
  const DeterminationInstance inst = resolve_instance(need(cfg.instance, "instance"));
  DeterminationSampling s;
  s.plr.seed = cfg.seed;
  if (cfg.h) s.h = positive(cfg.h, "h");
  const DeterminationReport r = run_determination(inst, s);
  const json j = report_json(r);
  if (cfg.report) write_file(*cfg.report, j.dump(2) + "\n");
  if (cfg.csv) {
    std::ostringstream csv;
    write_csv(r, csv);
    write_file(*cfg.csv, csv.str());
  }
  if (cfg.plot) {
    std::ostringstream plot;
    write_plot(r, inst.x_bar, plot);
    write_file(*cfg.plot, plot.str());
  }
  emit(out, j);
  return r.pass ? 0 : 1;
}

int cmd_catalog_list(const ExperimentConfig& cfg, std::ostream& out) {
  const Catalog cat = active_catalog(cfg);
  json entries = json::array();
  for (const auto& e : cat.entries()) entries.push_back(to_json(e));
  emit(out, json{{"entries", entries}, {"constants", nullptr}});
  return 0;
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const std::string& where) {
  require_keys(j,
               {"command", "seed", "threads", "catalog_file", "space", "field", "g_field", "point", "start", "x_bar",
                "map", "eps", "resolution", "lambda", "max_iter", "catalog", "center", "p", "c", "delta", "spacing",
                "file", "instance", "h", "report", "csv", "plot"},
               where);
  ExperimentConfig cfg;
  std::optional<std::string> command;
  read_opt(j, "command", command, where);
  if (command) cfg.command = *command;
  std::optional<std::size_t> seed;
  std::optional<std::size_t> threads;
  read_opt(j, "seed", seed, where);
  read_opt(j, "threads", threads, where);
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = static_cast<unsigned>(*threads);
  read_opt(j, "catalog_file", cfg.catalog_file, where);
  read_opt(j, "space", cfg.space, where);
  read_opt(j, "field", cfg.field, where);
  read_opt(j, "g_field", cfg.g_field, where);
  read_opt(j, "point", cfg.point, where);
  read_opt(j, "start", cfg.start, where);
  read_opt(j, "x_bar", cfg.x_bar, where);
  read_opt(j, "map", cfg.map, where);
  read_opt(j, "eps", cfg.eps, where);
  read_opt(j, "resolution", cfg.resolution, where);
  read_opt(j, "lambda", cfg.lambda, where);
  read_opt(j, "max_iter", cfg.max_iter, where);
  read_opt(j, "catalog", cfg.catalog, where);
  read_opt(j, "center", cfg.center, where);
  read_opt(j, "p", cfg.p, where);
  read_opt(j, "c", cfg.c, where);
  read_opt(j, "delta", cfg.delta, where);
  read_opt(j, "spacing", cfg.spacing, where);
  read_opt(j, "file", cfg.file, where);
  read_opt(j, "instance", cfg.instance, where);
  read_opt(j, "h", cfg.h, where);
  read_opt(j, "report", cfg.report, where);
  read_opt(j, "csv", cfg.csv, where);
  read_opt(j, "plot", cfg.plot, where);
  return cfg;
}

ExperimentConfig merge(ExperimentConfig base, const ExperimentConfig& over) {
  if (!over.command.empty()) base.command = over.command;
  if (over.seed != 0) base.seed = over.seed;
  if (over.threads != 0) base.threads = over.threads;
  take(base.catalog_file, over.catalog_file);
  take(base.space, over.space);
  take(base.field, over.field);
  take(base.g_field, over.g_field);
  take(base.point, over.point);
  take(base.start, over.start);
  take(base.x_bar, over.x_bar);
  take(base.map, over.map);
  take(base.eps, over.eps);
  take(base.resolution, over.resolution);
  take(base.lambda, over.lambda);
  take(base.max_iter, over.max_iter);
  take(base.catalog, over.catalog);
  take(base.center, over.center);
  take(base.p, over.p);
  take(base.c, over.c);
  take(base.delta, over.delta);
  take(base.spacing, over.spacing);
  take(base.file, over.file);
  take(base.instance, over.instance);
  take(base.h, over.h);
  take(base.report, over.report);
  take(base.csv, over.csv);
  take(base.plot, over.plot);
  return base;
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    set_worker_count(config.threads);
    const std::string& cmd = config.command;
    if (cmd == "slope") return cmd_slope(config, out);
    if (cmd == "ekeland") return cmd_ekeland(config, out);
    if (cmd == "orbit") return cmd_orbit(config, out);
    if (cmd == "plr-check") return cmd_plr_check(config, out);
    if (cmd == "series-check") return cmd_series_check(config, out);
    if (cmd == "sharp-min") return cmd_sharp_min(config, out);
    if (cmd == "determine") return cmd_determine(config, out);
    if (cmd == "catalog-list") return cmd_catalog_list(config, out);
    throw InputError("unknown command '" + cmd + "'");
  } catch (const PreconditionError& e) {
    emit(out, json{{"ok", false}, {"error", e.what()}, {"witness", e.witness()}});
    err << "precondition failed: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace plrkit
