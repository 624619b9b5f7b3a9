#include "plrkit/space_file.hpp"

#include <charconv>

#include "plrkit/errors.hpp"
#include "plrkit/subdifferential.hpp"

namespace plrkit {

const ScalarField& SpaceFile::field(const std::string& name) const {
  const auto it = fields.find(name);
  if (it == fields.end()) throw InputError("space file has no field '" + name + "'");
  return it->second;
}

namespace {

ScalarField field_from_values(const std::shared_ptr<const MetricSpace>& space, const json& values,
                              const std::string& where) {
  if (values.size() != space->size()) {
    throw InputError(where + ": expected " + std::to_string(space->size()) + " values, got " +
                     std::to_string(values.size()));
  }
  std::vector<ExtReal> out;
  out.reserve(values.size());
  for (const json& v : values) {
    if (v.is_null()) {
      out.push_back(ExtReal::infinity());
    } else if (v.is_number()) {
      out.emplace_back(v.get<double>());
    } else {
      throw InputError(where + ": values must be numbers or null");
    }
  }
  return ScalarField(space, std::move(out));
}

}  // namespace

SpaceFile space_from_json(const json& j, const Catalog& catalog, const std::string& where) {
  require_keys(j, {"points", "dist", "grid", "fields"}, where);
  SpaceFile out;
  std::shared_ptr<const EuclideanGrid> grid;
  if (j.contains("grid")) {
    if (j.contains("points") || j.contains("dist")) throw InputError(where + ": give either 'grid' or 'points'");
    const json& g = j.at("grid");
    require_keys(g, {"dim", "center", "radius", "h"}, where + ".grid");
    GridSpec spec;
    spec.dim = static_cast<int>(get_number(g, "dim", where + ".grid"));
    spec.center = get_vector(g, "center", where + ".grid");
    spec.radius = get_number(g, "radius", where + ".grid");
    spec.h = get_number(g, "h", where + ".grid");
    grid = std::make_shared<const EuclideanGrid>(spec);
    out.space = grid;
  } else {
    if (!j.contains("points") || !j.at("points").is_array()) throw InputError(where + ": 'points' must be a list");
    if (!j.contains("dist") || !j.at("dist").is_array()) throw InputError(where + ": 'dist' must be a list");
    std::vector<std::string> ids;
    for (const json& p : j.at("points")) {
      if (!p.is_string()) throw InputError(where + ": point ids must be strings");
      ids.push_back(p.get<std::string>());
    }
    std::vector<double> dist;
    for (const json& d : j.at("dist")) {
      if (!d.is_number()) throw InputError(where + ": distances must be numbers");
      dist.push_back(d.get<double>());
    }
    out.space = std::make_shared<const FiniteMetricSpace>(std::move(ids), std::move(dist));
  }

  if (j.contains("fields")) {
    const json& fs = j.at("fields");
    if (!fs.is_object()) throw InputError(where + ": 'fields' must be an object");
    for (const auto& [name, spec] : fs.items()) {
      const std::string w = where + ".fields." + name;
      if (spec.is_array()) {
        out.fields.emplace(name, field_from_values(out.space, spec, w));
      } else if (spec.is_string() || spec.is_object()) {
        if (!grid) throw InputError(w + ": catalog ids and expressions need a grid space");
        const Expression e = spec.is_string() ? catalog.at(spec.get<std::string>()).expr : expression_from_json(spec);
        if (e.dim() != grid->dim()) throw InputError(w + ": dimension differs from the grid");
        out.fields.emplace(name, tabulate(e, grid));
      } else {
        throw InputError(w + ": expected a value list, a catalog id, or an expression");
      }
    }
  }
  return out;
}

SpaceFile load_space_file(const std::string& path, const Catalog& catalog) {
  return space_from_json(read_json_file(path), catalog, path);
}

PointIndex resolve_point(const MetricSpace& space, const std::string& token) {
  if (auto i = space.find(token)) return *i;
  PointIndex idx = 0;
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(token.data(), end, idx);
  if (res.ec == std::errc() && res.ptr == end && idx < space.size()) return idx;
  throw InputError("unknown point '" + token + "'");
}

}  // namespace plrkit
