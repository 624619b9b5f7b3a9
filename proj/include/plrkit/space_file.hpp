#pragma once

#include <map>
#include <memory>
#include <string>

#include "plrkit/catalog.hpp"
#include "plrkit/field.hpp"
#include "plrkit/io.hpp"

namespace plrkit {

/// A metric space plus named fields, as read from a space file:
///   {"points": [ids], "dist": [row-major], "fields": {name: [value | null]}}
///   {"grid": {"dim", "center", "radius", "h"}, "fields": {name: [values] | "catalog id" | expression}}
/// null stands for +inf. Catalog ids and expressions are only meaningful on grids.
struct SpaceFile {
  std::shared_ptr<const MetricSpace> space;
  std::map<std::string, ScalarField> fields;

  const ScalarField& field(const std::string& name) const;
};

SpaceFile space_from_json(const json& j, const Catalog& catalog, const std::string& where = "space");
SpaceFile load_space_file(const std::string& path, const Catalog& catalog);

/// A point by label, falling back to a decimal index.
PointIndex resolve_point(const MetricSpace& space, const std::string& token);

}  // namespace plrkit
