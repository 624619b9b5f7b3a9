#pragma once

#include "json.hpp"
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plrkit/convex_set.hpp"

namespace plrkit {

// Building blocks. Each is locally Lipschitz and subdifferentially regular;
// the subdifferential rules below are the Clarke sets.

/// 0.5 * sum_i d_i (x_i - c_i)^2
struct QuadraticTerm {
  Vector diag;
  Vector center;
};
/// <v, x>
struct LinearTerm {
  Vector v;
};
/// |x - c|
struct NormTerm {
  Vector center;
};
/// sum_i w_i |x_i - c_i|, w_i >= 0
struct L1Term {
  Vector weights;
  Vector center;
};
/// max_k <a_k, x> + b_k
struct MaxAffineTerm {
  std::vector<Vector> slopes;
  std::vector<double> offsets;
};
/// max(0, q(x)) with q(x) = 0.5 * sum_i d_i (x_i - c_i)^2 + <v, x> + b
struct PositivePartTerm {
  Vector diag;
  Vector center;
  Vector v;
  double b = 0.0;
};
/// |x - c|^3
struct CubicNormTerm {
  Vector center;
};

using Term = std::variant<QuadraticTerm, LinearTerm, NormTerm, L1Term, MaxAffineTerm, PositivePartTerm, CubicNormTerm>;

struct WeightedTerm {
  double coef = 1.0;
  Term term;
};

/// sum_k coef_k * term_k(x) + constant over R^dim.
class Expression {
 public:
  Expression() = default;
  Expression(int dim, std::vector<WeightedTerm> terms, double constant = 0.0);

  int dim() const noexcept { return dim_; }
  const std::vector<WeightedTerm>& terms() const noexcept { return terms_; }
  double constant() const noexcept { return constant_; }

  double operator()(const Vector& x) const;

  /// Clarke subdifferential as the Minkowski sum of the term rules. Exact when
  /// every nonsmooth term has a positive coefficient (see f_regular()).
  ConvexSet subdifferential(const Vector& x) const;

  Expression scaled(double alpha) const;
  Expression shifted(double a) const;
  Expression plus(const Expression& other) const;

  bool smooth() const;
  bool convex() const;
  bool lipschitz() const { return true; }
  bool f_regular() const;

  /// Upper bound on the Hessian norm of the smooth pieces over B(center; r).
  double curvature_bound(const Vector& center, double r) const;
  /// Upper bound on |p|, p in the subdifferential, over B(center; r).
  double lipschitz_bound(const Vector& center, double r) const;

 private:
  int dim_ = 0;
  std::vector<WeightedTerm> terms_;
  double constant_ = 0.0;
};

enum class EntryKind { smooth, convex, composite, sum };
std::string to_string(EntryKind k);

struct CatalogEntry {
  std::string id;
  EntryKind kind = EntryKind::smooth;
  Expression expr;
  bool lipschitz_flag = true;
  bool f_regular_flag = true;
  Vector sweep_center;
  double sweep_radius = 1.0;
};

class Catalog {
 public:
  /// Parses the JSON list format; rejects unknown keys and flags the terms cannot support.
  static Catalog from_json(const nlohmann::json& j);
  static Catalog parse(const std::string& text);
  static Catalog load(const std::string& path);
  static const Catalog& builtin();
  static const std::string& builtin_text();

  const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }
  const CatalogEntry& at(const std::string& id) const;
  const CatalogEntry* find(const std::string& id) const;

 private:
  std::vector<CatalogEntry> entries_;
};

nlohmann::json to_json(const CatalogEntry& e);

/// Reads an expression block {"dim", "terms", "constant"}; used by catalog and instance files.
Expression expression_from_json(const nlohmann::json& j);
nlohmann::json expression_to_json(const Expression& e);

}  // namespace plrkit
