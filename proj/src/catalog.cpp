#include "plrkit/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "plrkit/errors.hpp"
#include "plrkit/io.hpp"

namespace plrkit {

namespace {

// Points within this distance of a kink get the full kink subdifferential, so
// that lattice points sitting on a kink up to rounding are treated as on it.
constexpr double kKinkTol = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double quad_value(const Vector& diag, const Vector& center, const Vector& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double t = x[i] - center[i];
    acc += diag[i] * t * t;
  }
  return 0.5 * acc;
}

Vector quad_grad(const Vector& diag, const Vector& center, const Vector& x) {
  return diag.cwiseProduct(x - center);
}

double term_value(const Term& t, const Vector& x) {
  return std::visit(
      overloaded{
          [&](const QuadraticTerm& q) { return quad_value(q.diag, q.center, x); },
          [&](const LinearTerm& l) { return l.v.dot(x); },
          [&](const NormTerm& n) { return (x - n.center).norm(); },
          [&](const L1Term& l) { return l.weights.dot((x - l.center).cwiseAbs()); },
          [&](const MaxAffineTerm& m) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < m.slopes.size(); ++k) best = std::max(best, m.slopes[k].dot(x) + m.offsets[k]);
            return best;
          },
          [&](const PositivePartTerm& p) {
            return std::max(0.0, quad_value(p.diag, p.center, x) + p.v.dot(x) + p.b);
          },
          [&](const CubicNormTerm& c) {
            const double r = (x - c.center).norm();
            return r * r * r;
          },
      },
      t);
}

ConvexSet term_subdifferential(const Term& t, const Vector& x) {
  const auto dim = x.size();
  return std::visit(
      overloaded{
          [&](const QuadraticTerm& q) { return ConvexSet::singleton(quad_grad(q.diag, q.center, x)); },
          [&](const LinearTerm& l) { return ConvexSet::singleton(l.v); },
          [&](const NormTerm& n) {
            const Vector u = x - n.center;
            const double r = u.norm();
            if (r <= kKinkTol) return ConvexSet::ball(Vector::Zero(dim), 1.0);
            return ConvexSet::singleton(u / r);
          },
          [&](const L1Term& l) {
            // Box product: one interval per kinked coordinate.
            std::vector<Vector> verts{Vector::Zero(dim)};
            for (Eigen::Index i = 0; i < dim; ++i) {
              const double u = x[i] - l.center[i];
              if (std::fabs(u) <= kKinkTol) {
                std::vector<Vector> next;
                for (const auto& v : verts) {
                  Vector a = v;
                  Vector b = v;
                  a[i] = -l.weights[i];
                  b[i] = l.weights[i];
                  next.push_back(a);
                  next.push_back(b);
                }
                verts = std::move(next);
              } else {
                for (auto& v : verts) v[i] = u > 0 ? l.weights[i] : -l.weights[i];
              }
            }
            return ConvexSet::polytope(std::move(verts));
          },
          [&](const MaxAffineTerm& m) {
            std::vector<double> vals;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < m.slopes.size(); ++k) {
              vals.push_back(m.slopes[k].dot(x) + m.offsets[k]);
              best = std::max(best, vals.back());
            }
            std::vector<Vector> active;
            for (std::size_t k = 0; k < vals.size(); ++k) {
              if (vals[k] >= best - kKinkTol * (1.0 + std::fabs(best))) active.push_back(m.slopes[k]);
            }
            return ConvexSet::polytope(std::move(active));
          },
          [&](const PositivePartTerm& p) {
            const double q = quad_value(p.diag, p.center, x) + p.v.dot(x) + p.b;
            const Vector g = quad_grad(p.diag, p.center, x) + p.v;
            if (std::fabs(q) <= kKinkTol) return ConvexSet::polytope({Vector::Zero(dim), g});
            return ConvexSet::singleton(q > 0 ? g : Vector(Vector::Zero(dim)));
          },
          [&](const CubicNormTerm& c) {
            const Vector u = x - c.center;
            return ConvexSet::singleton(3.0 * u.norm() * u);
          },
      },
      t);
}

bool term_smooth(const Term& t) {
  return std::holds_alternative<QuadraticTerm>(t) || std::holds_alternative<LinearTerm>(t) ||
         std::holds_alternative<CubicNormTerm>(t);
}

bool term_convex(const WeightedTerm& w) {
  if (w.coef == 0.0) return true;
  if (std::holds_alternative<LinearTerm>(w.term)) return true;
  if (const auto* q = std::get_if<QuadraticTerm>(&w.term)) {
    return w.coef > 0 ? q->diag.minCoeff() >= 0.0 : q->diag.maxCoeff() <= 0.0;
  }
  if (w.coef < 0) return false;
  if (const auto* p = std::get_if<PositivePartTerm>(&w.term)) return p->diag.minCoeff() >= 0.0;
  return true;
}

double term_curvature(const Term& t, const Vector& center, double r) {
  return std::visit(overloaded{
                        [&](const QuadraticTerm& q) { return q.diag.cwiseAbs().maxCoeff(); },
                        [&](const PositivePartTerm& p) { return p.diag.cwiseAbs().maxCoeff(); },
                        [&](const CubicNormTerm& c) { return 6.0 * ((center - c.center).norm() + r); },
                        [&](const auto&) { return 0.0; },
                    },
                    t);
}

double term_lipschitz(const Term& t, const Vector& center, double r) {
  return std::visit(
      overloaded{
          [&](const QuadraticTerm& q) { return q.diag.cwiseAbs().maxCoeff() * ((center - q.center).norm() + r); },
          [&](const LinearTerm& l) { return l.v.norm(); },
          [&](const NormTerm&) { return 1.0; },
          [&](const L1Term& l) { return l.weights.norm(); },
          [&](const MaxAffineTerm& m) {
            double best = 0.0;
            for (const auto& a : m.slopes) best = std::max(best, a.norm());
            return best;
          },
          [&](const PositivePartTerm& p) {
            return p.diag.cwiseAbs().maxCoeff() * ((center - p.center).norm() + r) + p.v.norm();
          },
          [&](const CubicNormTerm& c) {
            const double rr = (center - c.center).norm() + r;
            return 3.0 * rr * rr;
          },
      },
      t);
}

void check_term_dims(const Term& t, int dim) {
  auto need = [&](const Vector& v, const char* what) {
    if (v.size() != dim) throw InputError(std::string("term field '") + what + "' has wrong dimension");
  };
  std::visit(overloaded{
                 [&](const QuadraticTerm& q) {
                   need(q.diag, "diag");
                   need(q.center, "center");
                 },
                 [&](const LinearTerm& l) { need(l.v, "v"); },
                 [&](const NormTerm& n) { need(n.center, "center"); },
                 [&](const L1Term& l) {
                   need(l.weights, "weights");
                   need(l.center, "center");
                   if (l.weights.minCoeff() < 0) throw InputError("l1 weights must be nonnegative");
                 },
                 [&](const MaxAffineTerm& m) {
                   if (m.slopes.empty() || m.slopes.size() != m.offsets.size()) {
                     throw InputError("max_affine needs matching nonempty slopes and offsets");
                   }
                   for (const auto& a : m.slopes) need(a, "slopes");
                 },
                 [&](const PositivePartTerm& p) {
                   need(p.diag, "diag");
                   need(p.center, "center");
                   need(p.v, "v");
                 },
                 [&](const CubicNormTerm& c) { need(c.center, "center"); },
             },
             t);
}

}  // namespace

Expression::Expression(int dim, std::vector<WeightedTerm> terms, double constant)
    : dim_(dim), terms_(std::move(terms)), constant_(constant) {
  if (dim_ < 1 || dim_ > 4) throw InputError("expression: dim must be in 1..4");
  if (!std::isfinite(constant_)) throw InputError("expression: constant must be finite");
  for (const auto& w : terms_) {
    if (!std::isfinite(w.coef)) throw InputError("expression: coefficients must be finite");
    check_term_dims(w.term, dim_);
  }
}

double Expression::operator()(const Vector& x) const {
  if (x.size() != dim_) throw InputError("expression evaluated at a point of the wrong dimension");
  double acc = 0.0;
  for (const auto& w : terms_) acc += w.coef * term_value(w.term, x);
  return acc + constant_;
}

ConvexSet Expression::subdifferential(const Vector& x) const {
  if (x.size() != dim_) throw InputError("subdifferential at a point of the wrong dimension");
  ConvexSet acc = ConvexSet::singleton(Vector::Zero(dim_));
  for (const auto& w : terms_) {
    if (w.coef == 0.0) continue;
    acc = acc + term_subdifferential(w.term, x).scaled(w.coef);
  }
  return acc;
}

Expression Expression::scaled(double alpha) const {
  Expression e = *this;
  for (auto& w : e.terms_) w.coef *= alpha;
  e.constant_ *= alpha;
  return e;
}

Expression Expression::shifted(double a) const {
  Expression e = *this;
  e.constant_ += a;
  return e;
}

Expression Expression::plus(const Expression& other) const {
  if (other.dim_ != dim_) throw InputError("sum of expressions in different dimensions");
  Expression e = *this;
  e.terms_.insert(e.terms_.end(), other.terms_.begin(), other.terms_.end());
  e.constant_ += other.constant_;
  return e;
}

bool Expression::smooth() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const WeightedTerm& w) { return w.coef == 0.0 || term_smooth(w.term); });
}

bool Expression::convex() const { return std::all_of(terms_.begin(), terms_.end(), term_convex); }

bool Expression::f_regular() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const WeightedTerm& w) { return w.coef >= 0.0 || term_smooth(w.term); });
}

double Expression::curvature_bound(const Vector& center, double r) const {
  double acc = 0.0;
  for (const auto& w : terms_) acc += std::fabs(w.coef) * term_curvature(w.term, center, r);
  return acc;
}

double Expression::lipschitz_bound(const Vector& center, double r) const {
  double acc = 0.0;
  for (const auto& w : terms_) acc += std::fabs(w.coef) * term_lipschitz(w.term, center, r);
  return acc;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_string(EntryKind k) {
  switch (k) {
    case EntryKind::smooth:
      return "smooth";
    case EntryKind::convex:
      return "convex";
    case EntryKind::composite:
      return "composite";
    case EntryKind::sum:
      return "sum";
  }
  return "unknown";
}

namespace {

EntryKind kind_from_string(const std::string& s, const std::string& where) {
  if (s == "smooth") return EntryKind::smooth;
  if (s == "convex") return EntryKind::convex;
  if (s == "composite") return EntryKind::composite;
  if (s == "sum") return EntryKind::sum;
  throw InputError(where + ": unknown kind '" + s + "'");
}

Vector vector_or_zero(const json& j, const std::string& key, int dim, const std::string& where) {
  return j.contains(key) ? get_vector(j, key, where) : Vector(Vector::Zero(dim));
}

WeightedTerm term_from_json(const json& j, int dim, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw InputError(where + ": term needs a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  WeightedTerm w;
  w.coef = get_number_or(j, "coef", 1.0, where);
  if (type == "quadratic") {
    require_keys(j, {"type", "coef", "diag", "center"}, where);
    w.term = QuadraticTerm{get_vector(j, "diag", where), vector_or_zero(j, "center", dim, where)};
  } else if (type == "linear") {
    require_keys(j, {"type", "coef", "v"}, where);
    w.term = LinearTerm{get_vector(j, "v", where)};
  } else if (type == "norm") {
    require_keys(j, {"type", "coef", "center"}, where);
    w.term = NormTerm{vector_or_zero(j, "center", dim, where)};
  } else if (type == "l1") {
    require_keys(j, {"type", "coef", "weights", "center"}, where);
    Vector weights = j.contains("weights") ? get_vector(j, "weights", where) : Vector(Vector::Ones(dim));
    w.term = L1Term{weights, vector_or_zero(j, "center", dim, where)};
  } else if (type == "max_affine") {
    require_keys(j, {"type", "coef", "slopes", "offsets"}, where);
    MaxAffineTerm m;
    if (!j.contains("slopes") || !j.at("slopes").is_array()) throw InputError(where + ": missing 'slopes'");
    for (const auto& s : j.at("slopes")) m.slopes.push_back(to_vector(s, where + ".slopes"));
    const Vector off = get_vector(j, "offsets", where);
    m.offsets.assign(off.data(), off.data() + off.size());
    w.term = std::move(m);
  } else if (type == "positive_part") {
    require_keys(j, {"type", "coef", "diag", "center", "v", "b"}, where);
    w.term = PositivePartTerm{vector_or_zero(j, "diag", dim, where), vector_or_zero(j, "center", dim, where),
                              vector_or_zero(j, "v", dim, where), get_number_or(j, "b", 0.0, where)};
  } else if (type == "cubic_norm") {
    require_keys(j, {"type", "coef", "center"}, where);
    w.term = CubicNormTerm{vector_or_zero(j, "center", dim, where)};
  } else {
    throw InputError(where + ": unknown term type '" + type + "'");
  }
  return w;
}

json term_to_json(const WeightedTerm& w) {
  json j = std::visit(overloaded{
                          [](const QuadraticTerm& q) {
                            return json{{"type", "quadratic"}, {"diag", vector_to_json(q.diag)},
                                        {"center", vector_to_json(q.center)}};
                          },
                          [](const LinearTerm& l) { return json{{"type", "linear"}, {"v", vector_to_json(l.v)}}; },
                          [](const NormTerm& n) { return json{{"type", "norm"}, {"center", vector_to_json(n.center)}}; },
                          [](const L1Term& l) {
                            return json{{"type", "l1"}, {"weights", vector_to_json(l.weights)},
                                        {"center", vector_to_json(l.center)}};
                          },
                          [](const MaxAffineTerm& m) {
                            json slopes = json::array();
                            for (const auto& a : m.slopes) slopes.push_back(vector_to_json(a));
                            return json{{"type", "max_affine"}, {"slopes", slopes}, {"offsets", m.offsets}};
                          },
                          [](const PositivePartTerm& p) {
                            return json{{"type", "positive_part"}, {"diag", vector_to_json(p.diag)},
                                        {"center", vector_to_json(p.center)}, {"v", vector_to_json(p.v)},
                                        {"b", p.b}};
                          },
                          [](const CubicNormTerm& c) {
                            return json{{"type", "cubic_norm"}, {"center", vector_to_json(c.center)}};
                          },
                      },
                      w.term);
  j["coef"] = w.coef;
  return j;
}

}  // namespace

Expression expression_from_json(const json& j) {
  const std::string where = "expression";
  require_keys(j, {"dim", "terms", "constant"}, where);
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) throw InputError(where + ": 'dim' must be an integer");
  const int dim = j.at("dim").get<int>();
  if (dim < 1 || dim > 4) throw InputError(where + ": dim must be in 1..4");
  if (!j.contains("terms") || !j.at("terms").is_array()) throw InputError(where + ": 'terms' must be an array");
  std::vector<WeightedTerm> terms;
  for (std::size_t k = 0; k < j.at("terms").size(); ++k) {
    terms.push_back(term_from_json(j.at("terms")[k], dim, where + ".terms[" + std::to_string(k) + "]"));
  }
  return Expression(dim, std::move(terms), get_number_or(j, "constant", 0.0, where));
}

json expression_to_json(const Expression& e) {
  json terms = json::array();
  for (const auto& w : e.terms()) terms.push_back(term_to_json(w));
  return json{{"dim", e.dim()}, {"terms", terms}, {"constant", e.constant()}};
}

json to_json(const CatalogEntry& e) {
  return json{{"id", e.id},
              {"kind", to_string(e.kind)},
              {"params", expression_to_json(e.expr)},
              {"lipschitz_flag", e.lipschitz_flag},
              {"f_regular_flag", e.f_regular_flag},
              {"sweep", {{"center", vector_to_json(e.sweep_center)}, {"radius", e.sweep_radius}}}};
}

Catalog Catalog::from_json(const json& j) {
  if (!j.is_array()) throw InputError("catalog: expected a JSON list of entries");
  Catalog cat;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& e = j[k];
    const std::string where = "catalog[" + std::to_string(k) + "]";
    require_keys(e, {"id", "kind", "params", "lipschitz_flag", "f_regular_flag", "sweep"}, where);
    CatalogEntry entry;
    if (!e.contains("id") || !e.at("id").is_string()) throw InputError(where + ": 'id' must be a string");
    entry.id = e.at("id").get<std::string>();
    if (cat.find(entry.id) != nullptr) throw InputError(where + ": duplicate id '" + entry.id + "'");
    if (!e.contains("kind") || !e.at("kind").is_string()) throw InputError(where + ": 'kind' must be a string");
    entry.kind = kind_from_string(e.at("kind").get<std::string>(), where);
    if (!e.contains("params")) throw InputError(where + ": missing 'params'");
    entry.expr = expression_from_json(e.at("params"));
    for (const char* flag : {"lipschitz_flag", "f_regular_flag"}) {
      if (!e.contains(flag) || !e.at(flag).is_boolean()) {
        throw InputError(where + ": '" + flag + "' must be a boolean");
      }
    }
    entry.lipschitz_flag = e.at("lipschitz_flag").get<bool>();
    entry.f_regular_flag = e.at("f_regular_flag").get<bool>();
    if (entry.f_regular_flag && !entry.expr.f_regular()) {
      throw InputError(where + ": f_regular_flag is set but a nonsmooth term has a negative coefficient");
    }
    if (entry.kind == EntryKind::smooth && !entry.expr.smooth()) {
      throw InputError(where + ": kind 'smooth' with a nonsmooth term");
    }
    if (entry.kind == EntryKind::convex && !entry.expr.convex()) {
      throw InputError(where + ": kind 'convex' with a nonconvex term");
    }
    entry.sweep_center = Vector::Zero(entry.expr.dim());
    if (e.contains("sweep")) {
      const json& s = e.at("sweep");
      require_keys(s, {"center", "radius"}, where + ".sweep");
      if (s.contains("center")) entry.sweep_center = get_vector(s, "center", where + ".sweep");
      entry.sweep_radius = get_number_or(s, "radius", 1.0, where + ".sweep");
      if (entry.sweep_center.size() != entry.expr.dim() || !(entry.sweep_radius > 0)) {
        throw InputError(where + ": bad sweep block");
      }
    }
    cat.entries_.push_back(std::move(entry));
  }
  return cat;
}

Catalog Catalog::parse(const std::string& text) { return from_json(parse_json(text, "catalog")); }

Catalog Catalog::load(const std::string& path) { return from_json(read_json_file(path)); }

const CatalogEntry* Catalog::find(const std::string& id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const CatalogEntry& Catalog::at(const std::string& id) const {
  if (const auto* e = find(id)) return *e;
  throw InputError("unknown catalog entry '" + id + "'");
}

const std::string& Catalog::builtin_text() {
  static const std::string text = R"json([
  {"id": "half_sq_norm", "kind": "smooth", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "quadratic", "diag": [1, 1]}]}},
  {"id": "neg_sq_norm", "kind": "smooth", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "quadratic", "diag": [-2, -2]}]}},
  {"id": "saddle", "kind": "smooth", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "quadratic", "diag": [2, -2]}]}},
  {"id": "neg_cubic_norm", "kind": "smooth", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "cubic_norm", "coef": -1}]}},
  {"id": "l1_norm", "kind": "convex", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "l1"}]}},
  {"id": "euclidean_norm", "kind": "convex", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "norm"}]}},
  {"id": "max_norm", "kind": "convex", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "max_affine", "slopes": [[1, 0], [-1, 0], [0, 1], [0, -1]],
                                   "offsets": [0, 0, 0, 0]}]}},
  {"id": "norm_plus_quadratic", "kind": "sum", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "norm"}, {"type": "quadratic", "diag": [1, 1]}]}},
  {"id": "composite_shell", "kind": "composite", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "positive_part", "diag": [2, 2], "b": -1},
                                  {"type": "quadratic", "diag": [2, 2]}]},
   "sweep": {"radius": 1.5}},
  {"id": "half_plane_hinge", "kind": "composite", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 2, "terms": [{"type": "positive_part", "v": [1, 0], "b": -0.5}]}},
  {"id": "abs_1d", "kind": "convex", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 1, "terms": [{"type": "l1"}]}},
  {"id": "sq_1d", "kind": "smooth", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 1, "terms": [{"type": "quadratic", "diag": [2]}]}},
  {"id": "hinge_1d", "kind": "composite", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 1, "terms": [{"type": "positive_part", "v": [1], "b": -1}]},
   "sweep": {"radius": 2}},
  {"id": "neg_linear_1d", "kind": "smooth", "lipschitz_flag": true, "f_regular_flag": true,
   "params": {"dim": 1, "terms": [{"type": "linear", "v": [-1]}]}},
  {"id": "neg_abs_1d", "kind": "composite", "lipschitz_flag": true, "f_regular_flag": false,
   "params": {"dim": 1, "terms": [{"type": "l1", "coef": -1}]}}
])json";
  return text;
}

const Catalog& Catalog::builtin() {
  static const Catalog cat = parse(builtin_text());
  return cat;
}

}  // namespace plrkit
