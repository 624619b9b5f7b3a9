#include "plrkit/report.hpp"

#include <algorithm>
#include <cmath>

namespace plrkit {

namespace {

json optional_vector(const std::optional<PlrViolation>& v) {
  if (!v) return nullptr;
  return json{{"x", vector_to_json(v->x)}, {"y", vector_to_json(v->y)}, {"p", vector_to_json(v->p)},
              {"margin", v->margin}};
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "+inf" : (v < 0 ? "-inf" : "nan");
}

std::string point_text(const Vector& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? " " : "") + format_double(x[i]);
  return s;
}

}  // namespace

json ext_to_json(const ExtReal& v) {
  if (v.is_infinite()) return "+inf";
  return v.value();
}

json constants_json(double c, std::optional<double> delta) {
  json j{{"c", c}, {"c_prime", c_prime(c)}};
  if (delta) {
    j["delta"] = *delta;
    j["delta_prime"] = delta_prime(c, *delta);
    j["delta_hat"] = delta_hat(c, *delta);
  }
  return j;
}

json report_json(const SlopeEstimate& s, const MetricSpace& space, PointIndex x) {
  json j{{"point", space.label(x)}, {"value", ext_to_json(s.value)}, {"capped", s.capped}};
  j["resolution"] = s.resolution ? json(*s.resolution) : json(nullptr);
  j["witness"] = s.witness ? json(space.label(*s.witness)) : json(nullptr);
  return j;
}

json report_json(const EkelandResult& r, const MetricSpace& space) {
  json path = json::array();
  for (PointIndex p : r.path) path.push_back(space.label(p));
  json j{{"x0", space.label(r.x0)},
         {"x_lambda", space.label(r.x_lambda)},
         {"lambda", r.lambda},
         {"decrease", r.decrease},
         {"distance_margin", r.check.distance_margin},
         {"strict_margin", finite_or_string(r.check.strict_margin)},
         {"ok", r.check.ok},
         {"path", path}};
  j["violator"] = r.check.violator ? json(space.label(*r.check.violator)) : json(nullptr);
  return j;
}

json report_json(const PlrCertificate& cert) {
  json violations = json::array();
  for (const auto& v : cert.violations) violations.push_back(optional_vector(v));
  const double spacing = cert.sampling.spacing > 0.0 ? cert.sampling.spacing : cert.delta / 20.0;
  return json{{"pass", cert.pass},
              {"center", vector_to_json(cert.center)},
              {"constants", constants_json(cert.c, cert.delta)},
              {"spacing", spacing},
              {"points", cert.points},
              {"anchors", cert.anchors},
              {"pairs", cert.pairs},
              {"tolerance", cert.sampling.tolerance},
              {"worst_margin", finite_or_string(cert.worst_margin)},
              {"worst", optional_vector(cert.worst)},
              {"violations", violations}};
}

json report_json(const SeriesReport& r) {
  json j{{"c", r.c},         {"sum_a", r.s},           {"b", r.b},         {"bound", finite_or_string(r.bound)},
         {"max_b", r.max_b}, {"hypothesis_ok", r.hypothesis_ok}, {"bound_ok", r.bound_ok}};
  j["hypothesis_violation"] = r.hypothesis_violation ? json(*r.hypothesis_violation) : json(nullptr);
  j["bound_violation"] = r.bound_violation ? json(*r.bound_violation) : json(nullptr);
  return j;
}

json report_json(const SharpMinReport& r) {
  return json{{"ok", r.ok},
              {"plr_pass", r.plr_pass},
              {"f1", expression_to_json(r.f1)},
              {"c_prime", r.c_prime},
              {"delta_prime", r.delta_prime},
              {"sampled", r.sampled},
              {"f1_at_center", r.f1_at_center},
              {"min_sampled_f1", r.min_sampled_f1},
              {"center_is_min", r.center_is_min},
              {"min_slope", finite_or_string(r.min_slope)},
              {"min_slope_point", vector_to_json(r.min_slope_point)},
              {"slope_ok", r.slope_ok}};
}

json report_json(const StarReport& r) {
  json j{{"pass", r.pass}, {"checked", r.checked}, {"note", r.note}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  return j;
}

json report_json(const LengthBoundReport& r) {
  json j{{"length", r.length},         {"bound", finite_or_string(r.bound)},
         {"bound_ok", r.bound_ok},     {"telescoped", r.telescoped},
         {"decrease", r.decrease},     {"telescoping_ok", r.telescoping_ok},
         {"ok", r.ok}};
  j["insufficient_step"] = r.insufficient_step ? json(*r.insufficient_step) : json(nullptr);
  return j;
}

json report_json(const Orbit& orbit, const MultiMap& s, const MetricSpace& space) {
  json points = json::array();
  for (PointIndex p : orbit.points) points.push_back(space.label(p));
  json steps = json::array();
  for (std::size_t i = 0; i < orbit.steps.size(); ++i) {
    json step{{"from", space.label(orbit.points[i])}, {"to", space.label(orbit.points[i + 1])},
              {"distance", orbit.steps[i]}};
    if (i < orbit.margins.size()) {
      json m;
      for (std::size_t k = 0; k < s.components.size() && k < orbit.margins[i].size(); ++k) {
        m[s.components[k]] = finite_or_string(orbit.margins[i][k]);
      }
      step["margins"] = m;
    }
    steps.push_back(step);
  }
  return json{{"map", s.name},
              {"points", points},
              {"steps", steps},
              {"length", orbit.length},
              {"termination", to_string(orbit.termination)}};
}

json report_json(const OneSidedReport& r) {
  json dil = json::array();
  for (const auto& d : r.core.dilations) {
    dil.push_back(json{{"dilation", d.dilation},
                       {"ok", d.ok},
                       {"star", d.star.pass},
                       {"ends_at_min", d.ends_at_min},
                       {"orbit_points", d.orbit.points.size()},
                       {"orbit_length", d.orbit.length},
                       {"termination", to_string(d.orbit.termination)},
                       {"length_bound", report_json(d.length)},
                       {"sharp_bound", d.sharp_bound},
                       {"s1_monotone", d.s1_monotone},
                       {"series_ok", d.series_ok},
                       {"min_conclusion", finite_or_string(d.min_conclusion)}});
  }
  json core{{"regular_slope", r.core.regular.pass},
            {"regular_worst_margin", finite_or_string(r.core.regular.worst_margin)},
            {"slope_domination", r.core.slope_domination_ok},
            {"mixed_inequality", r.core.mixed.pass},
            {"mixed_worst_margin", finite_or_string(r.core.mixed.worst_margin)},
            {"mixed_slack", r.core.mixed.tolerance},
            {"gap_ok", r.core.gap_ok},
            {"dilations", dil},
            {"ok", r.core.ok}};
  return json{{"direction", r.direction},
              {"center", vector_to_json(r.center)},
              {"target", vector_to_json(r.target)},
              {"x0", vector_to_json(r.x0)},
              {"delta_c", r.delta_c},
              {"delta_prime", r.delta_prime},
              {"h", r.h},
              {"eps", r.eps},
              {"nu", r.nu},
              {"alpha_max", r.alpha_max},
              {"alpha", r.alpha},
              {"alpha_ok", r.alpha_ok},
              {"p", r.p.size() ? vector_to_json(r.p) : json(nullptr)},
              {"y_points", r.y_points},
              {"y_bounded", r.y_bounded},
              {"sharp_min", r.sharp.ok},
              {"sharp_min_slope", finite_or_string(r.sharp.min_slope)},
              {"core", core},
              {"margin", r.margin},
              {"tolerance", r.tolerance},
              {"margin_ok", r.margin_ok},
              {"ok", r.ok},
              {"failure", r.failure}};
}

json report_json(const DeterminationReport& r) {
  json gate{{"equal", r.gate.equal}, {"points", r.gate.points}, {"directions", r.gate.directions}};
  if (r.gate.witness) {
    gate["witness"] = json{{"x", vector_to_json(r.gate.witness->x)},
                           {"direction", vector_to_json(r.gate.witness->direction)},
                           {"support_f", r.gate.witness->support_f},
                           {"support_g", r.gate.witness->support_g}};
  } else {
    gate["witness"] = nullptr;
  }
  json runs = json::array();
  for (const auto& run : r.runs) runs.push_back(report_json(run));
  json j{{"instance", r.id},
         {"pass", r.pass},
         {"failure", r.failure},
         {"constants", constants_json(r.c, r.delta)},
         {"h", r.h},
         {"eps", r.eps},
         {"plr_f", r.plr_f},
         {"plr_g", r.plr_g},
         {"plr_witness", optional_vector(r.plr_witness)},
         {"gate", gate},
         {"expect_equal", r.expect_equal},
         {"ran", r.ran}};
  if (r.ran) {
    j["a"] = r.a;
    j["expected_a"] = r.expected_a ? json(*r.expected_a) : json(nullptr);
    j["a_ok"] = r.a_ok;
    j["samples"] = r.samples.size();
    j["max_deviation"] = r.max_deviation;
    j["certified_deviation"] = r.certified_deviation;
    j["tolerance"] = r.tolerance;
    j["deviation_ok"] = r.deviation_ok;
    j["density_ok"] = r.density_ok;
    j["two_sided_ok"] = r.two_sided_ok;
    j["runs"] = runs;
  }
  return j;
}

void write_csv(const DeterminationReport& r, std::ostream& out) {
  out << "point,f,g,f-g-a,slope_f,slope_g\n";
  for (const SampleRow& row : r.samples) {
    out << '"' << point_text(row.x) << "\"," << format_double(row.f) << ',' << format_double(row.g) << ','
        << format_double(row.deviation) << ',' << row.slope_f.to_string() << ',' << row.slope_g.to_string() << '\n';
  }
}

void write_plot(const DeterminationReport& r, const Vector& x_bar, std::ostream& out, int bins) {
  if (r.samples.empty() || bins < 1) return;
  for (int b = 1; b <= bins; ++b) {
    const double radius = r.delta_hat * b / bins;
    double worst = 0.0;
    for (const SampleRow& row : r.samples) {
      if ((row.x - x_bar).norm() <= radius) worst = std::max(worst, std::fabs(row.deviation));
    }
    out << format_double(radius) << ' ' << format_double(worst) << '\n';
  }
}

}  // namespace plrkit
