#pragma once

#include <optional>
#include <ostream>

#include "plrkit/determination.hpp"
#include "plrkit/ekeland.hpp"
#include "plrkit/io.hpp"
#include "plrkit/orbit.hpp"
#include "plrkit/plr.hpp"
#include "plrkit/slope.hpp"

namespace plrkit {

/// Finite values as numbers, +inf as the string "+inf".
json ext_to_json(const ExtReal& v);

/// {c, c_prime} and, when delta is known, {delta, delta_prime, delta_hat}.
json constants_json(double c, std::optional<double> delta);

json report_json(const SlopeEstimate& s, const MetricSpace& space, PointIndex x);
json report_json(const EkelandResult& r, const MetricSpace& space);
json report_json(const PlrCertificate& cert);
json report_json(const SeriesReport& r);
json report_json(const SharpMinReport& r);
json report_json(const StarReport& r);
json report_json(const LengthBoundReport& r);
json report_json(const Orbit& orbit, const MultiMap& s, const MetricSpace& space);
json report_json(const OneSidedReport& r);
json report_json(const DeterminationReport& r);

/// point, f, g, f-g-a, slope_f, slope_g
void write_csv(const DeterminationReport& r, std::ostream& out);

/// Two columns "radius max_deviation": the largest |f - g - a| within each radius of x_bar.
void write_plot(const DeterminationReport& r, const Vector& x_bar, std::ostream& out, int bins = 20);

}  // namespace plrkit
