#pragma once

#include "fbp/analytic1d.hpp"
#include "fbp/diagnostics.hpp"
#include "fbp/flatness.hpp"
#include "fbp/minimize.hpp"
#include "fbp/whitney.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace fbp {

using Json = nlohmann::ordered_json;

/// %.17g
std::string fmt17(double v);

/// {"schema_version": 1, "report": kind, ...body}
Json make_report(const std::string& kind, const Json& body);
void write_json(std::ostream& os, const Json& j);
void write_json_file(const std::string& path, const Json& j);

Json to_json(const EnergyBreakdown<double>& e);
Json to_json(const SolveReport& r);
Json to_json(const PiecewiseCubic& p);
Json to_json(const Example1Profile& p);
Json to_json(const Example2Solution& s);
Json to_json(const JunctionReport& r);
Json to_json(const QuadraticForm2D& p);
Json to_json(const FlatnessReport& r);
Json to_json(const BlowupClass& c);
Json to_json(const CoveringReport& r);
Json to_json(const WhitneyDecomposition& d, const WhitneyAudit& a);
Json to_json(const RatioTable& t);
Json to_json(const BmoReport& b);
Json to_json(const LaplacianLowerBound& l);
Json to_json(const MonotoneTrace& t);

/// A,a_h,J_h,converged
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
/// r,E,Q_cum with Q_cum the Q-term integrated from the first radius.
void write_monotone_csv(std::ostream& os, const MonotoneTrace& t);

}  // namespace fbp
