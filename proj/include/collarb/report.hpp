#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "collarb/beneficial.hpp"
#include "collarb/cara.hpp"
#include "collarb/model_io.hpp"
#include "collarb/polytope.hpp"

namespace collarb {

/// Result of one CLI verb. Rationals render as "p/q" strings, floats with 12
/// significant digits; key order is fixed so output can be diffed.
struct Report {
  std::string verb;
  std::string status;
  Json payload = Json::object();
  double seconds = 0;
};

/// Float rounded to 12 significant digits (non-finite values become strings).
Json float_json(double x);
Json float_array(std::span<const double> v);

Report report_validate(const ModelDocument& doc);
Report report_arbitrage(const ModelDocument& doc);
Report report_measures(const ModelDocument& doc, const VertexOptions& vopts = {});
Report report_minimax(const ModelDocument& doc, const MinimaxOptions& opts = {});
Report report_beneficial(const ModelDocument& doc, const PolarityOptions& opts = {});

struct CaraQuery {
  CaraRegionSpec spec;
  std::optional<std::pair<double, double>> point;  ///< (α, β) to test
  int boundary_samples = 10;
  int random_points = 0;  ///< interior points to sample and check
  std::uint64_t seed = 1;
};
Report report_cara(const CaraQuery& query);

/// One JSON line, newline-terminated.
std::string render_structured(const Report& report);
/// Indented key/value listing for people.
std::string render_table(const Report& report);

}  // namespace collarb
