#pragma once
// JSON serialization (stable key order, lossless doubles) and CSV emission.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "curvdisk/curvature.hpp"
#include "curvdisk/diagnostics.hpp"
#include "curvdisk/field.hpp"
#include "curvdisk/paths.hpp"
#include "curvdisk/solver.hpp"

namespace curvdisk {

using Json = nlohmann::ordered_json;

Json to_json(const GridSpec& g);
GridSpec grid_from_json(const Json& j);

Json to_json(const DiskField& f);          // {grid, values: row-major}
DiskField field_from_json(const Json& j);

Json to_json(const BoundaryFunction& g);
BoundaryFunction boundary_from_json(const Json& j);

Json to_json(const BubbleParams& p);       // {a: [ax, ay], phi, k, hh}
BubbleParams bubble_params_from_json(const Json& j);

Json to_json(const EnergyBreakdown& e);
Json to_json(const ConstraintState& s);
Json to_json(const HypothesisReport& r);
Json to_json(const SolveReport& r, bool embed_field = true);
Json to_json(const ContinuationTrace& t);
Json to_json(const IdentityResiduals& r);
Json to_json(const BlowupFit& f, bool embed_field = false);
Json to_json(const LocalizationVerdict& v);
Json to_json(const DegreeReport& d);

// CSV: '.' decimal, LF endings, header row, shortest-roundtrip doubles.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_csv_rows(const std::filesystem::path& path,
                    const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

std::string format_double(double v);  // shortest round-trip

void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace curvdisk
