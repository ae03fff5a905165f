#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hkflow/flow.hpp"
#include "hkflow/harness.hpp"
#include "hkflow/mesh.hpp"
#include "hkflow/profiles.hpp"

namespace hk {

using nlohmann::json;

// All floating-point CSV output uses 17 significant digits so values
// round-trip bit-exactly.
std::string format_double(double v);

// --- fields ---------------------------------------------------------------
// Header `x,value` (1D) or `x,y,value` (2D), one row per cell, row-major.
void write_field_csv(const Field& field, std::ostream& os);
Field read_field_csv(std::istream& is, const Grid& grid);

// --- trajectories -----------------------------------------------------------
// Header `t,mass` followed by `entropy_<i>,prod_total_<i>,prod_w_<i>,prod_h_<i>`
// per monitor.
void write_series_csv(const Trajectory& traj, std::ostream& os);

struct SeriesTable {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<std::vector<double>> entropy;     // [monitor][sample]
    std::vector<std::vector<double>> prod_total;  // [monitor][sample]
    std::vector<std::vector<double>> prod_w;
    std::vector<std::vector<double>> prod_h;
};
SeriesTable read_series_csv(std::istream& is);

// --- counterexample tables ---------------------------------------------------
// Header `param,entropy,production_w,production_h`.
void write_sequence_csv(const std::vector<SequenceRow>& rows, std::ostream& os);
std::vector<SequenceRow> read_sequence_csv(std::istream& is);

// --- JSON ---------------------------------------------------------------
// Profile objects use the fixed field names {"kind","alpha","p","base"}.
json to_json(const GSpec& g);
json to_json(const PsiSpec& psi);
GSpec g_from_json(const json& j);
PsiSpec psi_from_json(const json& j);

json to_json(const Grid& grid);  // {"domain_kind","n"}
Grid grid_from_json(const json& j);

json to_json(const DensityBuilder& b);
DensityBuilder builder_from_json(const json& j);

json to_json(const EntropyReport& rep);
json to_json(const DecayFit& fit);
json to_json(const ValidationReport& report);

// Infinite ratios are emitted as the string "inf" (JSON has no infinity);
// everything else as numbers.
json to_json(const IneqReport& rep, const std::string& name, const json& params);

}  // namespace hk
