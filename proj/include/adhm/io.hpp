#pragma once

#include <json.hpp>
#include <string>

#include "adhm/adhm_data.hpp"
#include "adhm/sosp.hpp"

namespace adhm {

using nlohmann::json;

// Diagram report: {kind, rank, adjacency, marks, orientation}
json diagram_to_json(const AffineDiagram& d);

// Parameter files: {zeta_re: [...], zeta_c: [[re, im], ...]}
json parameter_to_json(const Parameter& z);
Parameter parameter_from_json(const json& j, const AffineDiagram& d);

// ADHM files: {diagram: {kind, rank}, v, w, B: {arrow_id: matrix}, a, b,
// dual_frame}; matrices are row-major arrays of [re, im] pairs, arrow ids
// follow the deterministic orientation enumeration.
json adhm_to_json(const ADHMData& x);
ADHMData adhm_from_json(const json& j);

json forms_to_json(const FormData& f);
FormData forms_from_json(const json& j, const AffineDiagram& d);

struct Report {
    double residual = 0.0;
    int stabilizer_dim = 0;
    int tangent_dim = -1;  // -1 when not computed
    bool fixed = false;
    bool has_fixed = false;
};

json report_to_json(const Report& r);

std::string dump_canonical(const json& j);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace adhm
