#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "loopalg/linkrep.hpp"
#include "loopalg/spectral.hpp"
#include "loopalg/tl.hpp"
#include "loopalg/wenzl.hpp"

namespace loopalg {

using json = nlohmann::json;

// LinkState <-> {"n": N, "partner": [...]} with -1 for defects
json link_state_to_json(const LinkState& v);
LinkState link_state_from_json(const json& j);

// TLElement <-> [{"partner": [...], "coeff": [re, im]}, ...]
json tl_element_to_json(const TLElement& x);
TLElement tl_element_from_json(const json& j, int n);

// Matrices: JSON {"shape": [r, c], "data": [[re, im], ...]} (row-major);
// CSV row-major with "re+imi" entries
json matrix_to_json(const MatrixXc& m);
std::string matrix_to_csv(const MatrixXc& m);

json jordan_report_to_json(const JordanReport& r);
json singularity_report_to_json(const SingularityReport& r);

// Deterministic fixed-precision number formatting used by all reports.
std::string format_double(double x);
std::string format_cplx(cplx z);

}  // namespace loopalg
