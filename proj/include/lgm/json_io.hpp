#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lgm/lie_catalog.hpp"
#include "lgm/moments.hpp"
#include "lgm/wilson_loop.hpp"

namespace lgm {

using json = nlohmann::json;

/// [re, im]
json complex_to_json(cplx v);
cplx complex_from_json(const json& j);

/// {"shape": [...], "entries": [{"idx": [...], "re": x, "im": y}, ...]};
/// entries with magnitude below 1e-14 are left out.
json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const json& j);

/// Rows of [re, im] pairs.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json group_spec_to_json(const GroupSpec& s);
GroupSpec group_spec_from_json(const json& j);

/// {"rep": {...}, "scale": [re, im], "factors": [{"coeff": matrix, "sign": s}, ...]}
json loop_to_json(const WilsonLoop& w);
WilsonLoop loop_from_json(const json& j);

/// A product of loops: a single loop record, a list of loop records, or
/// {"loops": [...]}.
std::vector<WilsonLoop> loop_product_from_json(const json& j);

/// List of terms; a term is a loop record, or {"pair": [loop, ...], "coeff": [re, im]}
/// for a product of loops.
json loop_sum_to_json(const LoopSum& s);
LoopSum loop_sum_from_json(const json& j);

json spectrum_to_json(const std::vector<SpectrumEntry>& s);

/// Reads and parses a JSON file; throws DomainError if it is missing or malformed.
json read_json_file(const std::string& path);

} // namespace lgm
