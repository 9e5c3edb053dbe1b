#pragma once

#include <string>

#include <json.hpp>

#include "uclab/linalg.hpp"

namespace uclab {

/// State/matrix file schema: {"dims":[...], "re":[...], "im":[...]},
/// entries row-major. Doubles round-trip bit-exactly.
nlohmann::json state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const nlohmann::json& j);

void save_state(const std::string& path, const DensityOperator& rho);
DensityOperator load_state(const std::string& path);

/// Writes via a temp file in the same directory plus rename, so an
/// interrupted run leaves no partial file at `path`.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

}  // namespace uclab
