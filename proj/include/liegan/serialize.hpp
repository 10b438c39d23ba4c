#pragma once

#include <filesystem>
#include <utility>

#include <nlohmann/json_fwd.hpp>

#include "liegan/basis.hpp"
#include "liegan/matrix.hpp"

namespace liegan {

/// {"field": "real"|"complex", "rows": r, "cols": c, "data": [[..], ..]};
/// complex entries serialize as [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

/// Basis bundle: channel matrices plus metadata (c, k, field, structure,
/// coefficient distribution kind and parameters).
nlohmann::json basis_to_json(const LieBasis& basis, const CoefficientDistribution& dist);
std::pair<LieBasis, CoefficientDistribution> basis_from_json(const nlohmann::json& j);

void save_basis(const std::filesystem::path& path, const LieBasis& basis,
                const CoefficientDistribution& dist);
std::pair<LieBasis, CoefficientDistribution> load_basis(const std::filesystem::path& path);

} // namespace liegan
