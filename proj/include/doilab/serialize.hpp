#ifndef DOILAB_SERIALIZE_HPP
#define DOILAB_SERIALIZE_HPP

#include <string>

#include "doilab/spectral.hpp"
#include "json.hpp"

namespace doilab {

/// {"dim": n, "re": [row-major], "im": [row-major]}; non-square matrices
/// carry "rows"/"cols" instead of "dim".
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

/// {"dim": n, "basis": <matrix>, "pairs": [[x1, x2], ...], "residual": r}
nlohmann::json spectrum_to_json(const JointSpectrum& spec);
/// Validates ||U*U - I|| <= 1e-10.
JointSpectrum spectrum_from_json(const nlohmann::json& j);

/// Writes via a temporary sibling file and rename.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace doilab

#endif  // DOILAB_SERIALIZE_HPP
