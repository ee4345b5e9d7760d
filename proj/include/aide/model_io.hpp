#pragma once

#include <filesystem>

#include "aide/types.hpp"

namespace aide {

// Versioned JSON document {version, dim, theta[], l2_strength, converged,
// final_objective}. The gradient norm is a training-time quantity and is
// not persisted; loaded params carry NaN there.
void save_model(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_model(const std::filesystem::path& path);

}  // namespace aide
