#pragma once

#include <filesystem>

#include "rgflow/rbm.hpp"

namespace rgflow {

/// Binary parameter file, little-endian:
///   magic "RBMW", version u32, visible_side u32, hidden_side u32,
///   weights row-major f64 (N_v * N_h), visible bias f64 (N_v),
///   hidden bias f64 (N_h).
void save_rbm(const RbmParams& params, const std::filesystem::path& path);
RbmParams load_rbm(const std::filesystem::path& path);

/// Debug/interop export: <prefix>_weights.csv (visible_index, hidden_index,
/// value) and <prefix>_biases.csv (layer, index, value).
void export_rbm_csv(const RbmParams& params, const std::filesystem::path& prefix);

}  // namespace rgflow
