#pragma once

#include <filesystem>
#include <optional>

#include "rgflow/dataset.hpp"

namespace rgflow {

/// Parses big-endian IDX image files (magic 0x00000803, u8 pixels, square
/// images) into a real-valued dataset via x -> 2 * (x / 255) - 1. When a
/// labels path is given (magic 0x00000801) the labels are kept as metadata.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::optional<std::filesystem::path>& labels_path = std::nullopt);

}  // namespace rgflow
