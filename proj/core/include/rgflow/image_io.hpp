#pragma once

#include <filesystem>
#include <optional>

#include "rgflow/dataset.hpp"
#include "rgflow/rbm.hpp"

namespace rgflow {

struct ImageFolderOptions {
    int target_side = 100;
    bool grayscale = true;               // luma 0.299 R + 0.587 G + 0.114 B
    std::optional<int> tile;             // split each image into tile x tile pieces first
};

struct ImageFolderResult {
    Dataset dataset;
    int decoded_files = 0;
    int skipped_files = 0;  // undecodable files, reported and skipped
};

/// Ingests every decodable image under `folder` (sorted by filename):
/// grayscale -> optional tiling -> bilinear resize to target_side ->
/// map to [-1, 1]. Throws when the folder yields no samples at all.
ImageFolderResult load_image_folder(const std::filesystem::path& folder,
                                    const ImageFolderOptions& options);

/// Renders a grid of flattened grayscale images ([-1, 1] expected values or
/// (0, 1) probabilities are both accepted) as an 8-bit PNG: one row per
/// sample, one column per variant.
void write_image_grid_png(const std::filesystem::path& path,
                          const std::vector<std::vector<Eigen::VectorXd>>& grid_rows,
                          int side, bool values_are_probabilities);

}  // namespace rgflow
