#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rgflow {

enum class ValueRange : std::uint8_t {
    Spin = 0,  // entries exactly -1 or +1
    Real = 1,  // entries in [-1, 1]
};

/// A set of flattened square images/lattices, one sample per row.
struct Dataset {
    Eigen::MatrixXd samples;  // sample_count x side*side, row-major semantics
    int side = 0;
    ValueRange range = ValueRange::Spin;
    std::string provenance;
    std::vector<std::uint8_t> labels;  // optional metadata, empty if absent

    Eigen::Index sample_count() const { return samples.rows(); }
    Eigen::Index dimension() const { return samples.cols(); }
};

/// Throws std::invalid_argument if the container invariants are violated
/// (non-square dimension, spin entries not exactly +-1, real entries outside
/// [-1, 1], non-finite values).
void validate_dataset(const Dataset& dataset);

/// Binary container, little-endian:
///   magic "RGDS", version u32, sample_count u32, side u32, range u8,
///   then sample_count*side^2 f64 values, sample-major.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// Deterministic shuffle (by seed) followed by a split at train_count.
/// Both parts record the shuffle seed and slice in their provenance.
std::pair<Dataset, Dataset> shuffle_split(const Dataset& dataset,
                                          Eigen::Index train_count,
                                          std::uint64_t seed);

}  // namespace rgflow
