#include "rgflow/idx_io.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace rgflow {

namespace {

std::uint32_t read_be_u32(std::istream& in) {
    unsigned char bytes[4] = {};
    in.read(reinterpret_cast<char*>(bytes), 4);
    return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
           (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

}  // namespace

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::optional<std::filesystem::path>& labels_path) {
    std::ifstream in(images_path, std::ios::binary);
    if (!in) throw std::runtime_error("load_idx: cannot open " + images_path.string());

    const std::uint32_t magic = read_be_u32(in);
    if (!in || magic != 0x00000803u)
        throw std::runtime_error("load_idx: bad image magic in " + images_path.string());
    const std::uint32_t count = read_be_u32(in);
    const std::uint32_t rows = read_be_u32(in);
    const std::uint32_t cols = read_be_u32(in);
    if (!in) throw std::runtime_error("load_idx: truncated header in " + images_path.string());
    if (rows != cols)
        throw std::runtime_error("load_idx: images are not square in " + images_path.string());

    Dataset ds;
    ds.side = static_cast<int>(rows);
    ds.range = ValueRange::Real;
    ds.provenance = "idx:" + images_path.filename().string();
    const Eigen::Index dim = Eigen::Index(rows) * cols;
    ds.samples.resize(count, dim);
    std::vector<unsigned char> pixel_row(static_cast<std::size_t>(dim));
    for (std::uint32_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(pixel_row.data()), static_cast<std::streamsize>(dim));
        if (!in) throw std::runtime_error("load_idx: truncated pixels in " + images_path.string());
        for (Eigen::Index j = 0; j < dim; ++j)
            ds.samples(i, j) = 2.0 * (static_cast<double>(pixel_row[static_cast<std::size_t>(j)]) / 255.0) - 1.0;
    }

    if (labels_path) {
        std::ifstream lin(*labels_path, std::ios::binary);
        if (!lin) throw std::runtime_error("load_idx: cannot open " + labels_path->string());
        const std::uint32_t label_magic = read_be_u32(lin);
        if (!lin || label_magic != 0x00000801u)
            throw std::runtime_error("load_idx: bad label magic in " + labels_path->string());
        const std::uint32_t label_count = read_be_u32(lin);
        if (label_count != count)
            throw std::runtime_error("load_idx: label/image count mismatch");
        ds.labels.resize(count);
        lin.read(reinterpret_cast<char*>(ds.labels.data()), count);
        if (!lin) throw std::runtime_error("load_idx: truncated labels in " + labels_path->string());
    }
    return ds;
}

}  // namespace rgflow
