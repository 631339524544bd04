#include "rgflow/dataset.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "rgflow/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts need byte swaps");

namespace rgflow {

namespace {

constexpr char kMagic[4] = {'R', 'G', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void validate_dataset(const Dataset& dataset) {
    if (dataset.side < 1)
        throw std::invalid_argument("dataset: side must be positive");
    if (dataset.samples.cols() != Eigen::Index(dataset.side) * dataset.side)
        throw std::invalid_argument("dataset: dimension is not side^2");
    for (Eigen::Index i = 0; i < dataset.samples.rows(); ++i) {
        for (Eigen::Index j = 0; j < dataset.samples.cols(); ++j) {
            const double x = dataset.samples(i, j);
            if (!std::isfinite(x))
                throw std::invalid_argument("dataset: non-finite entry");
            if (dataset.range == ValueRange::Spin) {
                if (x != 1.0 && x != -1.0)
                    throw std::invalid_argument("dataset: spin entry not +-1");
            } else if (x < -1.0 || x > 1.0) {
                throw std::invalid_argument("dataset: entry outside [-1, 1]");
            }
        }
    }
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    if (dataset.samples.rows() == 0)
        throw std::invalid_argument("save_dataset: refusing to write empty dataset");
    validate_dataset(dataset);

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_dataset: cannot open " + tmp.string());
        out.write(kMagic, 4);
        write_u32(out, kVersion);
        write_u32(out, static_cast<std::uint32_t>(dataset.samples.rows()));
        write_u32(out, static_cast<std::uint32_t>(dataset.side));
        const std::uint8_t tag = static_cast<std::uint8_t>(dataset.range);
        out.write(reinterpret_cast<const char*>(&tag), 1);
        for (Eigen::Index i = 0; i < dataset.samples.rows(); ++i)
            for (Eigen::Index j = 0; j < dataset.samples.cols(); ++j) {
                const double x = dataset.samples(i, j);
                out.write(reinterpret_cast<const char*>(&x), sizeof x);
            }
        if (!out) throw std::runtime_error("save_dataset: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path.string());

    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_dataset: bad magic in " + path.string());
    const std::uint32_t version = read_u32(in);
    if (version != kVersion)
        throw std::runtime_error("load_dataset: unsupported version in " + path.string());
    const std::uint32_t count = read_u32(in);
    const std::uint32_t side = read_u32(in);
    std::uint8_t tag = 0;
    in.read(reinterpret_cast<char*>(&tag), 1);
    if (!in || tag > 1)
        throw std::runtime_error("load_dataset: corrupt header in " + path.string());

    Dataset ds;
    ds.side = static_cast<int>(side);
    ds.range = static_cast<ValueRange>(tag);
    ds.provenance = "rgds:" + path.filename().string();
    ds.samples.resize(count, Eigen::Index(side) * side);
    for (std::uint32_t i = 0; i < count; ++i)
        for (Eigen::Index j = 0; j < ds.samples.cols(); ++j) {
            double x = 0;
            in.read(reinterpret_cast<char*>(&x), sizeof x);
            ds.samples(i, j) = x;
        }
    if (!in) throw std::runtime_error("load_dataset: truncated file " + path.string());
    validate_dataset(ds);
    return ds;
}

std::pair<Dataset, Dataset> shuffle_split(const Dataset& dataset,
                                          Eigen::Index train_count,
                                          std::uint64_t seed) {
    const Eigen::Index n = dataset.sample_count();
    if (train_count < 0 || train_count > n)
        throw std::invalid_argument("shuffle_split: train_count out of range");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    Rng rng(seed);
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }

    auto take = [&](Eigen::Index begin, Eigen::Index end, const char* tag) {
        Dataset part;
        part.side = dataset.side;
        part.range = dataset.range;
        part.samples.resize(end - begin, dataset.samples.cols());
        if (!dataset.labels.empty()) part.labels.reserve(static_cast<std::size_t>(end - begin));
        for (Eigen::Index i = begin; i < end; ++i) {
            const Eigen::Index src = order[static_cast<std::size_t>(i)];
            part.samples.row(i - begin) = dataset.samples.row(src);
            if (!dataset.labels.empty())
                part.labels.push_back(dataset.labels[static_cast<std::size_t>(src)]);
        }
        part.provenance = dataset.provenance + ";shuffle(seed=" + std::to_string(seed) +
                          ");" + tag + "[" + std::to_string(begin) + ":" +
                          std::to_string(end) + "]";
        return part;
    };
    return {take(0, train_count, "train"), take(train_count, n, "heldout")};
}

}  // namespace rgflow
