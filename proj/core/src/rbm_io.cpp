#include "rgflow/rbm_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "rgflow/csv.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts need byte swaps");

namespace rgflow {

namespace {

constexpr char kMagic[4] = {'R', 'B', 'M', 'W'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_rbm(const RbmParams& params, const std::filesystem::path& path) {
    validate_params(params);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_rbm: cannot open " + tmp.string());
        out.write(kMagic, 4);
        auto write_u32 = [&out](std::uint32_t v) {
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        };
        write_u32(kVersion);
        write_u32(static_cast<std::uint32_t>(params.visible_side));
        write_u32(static_cast<std::uint32_t>(params.hidden_side));
        auto write_f64 = [&out](double x) {
            out.write(reinterpret_cast<const char*>(&x), sizeof x);
        };
        for (Eigen::Index i = 0; i < params.weights.rows(); ++i)
            for (Eigen::Index a = 0; a < params.weights.cols(); ++a) write_f64(params.weights(i, a));
        for (Eigen::Index i = 0; i < params.visible_bias.size(); ++i) write_f64(params.visible_bias(i));
        for (Eigen::Index a = 0; a < params.hidden_bias.size(); ++a) write_f64(params.hidden_bias(a));
        if (!out) throw std::runtime_error("save_rbm: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

RbmParams load_rbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_rbm: cannot open " + path.string());

    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_rbm: bad magic in " + path.string());
    auto read_u32 = [&in]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        return v;
    };
    const std::uint32_t version = read_u32();
    if (version != kVersion)
        throw std::runtime_error("load_rbm: unsupported version in " + path.string());
    RbmParams p;
    p.visible_side = static_cast<int>(read_u32());
    p.hidden_side = static_cast<int>(read_u32());
    if (!in || p.visible_side < 1 || p.hidden_side < 1)
        throw std::runtime_error("load_rbm: corrupt header in " + path.string());

    const Eigen::Index nv = Eigen::Index(p.visible_side) * p.visible_side;
    const Eigen::Index nh = Eigen::Index(p.hidden_side) * p.hidden_side;
    auto read_f64 = [&in]() {
        double x = 0;
        in.read(reinterpret_cast<char*>(&x), sizeof x);
        return x;
    };
    p.weights.resize(nv, nh);
    for (Eigen::Index i = 0; i < nv; ++i)
        for (Eigen::Index a = 0; a < nh; ++a) p.weights(i, a) = read_f64();
    p.visible_bias.resize(nv);
    for (Eigen::Index i = 0; i < nv; ++i) p.visible_bias(i) = read_f64();
    p.hidden_bias.resize(nh);
    for (Eigen::Index a = 0; a < nh; ++a) p.hidden_bias(a) = read_f64();
    if (!in) throw std::runtime_error("load_rbm: truncated file " + path.string());
    validate_params(p);
    return p;
}

void export_rbm_csv(const RbmParams& params, const std::filesystem::path& prefix) {
    validate_params(params);
    {
        CsvWriter weights(prefix.string() + "_weights.csv",
                          {"visible_index", "hidden_index", "value"});
        for (Eigen::Index i = 0; i < params.weights.rows(); ++i)
            for (Eigen::Index a = 0; a < params.weights.cols(); ++a)
                weights.row({static_cast<double>(i), static_cast<double>(a), params.weights(i, a)});
    }
    {
        CsvWriter biases(prefix.string() + "_biases.csv", {"layer", "index", "value"});
        for (Eigen::Index i = 0; i < params.visible_bias.size(); ++i)
            biases.row({0.0, static_cast<double>(i), params.visible_bias(i)});
        for (Eigen::Index a = 0; a < params.hidden_bias.size(); ++a)
            biases.row({1.0, static_cast<double>(a), params.hidden_bias(a)});
    }
}

}  // namespace rgflow
