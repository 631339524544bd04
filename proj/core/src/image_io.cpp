#include "rgflow/image_io.hpp"

#include <algorithm>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <stdexcept>
#include <vector>

namespace rgflow {

namespace {

/// ITU-R 601 luma on [0, 255] floats; OpenCV loads channels as B, G, R.
cv::Mat to_luma(const cv::Mat& image) {
    cv::Mat f;
    image.convertTo(f, CV_64F);
    if (f.channels() == 1) return f;
    std::vector<cv::Mat> bgr;
    cv::split(f, bgr);
    return 0.114 * bgr[0] + 0.587 * bgr[1] + 0.299 * bgr[2];
}

}  // namespace

ImageFolderResult load_image_folder(const std::filesystem::path& folder,
                                    const ImageFolderOptions& options) {
    if (!std::filesystem::is_directory(folder))
        throw std::runtime_error("load_image_folder: not a directory: " + folder.string());
    if (options.target_side < 2)
        throw std::invalid_argument("load_image_folder: target_side too small");
    if (options.tile && *options.tile < 1)
        throw std::invalid_argument("load_image_folder: tile count must be positive");

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(folder))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    ImageFolderResult result;
    const Eigen::Index dim = Eigen::Index(options.target_side) * options.target_side;
    std::vector<Eigen::VectorXd> samples;

    for (const auto& file : files) {
        cv::Mat raw = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
        if (raw.empty()) {
            ++result.skipped_files;
            continue;
        }
        ++result.decoded_files;
        cv::Mat luma = to_luma(raw);

        std::vector<cv::Mat> pieces;
        if (options.tile) {
            const int t = *options.tile;
            const int tile_h = luma.rows / t;
            const int tile_w = luma.cols / t;
            if (tile_h < 1 || tile_w < 1)
                throw std::runtime_error("load_image_folder: image too small to tile: " +
                                         file.string());
            for (int r = 0; r < t; ++r)
                for (int c = 0; c < t; ++c)
                    pieces.push_back(
                        luma(cv::Rect(c * tile_w, r * tile_h, tile_w, tile_h)).clone());
        } else {
            pieces.push_back(luma);
        }

        for (const cv::Mat& piece : pieces) {
            cv::Mat resized;
            cv::resize(piece, resized, cv::Size(options.target_side, options.target_side), 0, 0,
                       cv::INTER_LINEAR);
            Eigen::VectorXd v(dim);
            for (int r = 0; r < options.target_side; ++r)
                for (int c = 0; c < options.target_side; ++c) {
                    const double pixel = std::clamp(resized.at<double>(r, c), 0.0, 255.0);
                    v(Eigen::Index(r) * options.target_side + c) = 2.0 * (pixel / 255.0) - 1.0;
                }
            samples.push_back(std::move(v));
        }
    }

    if (samples.empty())
        throw std::runtime_error("load_image_folder: no decodable images in " + folder.string());

    result.dataset.side = options.target_side;
    result.dataset.range = ValueRange::Real;
    result.dataset.provenance =
        "images:" + folder.filename().string() +
        (options.tile ? "(tile=" + std::to_string(*options.tile) + ")" : "");
    result.dataset.samples.resize(static_cast<Eigen::Index>(samples.size()), dim);
    for (std::size_t i = 0; i < samples.size(); ++i)
        result.dataset.samples.row(static_cast<Eigen::Index>(i)) = samples[i];
    return result;
}

void write_image_grid_png(const std::filesystem::path& path,
                          const std::vector<std::vector<Eigen::VectorXd>>& grid_rows,
                          int side, bool values_are_probabilities) {
    if (grid_rows.empty() || grid_rows.front().empty())
        throw std::invalid_argument("write_image_grid_png: empty grid");
    const std::size_t cols = grid_rows.front().size();
    const int pad = 2;
    const int cell = side + pad;
    cv::Mat canvas(static_cast<int>(grid_rows.size()) * cell - pad,
                   static_cast<int>(cols) * cell - pad, CV_8U, cv::Scalar(32));

    for (std::size_t r = 0; r < grid_rows.size(); ++r) {
        if (grid_rows[r].size() != cols)
            throw std::invalid_argument("write_image_grid_png: ragged grid");
        for (std::size_t c = 0; c < cols; ++c) {
            const Eigen::VectorXd& v = grid_rows[r][c];
            if (v.size() != Eigen::Index(side) * side)
                throw std::invalid_argument("write_image_grid_png: cell size mismatch");
            for (int y = 0; y < side; ++y)
                for (int x = 0; x < side; ++x) {
                    const double raw = v(Eigen::Index(y) * side + x);
                    const double p = values_are_probabilities ? raw : (raw + 1.0) / 2.0;
                    canvas.at<unsigned char>(static_cast<int>(r) * cell + y,
                                             static_cast<int>(c) * cell + x) =
                        static_cast<unsigned char>(std::clamp(255.0 * p, 0.0, 255.0));
                }
        }
    }

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp.png";
    if (!cv::imwrite(tmp.string(), canvas))
        throw std::runtime_error("write_image_grid_png: write failed for " + path.string());
    std::filesystem::rename(tmp, path);
}

}  // namespace rgflow
