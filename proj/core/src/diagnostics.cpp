#include "rgflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgflow/rgm.hpp"
#include "rgflow/rng.hpp"

namespace rgflow {

namespace {

/// Retained-eigenvector basis of a subset's covariance: eigenvalues >=
/// eigen_floor * max (and positive).
Eigen::MatrixXd retained_basis(const Eigen::MatrixXd& rows, double eigen_floor) {
    const Eigen::MatrixXd cov = data_covariance(rows);
    const EigenModes modes = top_covariance_modes(cov, static_cast<int>(cov.rows()));
    const double top = modes.eigenvalues.size() > 0 ? modes.eigenvalues(0) : 0.0;
    if (top <= 0.0) return Eigen::MatrixXd(rows.cols(), 0);
    int keep = 0;
    while (keep < modes.eigenvalues.size() && modes.eigenvalues(keep) >= eigen_floor * top)
        ++keep;
    return modes.eigenvectors.leftCols(keep);
}

Eigen::MatrixXd draw_subset(const Dataset& dataset, Eigen::Index count, Rng& rng) {
    Eigen::MatrixXd rows(count, dataset.dimension());
    for (Eigen::Index i = 0; i < count; ++i) {
        const auto pick = static_cast<Eigen::Index>(
            rng.uniform_below(static_cast<std::uint64_t>(dataset.sample_count())));
        rows.row(i) = dataset.samples.row(pick);
    }
    return rows;
}

}  // namespace

Eigen::MatrixXd projector(const Eigen::MatrixXd& orthonormal_columns, bool reorthonormalize) {
    Eigen::MatrixXd basis = orthonormal_columns;
    const Eigen::Index k = basis.cols();
    if (k == 0) return Eigen::MatrixXd::Zero(basis.rows(), basis.rows());

    const Eigen::MatrixXd gram = basis.transpose() * basis;
    const double deviation =
        (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (deviation > 1e-8) {
        if (!reorthonormalize)
            throw std::invalid_argument("projector: columns not orthonormal (deviation " +
                                        std::to_string(deviation) + ")");
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
        basis = qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), k);
    }
    return basis * basis.transpose();
}

AlignmentReport alignment_spectrum(const Eigen::MatrixXd& p_data,
                                   const Eigen::MatrixXd& p_trained) {
    if (p_data.rows() != p_data.cols() || p_trained.rows() != p_trained.cols() ||
        p_data.rows() != p_trained.rows())
        throw std::invalid_argument("alignment_spectrum: projector dimensions differ");

    const Eigen::MatrixXd overlap = p_data * p_trained * p_data;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (overlap + overlap.transpose()));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("alignment_spectrum: eigendecomposition failed");

    AlignmentReport report;
    report.eigenvalues = solver.eigenvalues().reverse();
    for (double threshold : {0.8, 0.5, 0.1}) {
        int count = 0;
        for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
            if (report.eigenvalues(i) > threshold) ++count;
        report.count_above[threshold] = count;
    }
    report.subspace_dims = {static_cast<int>(std::lround(p_data.trace())),
                            static_cast<int>(std::lround(p_trained.trace()))};
    return report;
}

SolvabilityReport solvability_check(const Dataset& dataset, const SolvabilityConfig& config) {
    if (config.trials < 2)
        throw std::invalid_argument("solvability_check: need at least 2 trials");
    if (dataset.sample_count() < 2)
        throw std::invalid_argument("solvability_check: dataset too small");

    const Eigen::Index n = dataset.sample_count();
    Eigen::Index start = config.initial_subset_size > 0 ? config.initial_subset_size
                                                        : std::max<Eigen::Index>(2, n / 10);
    start = std::min(start, n);

    SolvabilityReport report;

    // Degenerate data has nothing to disagree about.
    if (data_covariance(dataset).cwiseAbs().maxCoeff() <= 1e-14) {
        report.stable = true;
        report.trivially_stable = true;
        return report;
    }

    Rng root(config.rng_seed);
    std::vector<Eigen::MatrixXd> bases;
    for (int trial = 0; trial < config.trials; ++trial) {
        Rng rng = root.split(static_cast<std::uint64_t>(trial));
        Eigen::Index size = start;
        Eigen::MatrixXd basis = retained_basis(draw_subset(dataset, size, rng), config.eigen_floor);
        int unchanged = 0;
        while (unchanged < 2 && size < n) {
            const Eigen::Index grown = std::min<Eigen::Index>(
                n, std::max<Eigen::Index>(size + 1,
                                          static_cast<Eigen::Index>(
                                              std::llround(config.growth_factor *
                                                           static_cast<double>(size)))));
            Eigen::MatrixXd next = retained_basis(draw_subset(dataset, grown, rng),
                                                  config.eigen_floor);
            unchanged = (next.cols() <= basis.cols()) ? unchanged + 1 : 0;
            basis = std::move(next);
            size = grown;
        }
        report.retained_per_trial.push_back(static_cast<int>(basis.cols()));
        report.final_subset_sizes.push_back(size);
        bases.push_back(std::move(basis));
    }

    const Eigen::Index dim = dataset.dimension();
    const int max_retained =
        *std::max_element(report.retained_per_trial.begin(), report.retained_per_trial.end());
    // All (or nearly all) directions retained: no low-dimensional effective
    // description, which the criterion counts as not solvable.
    report.full_rank = max_retained >= static_cast<int>(0.9 * static_cast<double>(dim));

    bool all_aligned = true;
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            const AlignmentReport pair_report = alignment_spectrum(
                projector(bases[i], true), projector(bases[j], true));
            const int k = std::min(static_cast<int>(bases[i].cols()),
                                   static_cast<int>(bases[j].cols()));
            double mean_top = 0.0;
            if (k > 0) mean_top = pair_report.eigenvalues.head(k).mean();
            report.pairwise_alignment.push_back(mean_top);
            report.pairwise_reports.push_back(pair_report);
            if (k == 0 || mean_top < config.stability_threshold) all_aligned = false;
        }

    report.stable = all_aligned && !report.full_rank;
    return report;
}

}  // namespace rgflow
