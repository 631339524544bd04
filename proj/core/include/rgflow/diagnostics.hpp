#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "rgflow/dataset.hpp"

namespace rgflow {

/// Eigenvalues of P_data * P_trained * P_data, the overlap operator of two
/// subspaces. Values near 1 mean a direction of the data subspace is also
/// (nearly) contained in the trained subspace.
struct AlignmentReport {
    Eigen::VectorXd eigenvalues;          // descending, in [0, 1] up to 1e-8
    std::map<double, int> count_above;    // thresholds 0.8 / 0.5 / 0.1
    std::pair<int, int> subspace_dims;    // (rank P_data, rank P_trained)
};

/// P = U U^T for orthonormal columns U. Rejects non-orthonormal input
/// (deviation above 1e-8) unless reorthonormalize is set, in which case a
/// QR-based orthonormal basis of the columns is used instead.
Eigen::MatrixXd projector(const Eigen::MatrixXd& orthonormal_columns,
                          bool reorthonormalize = false);

/// Spectrum of P_data * P_trained * P_data, descending.
AlignmentReport alignment_spectrum(const Eigen::MatrixXd& p_data,
                                   const Eigen::MatrixXd& p_trained);

struct SolvabilityConfig {
    int trials = 4;
    Eigen::Index initial_subset_size = 0;  // 0: one tenth of the dataset
    double eigen_floor = 0.01;             // keep eigenvalues >= floor * max
    double stability_threshold = 0.8;      // mean top-k alignment per pair
    double growth_factor = 1.1;            // subset growth per step
    std::uint64_t rng_seed = 1;
};

struct SolvabilityReport {
    bool stable = false;
    bool trivially_stable = false;   // zero covariance everywhere
    bool full_rank = false;          // no low-dimensional description exists
    std::vector<int> retained_per_trial;
    std::vector<Eigen::Index> final_subset_sizes;
    // mean of the top-min(k_i, k_j) alignment eigenvalues for each pair (i<j),
    // row-major over pairs
    std::vector<double> pairwise_alignment;
    std::vector<AlignmentReport> pairwise_reports;
};

/// Repeatedly draws random sample subsets, grows each subset until the
/// number of retained covariance eigenvectors stops increasing (unchanged
/// across two successive growth steps), then checks that all trials span
/// the same subspace. Stable when every pairwise mean top-k alignment
/// eigenvalue exceeds the threshold and the description is genuinely
/// low-dimensional.
SolvabilityReport solvability_check(const Dataset& dataset, const SolvabilityConfig& config);

}  // namespace rgflow
