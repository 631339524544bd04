#pragma once

#include <Eigen/Dense>

#include "rgflow/rbm.hpp"
#include "rgflow/spectral.hpp"

namespace rgflow {

/// Real-space coarse-graining rule: a block_size x block_size window anchored
/// at the top-left corner of the lattice, advanced by stride per output site.
/// Window cells falling outside the lattice are discarded (no wraparound),
/// so stride must divide visible_side exactly: hidden_side = visible_side / stride.
struct BlockSpinSpec {
    int visible_side = 0;
    int block_size = 2;
    int stride = 2;

    int hidden_side() const { return visible_side / stride; }
};

void validate_spec(const BlockSpinSpec& spec);

/// Column (b, c) holds 1 at every visible site covered by the block for
/// output site (b, c), 0 elsewhere. Shape: visible_side^2 x hidden_side^2.
/// Applying the transpose to a flattened lattice produces block sums, i.e.
/// overlapping block-spin coarse graining when block_size > stride.
Eigen::MatrixXd block_spin_matrix(const BlockSpinSpec& spec);

/// matrix^T * v: the coarse-grained (block-summed) image of v.
Eigen::VectorXd apply_block_spin(const Eigen::VectorXd& v, const Eigen::MatrixXd& matrix);

/// SVD of the coarse-graining matrix, singular values descending.
SvdBundle block_spin_svd_profile(const BlockSpinSpec& spec);

/// The block matrix packaged as RBM parameters (zero biases), for use as a
/// training initial condition.
RbmParams block_spin_as_rbm(const BlockSpinSpec& spec);

}  // namespace rgflow
