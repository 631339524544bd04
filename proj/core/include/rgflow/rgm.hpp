#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rgflow/block_spin.hpp"
#include "rgflow/dataset.hpp"
#include "rgflow/rbm.hpp"

namespace rgflow {

/// Parameters of a data-built coarse-graining network: kappa retained
/// covariance modes, per-axis Fourier cutoff alpha, and the block-spin rule
/// used to estimate singular values. gain is a global multiplier on the
/// assembled weights. kappa/alpha <= 0 select the documented defaults at
/// build time (alpha scales with lattice size; kappa keeps eigenvalues
/// >= 1% of the largest).
struct RgmConfig {
    int kappa = -1;
    int alpha = -1;
    BlockSpinSpec block_spec;
    int visible_side = 0;
    int hidden_side = 0;
    double gain = 1.0;
};

/// Retained low-frequency DFT coefficients of one lattice vector: the signed
/// mode block {(k, p) : |k| <= alpha, |p| <= alpha} including DC, stored at
/// block(k + alpha, p + alpha). Real input makes the block conjugate-
/// symmetric under (k, p) -> (-k, -p); renderings below rely on that to
/// produce real vectors. Mode labels map to unshifted DFT indices mod side.
struct FourierModeBlock {
    int alpha = 0;
    int source_side = 0;
    Eigen::MatrixXcd block;  // (2 alpha + 1)^2 coefficients
};

/// Sample covariance (1/N_s normalization) of the flattened samples.
Eigen::MatrixXd data_covariance(const Dataset& dataset);
Eigen::MatrixXd data_covariance(const Eigen::MatrixXd& sample_rows);

struct EigenModes {
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns, paired with values
};

/// Top-kappa eigenpairs of a symmetric matrix, descending, with the same
/// deterministic sign convention as svd().
EigenModes top_covariance_modes(const Eigen::MatrixXd& covariance, int kappa);

/// DFT of a flattened lattice vector with every mode outside the signed
/// block |k|, |p| <= alpha set to zero. Requires 2*alpha + 1 <= side so the
/// block reads off without aliasing.
FourierModeBlock fourier_truncate(const Eigen::VectorXd& vec, int side, int alpha);

/// Renders the retained coefficients back onto a lattice of the given side
/// (inverse DFT with 1/side^2 normalization). The low-pass filtered view of
/// the source vector when side == source_side.
Eigen::VectorXd truncated_visible_vector(const FourierModeBlock& coeffs, int side);

/// Renders the half-weighted conjugate expansion on the (coarser) hidden
/// lattice. For a 2:1 side ratio the 1/2 exactly compensates the lattice
/// renormalization, so an in-band unit-norm source maps to a unit-norm
/// hidden vector whose spectrum is half the visible one.
Eigen::VectorXd truncated_hidden_vector(const FourierModeBlock& coeffs, int side);

/// Norm of the block-spin coarse graining of a (normalized) lattice vector —
/// the coarse-graining rule's own scale for that mode.
double estimate_singular_value(const Eigen::VectorXd& vec, const BlockSpinSpec& block_spec);
double estimate_singular_value(const Eigen::VectorXd& vec, const Eigen::MatrixXd& block_matrix);

/// W = gain * sum_I S_I * visible_render(C_I) * hidden_render(C_I)^T.
/// Equivalent to the direct double Fourier sum over the retained modes;
/// conjugate symmetry of each block makes the result real (residual
/// imaginary parts above 1e-8 are rejected).
Eigen::MatrixXd assemble_rgm_weights(const std::vector<FourierModeBlock>& coeffs,
                                     const Eigen::VectorXd& singular_values,
                                     const RgmConfig& config);

/// Biases favour the dominant mode: S_1 times the (normalized) top visible
/// and hidden vectors.
std::pair<Eigen::VectorXd, Eigen::VectorXd> rgm_biases(const Eigen::VectorXd& top_visible,
                                                       const Eigen::VectorXd& top_hidden,
                                                       double top_singular_value);

/// Full pipeline: covariance -> top modes -> Fourier truncation -> singular
/// value estimates -> weight assembly -> biases. Modes whose covariance
/// eigenvalue is negligible (<= 1e-12 of the largest) are dropped, so a
/// zero-variance dataset yields near-zero parameters.
RbmParams build_rgm(const Dataset& dataset, const RgmConfig& config);

}  // namespace rgflow
