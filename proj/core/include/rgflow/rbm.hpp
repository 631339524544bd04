#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rgflow/dataset.hpp"
#include "rgflow/rng.hpp"

namespace rgflow {

/// Weights and biases of one restricted Boltzmann machine layer. Visible and
/// hidden units live on square lattices; weights(i, a) couples visible unit i
/// to hidden unit a.
struct RbmParams {
    Eigen::MatrixXd weights;       // visible_side^2 x hidden_side^2
    Eigen::VectorXd visible_bias;  // visible_side^2
    Eigen::VectorXd hidden_bias;   // hidden_side^2
    int visible_side = 0;
    int hidden_side = 0;

    Eigen::Index visible_count() const { return weights.rows(); }
    Eigen::Index hidden_count() const { return weights.cols(); }
};

/// Checks finiteness and dimension consistency; throws std::invalid_argument.
void validate_params(const RbmParams& params);

enum class InitMode { Xavier, BlockSpin, Rgm, Explicit };
enum class StackTransfer { Expected, Sampled };

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 100;
    int epochs = 1;
    std::uint64_t rng_seed = 1;
    InitMode init_mode = InitMode::Xavier;
    StackTransfer stack_transfer = StackTransfer::Expected;
    bool shuffle_each_epoch = true;
};

/// Xavier-uniform weights (+-sqrt(6/(N_v+N_h))), zero biases.
RbmParams xavier_init(int visible_side, int hidden_side, Rng& rng);

/// E(v, h) = -v^T W h - v^T b_v - h^T b_h for +-1 state vectors.
double rbm_energy(const Eigen::VectorXd& v, const Eigen::VectorXd& h, const RbmParams& params);

/// p(h_a = 1 | v) = (1 + tanh(W^T v + b_h)_a) / 2, entrywise in (0, 1).
Eigen::VectorXd hidden_activation_prob(const Eigen::VectorXd& v, const RbmParams& params);
/// p(v_i = 1 | h) = (1 + tanh(W h + b_v)_i) / 2.
Eigen::VectorXd visible_activation_prob(const Eigen::VectorXd& h, const RbmParams& params);

/// Row-per-sample versions used by the trainer.
Eigen::MatrixXd hidden_activation_prob_batch(const Eigen::MatrixXd& v_rows, const RbmParams& params);
Eigen::MatrixXd visible_activation_prob_batch(const Eigen::MatrixXd& h_rows, const RbmParams& params);

/// Elementwise Bernoulli draw mapped to {+1, -1}: +1 with probability p.
/// Entries are consumed in index order, one uniform variate each.
Eigen::VectorXd sample_binary(const Eigen::VectorXd& probs, Rng& rng);
Eigen::MatrixXd sample_binary(const Eigen::MatrixXd& probs, Rng& rng);  // row-major consumption

struct Cd1Gradient {
    Eigen::MatrixXd weight;        // <v h>_data - <v h>_model
    Eigen::VectorXd visible_bias;  // <v>_data - <v>_model
    Eigen::VectorXd hidden_bias;   // <h>_data - <h>_model
};

/// One contrastive-divergence step on a batch (one visible vector per row).
/// Chain per sample: h_data ~ p(h|v), v_model ~ p(v|h_data),
/// h_model ~ p(h|v_model); averages are over the batch.
/// Sampling order (for reproducibility): all h_data rows, then all v_model
/// rows, then all h_model rows, each row-major.
Cd1Gradient cd1_step(const Eigen::MatrixXd& batch, const RbmParams& params, Rng& rng);

/// Deterministic reconstruction probabilities: v -> p_h -> expected hidden
/// (2p - 1) -> p(v | expected hidden). Output entries in (0, 1).
Eigen::VectorXd reconstruct(const Eigen::VectorXd& v, const RbmParams& params);

/// Mean squared error between inputs and expected-value reconstructions
/// (2 * reconstruct(v) - 1), averaged over samples and components.
double reconstruction_error(const Eigen::MatrixXd& samples, const RbmParams& params);

struct TrainResult {
    RbmParams params;
    std::vector<double> epoch_error;  // reconstruction MSE after each epoch
};

/// CD-1 gradient ascent on the data term: param += learning_rate * gradient.
/// Runs epochs * ceil(samples / batch_size) updates.
TrainResult train(const Dataset& dataset, const TrainConfig& config, RbmParams init);

struct StackLayerSpec {
    int hidden_side = 0;
    TrainConfig config;
};

/// Greedy layer-wise training: layer k+1 is trained on layer k's hidden
/// activations (expected values 2p-1 by default, or +-1 samples when the
/// layer config selects StackTransfer::Sampled).
std::vector<TrainResult> train_stacked(const Dataset& dataset,
                                       const std::vector<StackLayerSpec>& layers,
                                       const std::vector<RbmParams>& inits);

}  // namespace rgflow
