#include "rgflow/rbm.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rgflow {

namespace {

void check_dims(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " entries, got " + std::to_string(got));
}

}  // namespace

void validate_params(const RbmParams& params) {
    if (params.visible_side < 1 || params.hidden_side < 1)
        throw std::invalid_argument("RbmParams: sides must be positive");
    if (params.weights.rows() != Eigen::Index(params.visible_side) * params.visible_side ||
        params.weights.cols() != Eigen::Index(params.hidden_side) * params.hidden_side)
        throw std::invalid_argument("RbmParams: weight shape inconsistent with sides");
    if (params.visible_bias.size() != params.weights.rows() ||
        params.hidden_bias.size() != params.weights.cols())
        throw std::invalid_argument("RbmParams: bias length inconsistent with weights");
    if (!params.weights.allFinite() || !params.visible_bias.allFinite() ||
        !params.hidden_bias.allFinite())
        throw std::invalid_argument("RbmParams: non-finite entry");
}

RbmParams xavier_init(int visible_side, int hidden_side, Rng& rng) {
    RbmParams p;
    p.visible_side = visible_side;
    p.hidden_side = hidden_side;
    const Eigen::Index nv = Eigen::Index(visible_side) * visible_side;
    const Eigen::Index nh = Eigen::Index(hidden_side) * hidden_side;
    const double bound = std::sqrt(6.0 / static_cast<double>(nv + nh));
    p.weights.resize(nv, nh);
    for (Eigen::Index i = 0; i < nv; ++i)
        for (Eigen::Index a = 0; a < nh; ++a)
            p.weights(i, a) = bound * (2.0 * rng.uniform() - 1.0);
    p.visible_bias = Eigen::VectorXd::Zero(nv);
    p.hidden_bias = Eigen::VectorXd::Zero(nh);
    return p;
}

double rbm_energy(const Eigen::VectorXd& v, const Eigen::VectorXd& h, const RbmParams& params) {
    check_dims(v.size(), params.weights.rows(), "rbm_energy visible state");
    check_dims(h.size(), params.weights.cols(), "rbm_energy hidden state");
    return -v.dot(params.weights * h) - v.dot(params.visible_bias) - h.dot(params.hidden_bias);
}

Eigen::VectorXd hidden_activation_prob(const Eigen::VectorXd& v, const RbmParams& params) {
    check_dims(v.size(), params.weights.rows(), "hidden_activation_prob input");
    Eigen::VectorXd field = params.weights.transpose() * v + params.hidden_bias;
    return 0.5 * (1.0 + field.array().tanh());
}

Eigen::VectorXd visible_activation_prob(const Eigen::VectorXd& h, const RbmParams& params) {
    check_dims(h.size(), params.weights.cols(), "visible_activation_prob input");
    Eigen::VectorXd field = params.weights * h + params.visible_bias;
    return 0.5 * (1.0 + field.array().tanh());
}

Eigen::MatrixXd hidden_activation_prob_batch(const Eigen::MatrixXd& v_rows, const RbmParams& params) {
    check_dims(v_rows.cols(), params.weights.rows(), "hidden_activation_prob_batch input");
    Eigen::MatrixXd field = (v_rows * params.weights).rowwise() + params.hidden_bias.transpose();
    return 0.5 * (1.0 + field.array().tanh());
}

Eigen::MatrixXd visible_activation_prob_batch(const Eigen::MatrixXd& h_rows, const RbmParams& params) {
    check_dims(h_rows.cols(), params.weights.cols(), "visible_activation_prob_batch input");
    Eigen::MatrixXd field = (h_rows * params.weights.transpose()).rowwise() + params.visible_bias.transpose();
    return 0.5 * (1.0 + field.array().tanh());
}

Eigen::VectorXd sample_binary(const Eigen::VectorXd& probs, Rng& rng) {
    Eigen::VectorXd out(probs.size());
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        const double p = probs(i);
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("sample_binary: probability outside [0, 1]");
        out(i) = (rng.uniform() < p) ? 1.0 : -1.0;
    }
    return out;
}

Eigen::MatrixXd sample_binary(const Eigen::MatrixXd& probs, Rng& rng) {
    Eigen::MatrixXd out(probs.rows(), probs.cols());
    for (Eigen::Index r = 0; r < probs.rows(); ++r)
        for (Eigen::Index c = 0; c < probs.cols(); ++c) {
            const double p = probs(r, c);
            if (p < 0.0 || p > 1.0)
                throw std::invalid_argument("sample_binary: probability outside [0, 1]");
            out(r, c) = (rng.uniform() < p) ? 1.0 : -1.0;
        }
    return out;
}

Cd1Gradient cd1_step(const Eigen::MatrixXd& batch, const RbmParams& params, Rng& rng) {
    if (batch.rows() == 0) throw std::invalid_argument("cd1_step: empty batch");
    check_dims(batch.cols(), params.weights.rows(), "cd1_step batch");

    const double inv_n = 1.0 / static_cast<double>(batch.rows());
    const Eigen::MatrixXd h_data = sample_binary(hidden_activation_prob_batch(batch, params), rng);
    const Eigen::MatrixXd v_model = sample_binary(visible_activation_prob_batch(h_data, params), rng);
    const Eigen::MatrixXd h_model = sample_binary(hidden_activation_prob_batch(v_model, params), rng);

    Cd1Gradient g;
    g.weight = inv_n * (batch.transpose() * h_data - v_model.transpose() * h_model);
    g.visible_bias = inv_n * (batch.colwise().sum() - v_model.colwise().sum()).transpose();
    g.hidden_bias = inv_n * (h_data.colwise().sum() - h_model.colwise().sum()).transpose();
    return g;
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& v, const RbmParams& params) {
    const Eigen::VectorXd hidden_expected = 2.0 * hidden_activation_prob(v, params).array() - 1.0;
    return visible_activation_prob(hidden_expected, params);
}

double reconstruction_error(const Eigen::MatrixXd& samples, const RbmParams& params) {
    check_dims(samples.cols(), params.weights.rows(), "reconstruction_error samples");
    const Eigen::MatrixXd hidden_expected =
        2.0 * hidden_activation_prob_batch(samples, params).array() - 1.0;
    const Eigen::MatrixXd visible_expected =
        2.0 * visible_activation_prob_batch(hidden_expected, params).array() - 1.0;
    return (samples - visible_expected).squaredNorm() /
           static_cast<double>(samples.rows() * samples.cols());
}

TrainResult train(const Dataset& dataset, const TrainConfig& config, RbmParams init) {
    if (dataset.sample_count() == 0) throw std::invalid_argument("train: empty dataset");
    validate_params(init);
    check_dims(dataset.dimension(), init.weights.rows(), "train dataset dimension");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
    if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");

    TrainResult result;
    result.params = std::move(init);
    Rng rng(config.rng_seed);

    const Eigen::Index n = dataset.sample_count();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle_each_epoch) {
            for (Eigen::Index i = n - 1; i > 0; --i) {
                const auto j = static_cast<Eigen::Index>(
                    rng.uniform_below(static_cast<std::uint64_t>(i + 1)));
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
            }
        }
        for (Eigen::Index start = 0; start < n; start += config.batch_size) {
            const Eigen::Index count = std::min<Eigen::Index>(config.batch_size, n - start);
            Eigen::MatrixXd batch(count, dataset.dimension());
            for (Eigen::Index r = 0; r < count; ++r)
                batch.row(r) = dataset.samples.row(order[static_cast<std::size_t>(start + r)]);
            const Cd1Gradient g = cd1_step(batch, result.params, rng);
            result.params.weights += config.learning_rate * g.weight;
            result.params.visible_bias += config.learning_rate * g.visible_bias;
            result.params.hidden_bias += config.learning_rate * g.hidden_bias;
        }
        result.epoch_error.push_back(reconstruction_error(dataset.samples, result.params));
    }
    return result;
}

std::vector<TrainResult> train_stacked(const Dataset& dataset,
                                       const std::vector<StackLayerSpec>& layers,
                                       const std::vector<RbmParams>& inits) {
    if (layers.size() != inits.size())
        throw std::invalid_argument("train_stacked: one init per layer required");

    std::vector<TrainResult> results;
    Dataset current = dataset;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& layer = layers[k];
        if (inits[k].hidden_side != layer.hidden_side ||
            inits[k].visible_side * inits[k].visible_side != current.dimension())
            throw std::invalid_argument("train_stacked: layer " + std::to_string(k) +
                                        " dimensions break the chain");
        results.push_back(train(current, layer.config, inits[k]));

        if (k + 1 < layers.size()) {
            const RbmParams& trained = results.back().params;
            Dataset next;
            next.side = layer.hidden_side;
            next.provenance = current.provenance + ";hidden(layer=" + std::to_string(k) + ")";
            Eigen::MatrixXd probs = hidden_activation_prob_batch(current.samples, trained);
            if (layer.config.stack_transfer == StackTransfer::Sampled) {
                Rng rng(layer.config.rng_seed ^ 0x5743'4b58'4645'4544ULL);
                next.samples = sample_binary(probs, rng);
                next.range = ValueRange::Spin;
            } else {
                next.samples = 2.0 * probs.array() - 1.0;
                next.range = ValueRange::Real;
            }
            current = std::move(next);
        }
    }
    return results;
}

}  // namespace rgflow
