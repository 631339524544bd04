#include "rgflow/block_spin.hpp"

#include <stdexcept>

namespace rgflow {

void validate_spec(const BlockSpinSpec& spec) {
    if (spec.visible_side < 2) throw std::invalid_argument("BlockSpinSpec: visible_side < 2");
    if (spec.block_size < 1) throw std::invalid_argument("BlockSpinSpec: block_size < 1");
    if (spec.stride < 1) throw std::invalid_argument("BlockSpinSpec: stride < 1");
    if (spec.visible_side % spec.stride != 0)
        throw std::invalid_argument("BlockSpinSpec: stride must divide visible_side");
}

Eigen::MatrixXd block_spin_matrix(const BlockSpinSpec& spec) {
    validate_spec(spec);
    const int lv = spec.visible_side;
    const int lh = spec.hidden_side();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(Eigen::Index(lv) * lv, Eigen::Index(lh) * lh);
    for (int b = 0; b < lh; ++b)
        for (int c = 0; c < lh; ++c) {
            const Eigen::Index col = Eigen::Index(b) * lh + c;
            for (int dr = 0; dr < spec.block_size; ++dr)
                for (int dc = 0; dc < spec.block_size; ++dc) {
                    const int r = b * spec.stride + dr;
                    const int s = c * spec.stride + dc;
                    if (r >= lv || s >= lv) continue;  // overhang discarded, no wrap
                    m(Eigen::Index(r) * lv + s, col) = 1.0;
                }
        }
    return m;
}

Eigen::VectorXd apply_block_spin(const Eigen::VectorXd& v, const Eigen::MatrixXd& matrix) {
    if (v.size() != matrix.rows())
        throw std::invalid_argument("apply_block_spin: dimension mismatch");
    return matrix.transpose() * v;
}

SvdBundle block_spin_svd_profile(const BlockSpinSpec& spec) {
    SvdBundle bundle = svd(block_spin_matrix(spec));
    bundle.visible_side = spec.visible_side;
    bundle.hidden_side = spec.hidden_side();
    return bundle;
}

RbmParams block_spin_as_rbm(const BlockSpinSpec& spec) {
    RbmParams p;
    p.visible_side = spec.visible_side;
    p.hidden_side = spec.hidden_side();
    p.weights = block_spin_matrix(spec);
    p.visible_bias = Eigen::VectorXd::Zero(p.weights.rows());
    p.hidden_bias = Eigen::VectorXd::Zero(p.weights.cols());
    return p;
}

}  // namespace rgflow
