#include "rgflow/rgm.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "rgflow/spectral.hpp"

namespace rgflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_real(double max_imag, const char* what) {
    if (max_imag > 1e-8)
        throw std::runtime_error(std::string(what) +
                                 ": residual imaginary part " + std::to_string(max_imag));
}

/// Renders sum over the signed block of C(k,p) * exp(sign * i 2 pi (l k + n p) / side)
/// / side^2. Returns the real lattice vector; throws if it is not real.
Eigen::VectorXd render_block(const FourierModeBlock& coeffs, int side, double half_weight,
                             int sign, const char* what) {
    if (side < 1) throw std::invalid_argument("render_block: bad side");
    const int a = coeffs.alpha;
    const int width = 2 * a + 1;
    if (coeffs.block.rows() != width || coeffs.block.cols() != width)
        throw std::invalid_argument("render_block: malformed coefficient block");

    // Separable: phase(l, k) per axis, then a rank-(2a+1) complex product.
    Eigen::MatrixXcd axis(side, width);
    for (int l = 0; l < side; ++l)
        for (int k = -a; k <= a; ++k) {
            const double phase = sign * 2.0 * kPi * static_cast<double>(l) * k / side;
            axis(l, k + a) = std::complex<double>(std::cos(phase), std::sin(phase));
        }
    const Eigen::MatrixXcd grid = axis * (half_weight * coeffs.block) * axis.transpose();

    Eigen::VectorXd out(Eigen::Index(side) * side);
    double max_imag = 0.0;
    const double norm = 1.0 / (static_cast<double>(side) * side);
    for (int l = 0; l < side; ++l)
        for (int n = 0; n < side; ++n) {
            const std::complex<double> z = grid(l, n) * norm;
            max_imag = std::max(max_imag, std::abs(z.imag()));
            out(Eigen::Index(l) * side + n) = z.real();
        }
    check_real(max_imag, what);
    return out;
}

void apply_sign_convention(Eigen::MatrixXd& vectors) {
    for (Eigen::Index col = 0; col < vectors.cols(); ++col) {
        Eigen::Index arg_max = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double mag = std::abs(vectors(i, col));
            if (mag > best) {
                best = mag;
                arg_max = i;
            }
        }
        if (vectors(arg_max, col) < 0.0) vectors.col(col) *= -1.0;
    }
}

}  // namespace

Eigen::MatrixXd data_covariance(const Dataset& dataset) {
    return data_covariance(dataset.samples);
}

Eigen::MatrixXd data_covariance(const Eigen::MatrixXd& sample_rows) {
    if (sample_rows.rows() < 2)
        throw std::invalid_argument("data_covariance: need at least 2 samples");
    const Eigen::RowVectorXd mean = sample_rows.colwise().mean();
    const Eigen::MatrixXd centered = sample_rows.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(sample_rows.rows());
}

EigenModes top_covariance_modes(const Eigen::MatrixXd& covariance, int kappa) {
    if (covariance.rows() != covariance.cols())
        throw std::invalid_argument("top_covariance_modes: matrix not square");
    const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
    if (((covariance - covariance.transpose()).cwiseAbs().maxCoeff()) > 1e-8 * scale)
        throw std::invalid_argument("top_covariance_modes: matrix not symmetric");
    if (kappa < 0 || kappa > covariance.rows())
        throw std::invalid_argument("top_covariance_modes: kappa out of range");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        0.5 * (covariance + covariance.transpose()));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("top_covariance_modes: eigendecomposition failed");

    // Eigen returns ascending order; take the tail reversed.
    const Eigen::Index n = covariance.rows();
    EigenModes modes;
    modes.eigenvalues.resize(kappa);
    modes.eigenvectors.resize(n, kappa);
    for (int i = 0; i < kappa; ++i) {
        modes.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
        modes.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    apply_sign_convention(modes.eigenvectors);
    return modes;
}

FourierModeBlock fourier_truncate(const Eigen::VectorXd& vec, int side, int alpha) {
    if (vec.size() != Eigen::Index(side) * side)
        throw std::invalid_argument("fourier_truncate: length is not side^2");
    if (alpha < 0) throw std::invalid_argument("fourier_truncate: negative alpha");
    if (2 * alpha + 1 > side)
        throw std::invalid_argument("fourier_truncate: alpha too large for lattice");

    Eigen::MatrixXd lattice(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) lattice(r, c) = vec(Eigen::Index(r) * side + c);
    const Eigen::MatrixXcd f = dft2d_unshifted(lattice);

    FourierModeBlock coeffs;
    coeffs.alpha = alpha;
    coeffs.source_side = side;
    coeffs.block.resize(2 * alpha + 1, 2 * alpha + 1);
    for (int k = -alpha; k <= alpha; ++k)
        for (int p = -alpha; p <= alpha; ++p)
            coeffs.block(k + alpha, p + alpha) = f((k + side) % side, (p + side) % side);
    return coeffs;
}

Eigen::VectorXd truncated_visible_vector(const FourierModeBlock& coeffs, int side) {
    return render_block(coeffs, side, 1.0, +1, "truncated_visible_vector");
}

Eigen::VectorXd truncated_hidden_vector(const FourierModeBlock& coeffs, int side) {
    return render_block(coeffs, side, 0.5, -1, "truncated_hidden_vector");
}

double estimate_singular_value(const Eigen::VectorXd& vec, const BlockSpinSpec& block_spec) {
    return estimate_singular_value(vec, block_spin_matrix(block_spec));
}

double estimate_singular_value(const Eigen::VectorXd& vec, const Eigen::MatrixXd& block_matrix) {
    return apply_block_spin(vec, block_matrix).norm();
}

Eigen::MatrixXd assemble_rgm_weights(const std::vector<FourierModeBlock>& coeffs,
                                     const Eigen::VectorXd& singular_values,
                                     const RgmConfig& config) {
    if (singular_values.size() != Eigen::Index(coeffs.size()))
        throw std::invalid_argument("assemble_rgm_weights: one singular value per mode required");
    if (config.visible_side < 1 || config.hidden_side < 1)
        throw std::invalid_argument("assemble_rgm_weights: lattice sides unset");

    const Eigen::Index nv = Eigen::Index(config.visible_side) * config.visible_side;
    const Eigen::Index nh = Eigen::Index(config.hidden_side) * config.hidden_side;
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(nv, nh);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const Eigen::VectorXd u = truncated_visible_vector(coeffs[i], config.visible_side);
        const Eigen::VectorXd w = truncated_hidden_vector(coeffs[i], config.hidden_side);
        weights.noalias() += singular_values(static_cast<Eigen::Index>(i)) * u * w.transpose();
    }
    return config.gain * weights;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> rgm_biases(const Eigen::VectorXd& top_visible,
                                                       const Eigen::VectorXd& top_hidden,
                                                       double top_singular_value) {
    return {top_singular_value * top_visible, top_singular_value * top_hidden};
}

RbmParams build_rgm(const Dataset& dataset, const RgmConfig& config) {
    if (config.visible_side != dataset.side)
        throw std::invalid_argument("build_rgm: dataset side does not match config");
    if (config.hidden_side < 1) throw std::invalid_argument("build_rgm: hidden_side unset");

    const int alpha = config.alpha > 0
                          ? config.alpha
                          : std::max(1, static_cast<int>(std::lround(config.visible_side / 8.0)));
    if (alpha > config.hidden_side)
        throw std::invalid_argument("build_rgm: alpha exceeds hidden side");

    const Eigen::MatrixXd covariance = data_covariance(dataset);
    const Eigen::Index nh = Eigen::Index(config.hidden_side) * config.hidden_side;

    int kappa = config.kappa;
    EigenModes modes;
    if (kappa >= 0) {
        kappa = static_cast<int>(std::min<Eigen::Index>(kappa, std::min(nh, covariance.rows())));
        modes = top_covariance_modes(covariance, kappa);
    } else {
        // Default: keep eigenvalues >= 1% of the largest, capped by N_h.
        modes = top_covariance_modes(
            covariance, static_cast<int>(std::min<Eigen::Index>(nh, covariance.rows())));
        const double floor = 0.01 * std::max(0.0, modes.eigenvalues.size() > 0 ? modes.eigenvalues(0) : 0.0);
        int keep = 0;
        while (keep < modes.eigenvalues.size() && modes.eigenvalues(keep) >= floor &&
               modes.eigenvalues(keep) > 0.0)
            ++keep;
        modes.eigenvalues.conservativeResize(keep);
        modes.eigenvectors.conservativeResize(Eigen::NoChange, keep);
        kappa = keep;
    }

    // Drop genuinely degenerate directions so zero-variance data builds a
    // zero machine instead of amplifying arbitrary eigenvectors.
    const double top = modes.eigenvalues.size() > 0 ? modes.eigenvalues(0) : 0.0;
    int effective = 0;
    while (effective < kappa && modes.eigenvalues(effective) > 1e-12 * top &&
           modes.eigenvalues(effective) > 0.0)
        ++effective;

    BlockSpinSpec block_spec = config.block_spec;
    if (block_spec.visible_side == 0) {
        block_spec.visible_side = config.visible_side;
        if (block_spec.stride == 0) block_spec.stride = 2;
        if (block_spec.block_size == 0) block_spec.block_size = 4;
    }
    const Eigen::MatrixXd block_matrix = block_spin_matrix(block_spec);

    std::vector<FourierModeBlock> coeffs;
    coeffs.reserve(static_cast<std::size_t>(effective));
    Eigen::VectorXd values(effective);
    for (int i = 0; i < effective; ++i) {
        coeffs.push_back(fourier_truncate(modes.eigenvectors.col(i), config.visible_side, alpha));
        values(i) = estimate_singular_value(modes.eigenvectors.col(i), block_matrix);
    }

    RbmParams params;
    params.visible_side = config.visible_side;
    params.hidden_side = config.hidden_side;
    RgmConfig resolved = config;
    resolved.alpha = alpha;
    resolved.kappa = effective;
    params.weights = assemble_rgm_weights(coeffs, values, resolved);

    const Eigen::Index nv = Eigen::Index(config.visible_side) * config.visible_side;
    if (effective > 0) {
        Eigen::VectorXd u = truncated_visible_vector(coeffs[0], config.visible_side);
        Eigen::VectorXd w = truncated_hidden_vector(coeffs[0], config.hidden_side);
        const double u_norm = u.norm(), w_norm = w.norm();
        if (u_norm > 1e-12) u /= u_norm;
        if (w_norm > 1e-12) w /= w_norm;
        std::tie(params.visible_bias, params.hidden_bias) = rgm_biases(u, w, values(0));
    } else {
        params.visible_bias = Eigen::VectorXd::Zero(nv);
        params.hidden_bias = Eigen::VectorXd::Zero(nh);
    }
    return params;
}

}  // namespace rgflow
