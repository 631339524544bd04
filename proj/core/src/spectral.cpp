#include "rgflow/spectral.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rgflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

int square_side_or_zero(Eigen::Index n) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return (Eigen::Index(side) * side == n) ? side : 0;
}

/// DFT matrix T with T(k, m) = exp(-i 2 pi k m / L).
Eigen::MatrixXcd dft_matrix(int side) {
    Eigen::MatrixXcd t(side, side);
    for (int k = 0; k < side; ++k)
        for (int m = 0; m < side; ++m) {
            const double phase = -2.0 * kPi * static_cast<double>(k) * m / side;
            t(k, m) = std::complex<double>(std::cos(phase), std::sin(phase));
        }
    return t;
}

}  // namespace

SvdBundle svd(const Eigen::MatrixXd& matrix) {
    if (!matrix.allFinite()) throw std::invalid_argument("svd: non-finite entries");

    SvdBundle bundle;
    if (matrix.rows() >= 32 && matrix.cols() >= 32) {
        Eigen::BDCSVD<Eigen::MatrixXd> solver(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
        bundle.singular_values = solver.singularValues();
        bundle.visible_vectors = solver.matrixU();
        bundle.hidden_vectors = solver.matrixV();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> solver(matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
        bundle.singular_values = solver.singularValues();
        bundle.visible_vectors = solver.matrixU();
        bundle.hidden_vectors = solver.matrixV();
    }

    // Deterministic sign: largest-|component| of each visible vector positive.
    for (Eigen::Index col = 0; col < bundle.rank(); ++col) {
        Eigen::Index arg_max = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < bundle.visible_vectors.rows(); ++i) {
            const double mag = std::abs(bundle.visible_vectors(i, col));
            if (mag > best) {
                best = mag;
                arg_max = i;
            }
        }
        if (bundle.visible_vectors(arg_max, col) < 0.0) {
            bundle.visible_vectors.col(col) *= -1.0;
            bundle.hidden_vectors.col(col) *= -1.0;
        }
    }

    bundle.visible_side = square_side_or_zero(matrix.rows());
    bundle.hidden_side = square_side_or_zero(matrix.cols());
    return bundle;
}

SvdBundle truncate_svd(const SvdBundle& bundle, const TruncationRule& rule) {
    Eigen::Index keep = 0;
    if (rule.kind == TruncationRule::Kind::TopK) {
        if (rule.top_k < 0) throw std::invalid_argument("truncate_svd: negative top_k");
        keep = std::min<Eigen::Index>(rule.top_k, bundle.rank());
    } else {
        if (rule.relative_floor > 1.0)
            throw std::invalid_argument("truncate_svd: relative floor above 1 keeps nothing");
        const double cut =
            bundle.rank() > 0 ? rule.relative_floor * bundle.singular_values(0) : 0.0;
        while (keep < bundle.rank() && bundle.singular_values(keep) >= cut) ++keep;
    }

    SvdBundle out;
    out.singular_values = bundle.singular_values.head(keep);
    out.visible_vectors = bundle.visible_vectors.leftCols(keep);
    out.hidden_vectors = bundle.hidden_vectors.leftCols(keep);
    out.visible_side = bundle.visible_side;
    out.hidden_side = bundle.hidden_side;
    return out;
}

Eigen::MatrixXcd dft2d_unshifted(const Eigen::MatrixXd& lattice) {
    if (lattice.rows() != lattice.cols())
        throw std::invalid_argument("dft2d: input must be square");
    const int side = static_cast<int>(lattice.rows());
    const Eigen::MatrixXcd t = dft_matrix(side);
    // F = T f T^T; with T symmetric this evaluates the full double sum.
    return t * lattice.cast<std::complex<double>>() * t.transpose();
}

Eigen::MatrixXcd fft2d(const Eigen::MatrixXd& lattice) {
    const Eigen::MatrixXcd raw = dft2d_unshifted(lattice);
    const int side = static_cast<int>(raw.rows());
    const int half = (side + 1) / 2;
    Eigen::MatrixXcd shifted(side, side);
    for (int u = 0; u < side; ++u)
        for (int v = 0; v < side; ++v) shifted(u, v) = raw((u + half) % side, (v + half) % side);
    return shifted;
}

RadialSpectrum radial_fft(const Eigen::VectorXd& vec, int side) {
    if (vec.size() != Eigen::Index(side) * side)
        throw std::invalid_argument("radial_fft: length is not side^2");

    Eigen::MatrixXd lattice(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) lattice(r, c) = vec(Eigen::Index(r) * side + c);

    const Eigen::MatrixXcd f = fft2d(lattice);
    const int center = side / 2;

    int max_mode = 0;
    for (int u = 0; u < side; ++u)
        for (int v = 0; v < side; ++v) {
            const double du = u - center, dv = v - center;
            max_mode = std::max(
                max_mode, static_cast<int>(std::lround(std::sqrt(du * du + dv * dv))));
        }

    RadialSpectrum spectrum;
    spectrum.magnitudes = Eigen::VectorXd::Zero(max_mode + 1);
    spectrum.power = Eigen::VectorXd::Zero(max_mode + 1);
    spectrum.bin_counts.assign(static_cast<std::size_t>(max_mode) + 1, 0);
    for (int u = 0; u < side; ++u)
        for (int v = 0; v < side; ++v) {
            const double du = u - center, dv = v - center;
            const int mode = static_cast<int>(std::lround(std::sqrt(du * du + dv * dv)));
            const double mag = std::abs(f(u, v));
            spectrum.magnitudes(mode) += mag;
            spectrum.power(mode) += mag * mag;
            ++spectrum.bin_counts[static_cast<std::size_t>(mode)];
        }
    for (int m = 0; m <= max_mode; ++m)
        if (spectrum.bin_counts[static_cast<std::size_t>(m)] > 0)
            spectrum.magnitudes(m) /= spectrum.bin_counts[static_cast<std::size_t>(m)];
    return spectrum;
}

double low_mode_support(const RadialSpectrum& spectrum, int cutoff_mode) {
    if (cutoff_mode < 0) throw std::invalid_argument("low_mode_support: negative cutoff");
    const double total = spectrum.power.sum();
    if (total <= 0.0) return 0.0;
    const Eigen::Index upto = std::min<Eigen::Index>(cutoff_mode + 1, spectrum.power.size());
    return spectrum.power.head(upto).sum() / total;
}

VhAgreement compare_visible_hidden(const SvdBundle& bundle, int index,
                                   std::optional<double> rescale) {
    if (index < 0 || index >= bundle.rank())
        throw std::invalid_argument("compare_visible_hidden: index out of range");
    if (bundle.visible_side == 0 || bundle.hidden_side == 0)
        throw std::invalid_argument("compare_visible_hidden: lattice sides unknown");

    const RadialSpectrum vis =
        radial_fft(bundle.visible_vectors.col(index), bundle.visible_side);
    const RadialSpectrum hid = radial_fft(bundle.hidden_vectors.col(index), bundle.hidden_side);

    const int shared = bundle.hidden_side / 2;
    const Eigen::Index n = std::min<Eigen::Index>(
        {Eigen::Index(shared) + 1, vis.mode_count(), hid.mode_count()});
    const Eigen::VectorXd a = vis.magnitudes.head(n);
    const Eigen::VectorXd b = hid.magnitudes.head(n);

    VhAgreement result;
    result.shared_mode_count = static_cast<int>(n);
    const double b_norm2 = b.squaredNorm();
    result.rescale = rescale ? *rescale : (b_norm2 > 0.0 ? a.dot(b) / b_norm2 : 0.0);
    const double a_norm = a.norm();
    result.relative_difference =
        a_norm > 0.0 ? (a - result.rescale * b).norm() / a_norm : (b_norm2 > 0.0 ? 1.0 : 0.0);
    return result;
}

std::int64_t effective_parameter_count(std::int64_t n_visible, std::int64_t n_hidden,
                                       std::int64_t kept_k, std::int64_t cutoff_mode,
                                       std::int64_t max_mode) {
    if (n_visible <= 0 || n_hidden <= 0 || kept_k <= 0 || max_mode <= 0)
        throw std::invalid_argument("effective_parameter_count: arguments must be positive");
    if (cutoff_mode <= 0) throw std::invalid_argument("effective_parameter_count: zero cutoff");
    if (cutoff_mode > max_mode)
        throw std::invalid_argument("effective_parameter_count: cutoff above max mode");
    // kept_k * N_v coefficients, scaled by (cutoff/max)^2; integer division
    // truncates, matching how the headline counts are usually quoted.
    return kept_k * n_visible * cutoff_mode * cutoff_mode / (max_mode * max_mode);
}

}  // namespace rgflow
