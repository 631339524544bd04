#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace rgflow {

/// Full singular value decomposition of a weight-like matrix. Columns of
/// visible_vectors/hidden_vectors are the left/right singular vectors; the
/// sides record the square-lattice geometry when known (0 otherwise).
struct SvdBundle {
    Eigen::VectorXd singular_values;  // descending, >= 0
    Eigen::MatrixXd visible_vectors;  // rows x rank, orthonormal columns
    Eigen::MatrixXd hidden_vectors;   // cols x rank, orthonormal columns
    int visible_side = 0;
    int hidden_side = 0;

    Eigen::Index rank() const { return singular_values.size(); }
};

/// SVD with a deterministic sign convention: each visible vector's
/// largest-magnitude component is made positive (ties broken by lowest
/// index) and the paired hidden vector is flipped to match.
/// Sides are inferred when the matrix dimensions are perfect squares.
SvdBundle svd(const Eigen::MatrixXd& matrix);

struct TruncationRule {
    enum class Kind { TopK, RelativeFloor };
    Kind kind = Kind::RelativeFloor;
    int top_k = 0;
    double relative_floor = 0.0;

    static TruncationRule keep_top(int k) { return {Kind::TopK, k, 0.0}; }
    static TruncationRule keep_above(double floor) { return {Kind::RelativeFloor, 0, floor}; }
};

/// Keeps the leading triples: those with S_I >= floor * S_1, or the top k.
/// A floor > 1 empties the bundle and is rejected.
SvdBundle truncate_svd(const SvdBundle& bundle, const TruncationRule& rule);

/// Unnormalized 2D DFT, F(u, v) = sum_{m,n} f(m, n) exp(-i 2 pi (m u + n v) / L),
/// indices unshifted (DC at (0, 0)).
Eigen::MatrixXcd dft2d_unshifted(const Eigen::MatrixXd& lattice);

/// Same transform, center-shifted: DC sits at index (L/2, L/2) (the usual
/// fftshift layout), frequency increases radially from the center.
Eigen::MatrixXcd fft2d(const Eigen::MatrixXd& lattice);

/// Radially averaged spectrum: bin b collects frequency sites with
/// round(sqrt(u^2 + v^2)) == b measured from the zero-frequency center.
/// magnitudes holds the mean of |F| per bin (what gets plotted); power holds
/// the exact sum of |F|^2 per bin, so that sum(power) equals the total 2D
/// power and energy fractions are exact.
struct RadialSpectrum {
    Eigen::VectorXd magnitudes;   // mean |F| per integer mode, index = mode
    Eigen::VectorXd power;        // sum |F|^2 per mode
    std::vector<int> bin_counts;  // frequency sites per mode

    Eigen::Index mode_count() const { return magnitudes.size(); }
};

/// Reshapes a flattened square lattice, transforms, and bins radially.
RadialSpectrum radial_fft(const Eigen::VectorXd& vec, int side);

/// Fraction of total spectral power carried by modes <= cutoff_mode.
double low_mode_support(const RadialSpectrum& spectrum, int cutoff_mode);

struct VhAgreement {
    double rescale = 0.0;              // multiplier applied to the hidden spectrum
    double relative_difference = 0.0;  // L2, on shared modes, relative to visible
    int shared_mode_count = 0;         // modes 0 .. floor(hidden_side/2)
};

/// Compares the radial spectra of visible and hidden singular vector I on
/// the modes both lattices share. When rescale is absent it is fitted by
/// least squares; nominal value for a stride-2 geometry is 2 (the hidden
/// spectrum is half the visible one on shared modes).
VhAgreement compare_visible_hidden(const SvdBundle& bundle, int index,
                                   std::optional<double> rescale = std::nullopt);

/// Independent-parameter count after spectral truncation: of N_v * N_h raw
/// weights, kept_k singular triples retain kept_k * N_v coefficients (hidden
/// vectors share them), and restricting radial support to cutoff_mode out of
/// max_mode scales the count by (cutoff_mode / max_mode)^2, truncated toward
/// zero. Mode counts grow quadratically with radius, hence the square.
std::int64_t effective_parameter_count(std::int64_t n_visible, std::int64_t n_hidden,
                                       std::int64_t kept_k, std::int64_t cutoff_mode,
                                       std::int64_t max_mode);

}  // namespace rgflow
