#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "rgflow/block_spin.hpp"
#include "rgflow/rng.hpp"
#include "rgflow/spectral.hpp"
#include "support/oracles.hpp"

using namespace rgflow;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = 2.0 * rng.uniform() - 1.0;
    return m;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("identity and diagonal matrices have the obvious spectra") {
    const SvdBundle identity = svd(Eigen::MatrixXd::Identity(5, 5));
    for (Eigen::Index i = 0; i < identity.rank(); ++i)
        CHECK(identity.singular_values(i) == doctest::Approx(1.0));

    Eigen::MatrixXd diagonal = Eigen::MatrixXd::Zero(2, 2);
    diagonal(0, 0) = 3.0;
    diagonal(1, 1) = 1.0;
    const SvdBundle bundle = svd(diagonal);
    CHECK(bundle.singular_values(0) == doctest::Approx(3.0));
    CHECK(bundle.singular_values(1) == doctest::Approx(1.0));
}

TEST_CASE("svd agrees with the one-sided Jacobi oracle") {
    const Eigen::MatrixXd m = random_matrix(6, 4, 77);
    const SvdBundle mine = svd(m);
    const oracle::JacobiSvdResult reference = oracle::jacobi_svd(m);
    REQUIRE(mine.rank() == 4);
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(mine.singular_values(i) == doctest::Approx(reference.values(i)).epsilon(1e-8));
    // Vectors agree up to sign for distinct singular values.
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(mine.visible_vectors.col(i).dot(reference.u.col(i))) ==
              doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(mine.hidden_vectors.col(i).dot(reference.v.col(i))) ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("svd bundles satisfy orthonormality and reconstruction invariants") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const Eigen::MatrixXd m = random_matrix(16, 9, seed);
        const SvdBundle bundle = svd(m);
        const Eigen::Index r = bundle.rank();
        CHECK((bundle.visible_vectors.transpose() * bundle.visible_vectors -
               Eigen::MatrixXd::Identity(r, r))
                  .cwiseAbs()
                  .maxCoeff() < 1e-8);
        CHECK((bundle.hidden_vectors.transpose() * bundle.hidden_vectors -
               Eigen::MatrixXd::Identity(r, r))
                  .cwiseAbs()
                  .maxCoeff() < 1e-8);
        const Eigen::MatrixXd rebuilt = bundle.visible_vectors *
                                        bundle.singular_values.asDiagonal() *
                                        bundle.hidden_vectors.transpose();
        CHECK((rebuilt - m).norm() / m.norm() < 1e-6);
        for (Eigen::Index i = 0; i + 1 < r; ++i)
            CHECK(bundle.singular_values(i) >= bundle.singular_values(i + 1));
    }
    CHECK_THROWS_AS(svd(Eigen::MatrixXd::Constant(2, 2, std::nan(""))), std::invalid_argument);
}

TEST_CASE("the sign convention pins each visible vector deterministically") {
    const Eigen::MatrixXd m = random_matrix(9, 4, 5);
    const SvdBundle bundle = svd(m);
    for (Eigen::Index col = 0; col < bundle.rank(); ++col) {
        Eigen::Index arg_max = 0;
        bundle.visible_vectors.col(col).cwiseAbs().maxCoeff(&arg_max);
        CHECK(bundle.visible_vectors(arg_max, col) > 0.0);
    }
}

TEST_CASE("truncation keeps triples above the relative floor") {
    Eigen::MatrixXd diagonal = Eigen::MatrixXd::Zero(3, 3);
    diagonal(0, 0) = 10.0;
    diagonal(1, 1) = 5.0;
    diagonal(2, 2) = 1.0;
    const SvdBundle bundle = svd(diagonal);

    CHECK(truncate_svd(bundle, TruncationRule::keep_above(0.2)).rank() == 2);
    CHECK(truncate_svd(bundle, TruncationRule::keep_top(3)).rank() == 3);
    CHECK(truncate_svd(bundle, TruncationRule::keep_above(0.0)).rank() == 3);
    CHECK_THROWS_AS(truncate_svd(bundle, TruncationRule::keep_above(1.5)),
                    std::invalid_argument);
}

TEST_CASE("constant arrays transform to a single center bin") {
    const double c = 0.375;
    const Eigen::MatrixXd lattice = Eigen::MatrixXd::Constant(8, 8, c);
    const Eigen::MatrixXcd f = fft2d(lattice);
    CHECK(std::abs(f(4, 4)) == doctest::Approx(64.0 * c));
    double off_center = 0.0;
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
            if (u != 4 || v != 4) off_center = std::max(off_center, std::abs(f(u, v)));
    CHECK(off_center < 1e-10);
}

TEST_CASE("a plane wave produces two symmetric peaks at its frequency") {
    const int side = 16, k = 3;
    Eigen::MatrixXd lattice(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) lattice(r, c) = std::cos(2.0 * kPi * k * c / side);
    const Eigen::MatrixXcd f = fft2d(lattice);
    const int center = side / 2;
    CHECK(std::abs(f(center, center + k)) == doctest::Approx(side * side / 2.0));
    CHECK(std::abs(f(center, center - k)) == doctest::Approx(side * side / 2.0));
    double elsewhere = 0.0;
    for (int u = 0; u < side; ++u)
        for (int v = 0; v < side; ++v)
            if (u == center && (v == center + k || v == center - k)) continue;
            else elsewhere = std::max(elsewhere, std::abs(f(u, v)));
    CHECK(elsewhere < 1e-9);
}

TEST_CASE("fft2d matches the quartic-loop oracle") {
    const Eigen::MatrixXd lattice = random_matrix(8, 8, 33);
    const Eigen::MatrixXcd mine = dft2d_unshifted(lattice);
    const Eigen::MatrixXcd reference = oracle::naive_dft2d(lattice);
    CHECK((mine - reference).cwiseAbs().maxCoeff() < 1e-9);

    // And the shifted view is a pure relabeling of the same values.
    const Eigen::MatrixXcd shifted = fft2d(lattice);
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
            CHECK(std::abs(shifted(u, v) - reference((u + 4) % 8, (v + 4) % 8)) < 1e-9);

    CHECK_THROWS_AS(dft2d_unshifted(random_matrix(4, 5, 1)), std::invalid_argument);
}

TEST_CASE("Parseval and conjugate symmetry hold for real inputs") {
    for (std::uint64_t seed : {4ULL, 5ULL}) {
        const Eigen::MatrixXd lattice = random_matrix(10, 10, seed);
        const Eigen::MatrixXcd f = dft2d_unshifted(lattice);
        const double space = lattice.squaredNorm();
        const double frequency = f.cwiseAbs2().sum() / 100.0;
        CHECK(std::abs(space - frequency) / space < 1e-9);
        for (int u = 0; u < 10; ++u)
            for (int v = 0; v < 10; ++v)
                CHECK(std::abs(f(u, v) - std::conj(f((10 - u) % 10, (10 - v) % 10))) < 1e-9);
    }
}

TEST_CASE("radial binning: constants, plane waves, and the oracle binner") {
    const int side = 12;
    const Eigen::VectorXd constant = Eigen::VectorXd::Constant(side * side, 1.0);
    const RadialSpectrum dc = radial_fft(constant, side);
    CHECK(dc.magnitudes(0) == doctest::Approx(side * side));
    CHECK(dc.power.tail(dc.power.size() - 1).cwiseAbs().maxCoeff() < 1e-18);
    CHECK(low_mode_support(dc, 0) == doctest::Approx(1.0));

    const int k = 4;
    Eigen::VectorXd wave(side * side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c)
            wave(Eigen::Index(r) * side + c) = std::cos(2.0 * kPi * k * c / side);
    const RadialSpectrum peaked = radial_fft(wave, side);
    Eigen::Index peak_mode = 0;
    peaked.magnitudes.maxCoeff(&peak_mode);
    CHECK(peak_mode == k);
    CHECK(low_mode_support(peaked, k - 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(low_mode_support(peaked, k) == doctest::Approx(1.0));

    const Eigen::VectorXd noise =
        Eigen::Map<const Eigen::VectorXd>(random_matrix(side, side, 9).data(), side * side);
    const RadialSpectrum spectrum = radial_fft(noise, side);
    Eigen::MatrixXd lattice(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) lattice(r, c) = noise(Eigen::Index(r) * side + c);
    const oracle::NaiveRadialBins bins = oracle::naive_radial_bins(fft2d(lattice));
    REQUIRE(spectrum.mode_count() == Eigen::Index(bins.counts.size()));
    for (Eigen::Index m = 0; m < spectrum.mode_count(); ++m) {
        CHECK(spectrum.bin_counts[static_cast<std::size_t>(m)] ==
              bins.counts[static_cast<std::size_t>(m)]);
        CHECK(spectrum.magnitudes(m) ==
              doctest::Approx(bins.mean_magnitude[static_cast<std::size_t>(m)]).epsilon(1e-12));
        CHECK(spectrum.power(m) ==
              doctest::Approx(bins.power[static_cast<std::size_t>(m)]).epsilon(1e-12));
    }

    // Binning conserves total power.
    const double total_2d = fft2d(lattice).cwiseAbs2().sum();
    CHECK(spectrum.power.sum() == doctest::Approx(total_2d).epsilon(1e-12));

    CHECK_THROWS_AS(radial_fft(Eigen::VectorXd::Zero(10), 3), std::invalid_argument);
}

TEST_CASE("visible/hidden comparison is zero for identical square-bundle vectors") {
    // A symmetric positive matrix has identical left and right vectors.
    Eigen::MatrixXd m = random_matrix(16, 16, 21);
    m = (m * m.transpose()).eval();
    SvdBundle bundle = svd(m);
    bundle.visible_side = 4;
    bundle.hidden_side = 4;
    const VhAgreement agreement = compare_visible_hidden(bundle, 0, 1.0);
    CHECK(agreement.relative_difference == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(agreement.shared_mode_count == 3);  // modes 0..floor(4/2)
}

TEST_CASE("non-overlapping coarse pairs agree after rescaling by the mode-0 ratio") {
    // The 2x2 rule's spectrum is fully degenerate, so pick the smooth
    // representative explicitly: the constant vector and its coarse image.
    const int side = 8;
    const BlockSpinSpec spec{side, 2, 2};
    const Eigen::MatrixXd m = block_spin_matrix(spec);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(side * side, 1.0 / side);
    const Eigen::VectorXd w = apply_block_spin(u, m).normalized();

    SvdBundle bundle;
    bundle.singular_values = Eigen::VectorXd::Constant(1, 2.0);
    bundle.visible_vectors = u;
    bundle.hidden_vectors = w;
    bundle.visible_side = side;
    bundle.hidden_side = spec.hidden_side();

    const RadialSpectrum vis = radial_fft(u, side);
    const RadialSpectrum hid = radial_fft(w, spec.hidden_side());
    const double dc_ratio = vis.magnitudes(0) / hid.magnitudes(0);
    const VhAgreement agreement = compare_visible_hidden(bundle, 0, dc_ratio);
    CHECK(agreement.relative_difference < 1e-10);

    CHECK_THROWS_AS(compare_visible_hidden(bundle, 999), std::invalid_argument);
}

TEST_CASE("effective parameter counting reproduces the truncation arithmetic") {
    CHECK(effective_parameter_count(6400, 1600, 200, 10, 60) == 35555);
    CHECK(200LL * 6400 == 1280000);  // the intermediate the count scales down
    CHECK(effective_parameter_count(6400, 1600, 1600, 60, 60) == 6400LL * 1600);
    CHECK(effective_parameter_count(16, 4, 4, 3, 3) == 64);
    CHECK_THROWS_AS(effective_parameter_count(16, 4, 4, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(effective_parameter_count(16, 4, 4, 5, 3), std::invalid_argument);
}
