#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rgflow/diagnostics.hpp"
#include "rgflow/rng.hpp"
#include "support/oracles.hpp"

using namespace rgflow;

namespace {

Eigen::MatrixXd haar_columns(int dim, int count, Rng& rng) {
    Eigen::MatrixXd g(dim, count);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ() * Eigen::MatrixXd::Identity(dim, count);
}

Dataset dataset_from_rows(const Eigen::MatrixXd& rows, int side) {
    Dataset ds;
    ds.side = side;
    ds.range = ValueRange::Real;
    ds.provenance = "synthetic";
    ds.samples = rows.cwiseMax(-1.0).cwiseMin(1.0);
    return ds;
}

}  // namespace

TEST_CASE("projector of a basis vector and of the full basis") {
    Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(3, 1);
    e1(0, 0) = 1.0;
    Eigen::MatrixXd p = projector(e1);
    CHECK(p(0, 0) == doctest::Approx(1.0));
    CHECK(p.cwiseAbs().sum() == doctest::Approx(1.0));

    const Eigen::MatrixXd identity = projector(Eigen::MatrixXd::Identity(4, 4));
    CHECK((identity - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("projectors are idempotent and symmetric") {
    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd basis = haar_columns(5, 2, rng);
        const Eigen::MatrixXd p = projector(basis);
        CHECK((p * p - p).norm() < 1e-10);
        CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("non-orthonormal columns are rejected unless reorthonormalization is requested") {
    Eigen::MatrixXd skewed(3, 2);
    skewed << 1, 1, 0, 1, 0, 0;
    CHECK_THROWS_AS(projector(skewed), std::invalid_argument);
    const Eigen::MatrixXd p = projector(skewed, true);
    CHECK((p * p - p).norm() < 1e-10);
    CHECK(std::lround(p.trace()) == 2);
}

TEST_CASE("identical projectors give exactly rank-many unit eigenvalues") {
    Rng rng(3);
    const Eigen::MatrixXd basis = haar_columns(8, 3, rng);
    const Eigen::MatrixXd p = projector(basis);
    const AlignmentReport report = alignment_spectrum(p, p);
    for (int i = 0; i < 3; ++i) CHECK(report.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-10));
    for (Eigen::Index i = 3; i < report.eigenvalues.size(); ++i)
        CHECK(std::abs(report.eigenvalues(i)) < 1e-10);
    CHECK(report.count_above.at(0.8) == 3);
    CHECK(report.subspace_dims.first == 3);
}

TEST_CASE("orthogonal subspaces have an all-zero alignment spectrum") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(6, 2);
    b(2, 0) = 1.0;
    b(3, 1) = 1.0;
    const AlignmentReport report = alignment_spectrum(projector(a), projector(b));
    CHECK(report.eigenvalues.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(report.count_above.at(0.1) == 0);
}

TEST_CASE("alignment eigenvalues stay in [0, 1] and respect the rank bound") {
    Rng rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::MatrixXd p_a = projector(haar_columns(10, 3, rng));
        const Eigen::MatrixXd p_b = projector(haar_columns(10, 4, rng));
        const AlignmentReport report = alignment_spectrum(p_a, p_b);
        CHECK(report.eigenvalues.minCoeff() > -1e-8);
        CHECK(report.eigenvalues.maxCoeff() < 1.0 + 1e-8);
        int near_one = 0;
        for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
            if (std::abs(report.eigenvalues(i) - 1.0) < 1e-6) ++near_one;
        CHECK(near_one <= 3);

        // trace(P_d P_t P_d) = trace(P_t P_d) by cyclicity and idempotence.
        const double trace_o = (p_a * p_b * p_a).trace();
        const double trace_product = (p_b * p_a).trace();
        CHECK(std::abs(trace_o - trace_product) < 1e-8);
    }
}

TEST_CASE("dimension mismatches are rejected") {
    Rng rng(4);
    const Eigen::MatrixXd p5 = projector(haar_columns(5, 2, rng));
    const Eigen::MatrixXd p6 = projector(haar_columns(6, 2, rng));
    CHECK_THROWS_AS(alignment_spectrum(p5, p6), std::invalid_argument);
}

TEST_CASE("subset stability: low-rank data is stable, white noise is not") {
    const Eigen::MatrixXd structured = oracle::low_rank_rows(600, 36, 10, 0.02, 99);
    SolvabilityConfig config;
    config.trials = 4;
    config.rng_seed = 12;
    const SolvabilityReport stable_report =
        solvability_check(dataset_from_rows(structured, 6), config);
    CHECK(stable_report.stable);
    CHECK_FALSE(stable_report.full_rank);
    for (int retained : stable_report.retained_per_trial) CHECK(retained == 10);
    for (double alignment : stable_report.pairwise_alignment) CHECK(alignment > 0.8);

    const Eigen::MatrixXd noise = oracle::noise_rows(600, 36, 7);
    const SolvabilityReport noise_report =
        solvability_check(dataset_from_rows(noise, 6), config);
    CHECK_FALSE(noise_report.stable);
    CHECK(noise_report.full_rank);
}

TEST_CASE("exact low-rank data yields a clean zero/one pairwise spectrum") {
    const Eigen::MatrixXd rows = oracle::low_rank_rows(500, 25, 5, 0.0, 3);
    SolvabilityConfig config;
    config.trials = 2;
    config.rng_seed = 9;
    const SolvabilityReport report = solvability_check(dataset_from_rows(rows, 5), config);
    REQUIRE(report.pairwise_reports.size() == 1);
    const Eigen::VectorXd spectrum = report.pairwise_reports[0].eigenvalues;
    for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
        const double distance_to_01 = std::min(std::abs(spectrum(i)), std::abs(spectrum(i) - 1.0));
        CHECK(distance_to_01 < 1e-6);
    }
    CHECK(report.stable);
}

TEST_CASE("degenerate datasets are trivially stable and tiny trial counts are rejected") {
    Dataset constant = dataset_from_rows(Eigen::MatrixXd::Constant(50, 16, 0.5), 4);
    SolvabilityConfig config;
    config.trials = 3;
    const SolvabilityReport report = solvability_check(constant, config);
    CHECK(report.stable);
    CHECK(report.trivially_stable);

    config.trials = 1;
    CHECK_THROWS_AS(solvability_check(constant, config), std::invalid_argument);
}
