#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "rgflow/lattice.hpp"
#include "support/oracles.hpp"

using namespace rgflow;

TEST_CASE("energy of the all-up 2x2 lattice counts all eight bonds") {
    SpinLattice lattice = SpinLattice::all_up(2);
    CHECK(ising_energy(lattice, 1.0) == doctest::Approx(-8.0));
}

TEST_CASE("one flipped spin on 2x2 balances aligned and anti-aligned bonds") {
    SpinLattice lattice = SpinLattice::all_up(2);
    lattice.at(0, 1) = -1;
    CHECK(ising_energy(lattice, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("energy matches the pair-enumeration oracle on random lattices") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        SpinLattice lattice = SpinLattice::random(4, rng);
        CHECK(ising_energy(lattice, 1.0) ==
              doctest::Approx(oracle::ising_energy_pairs(lattice, 1.0)).epsilon(1e-12));
        CHECK(ising_energy(lattice, 0.7) ==
              doctest::Approx(oracle::ising_energy_pairs(lattice, 0.7)).epsilon(1e-12));
    }
}

TEST_CASE("energy is invariant under global spin flip") {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        SpinLattice lattice = SpinLattice::random(5, rng);
        SpinLattice flipped = lattice;
        for (auto& s : flipped.spins) s = static_cast<std::int8_t>(-s);
        CHECK(ising_energy(lattice, 1.3) == doctest::Approx(ising_energy(flipped, 1.3)));
    }
}

TEST_CASE("energy is invariant under lattice translations") {
    Rng rng(23);
    SpinLattice lattice = SpinLattice::random(6, rng);
    const double reference = ising_energy(lattice, 1.0);
    for (int shift_r = 0; shift_r < 6; ++shift_r)
        for (int shift_c = 0; shift_c < 6; ++shift_c) {
            SpinLattice moved = SpinLattice::all_up(6);
            for (int r = 0; r < 6; ++r)
                for (int c = 0; c < 6; ++c)
                    moved.at(r, c) = lattice.at((r + shift_r) % 6, (c + shift_c) % 6);
            CHECK(ising_energy(moved, 1.0) == doctest::Approx(reference));
        }
}

TEST_CASE("a downhill flip is always accepted near zero temperature") {
    // One spin against an otherwise aligned lattice: the only accepted moves
    // at very low T push the lattice to its ground state.
    SpinLattice lattice = SpinLattice::all_up(4);
    lattice.at(2, 2) = -1;
    IsingSamplerConfig config;
    config.side_length = 4;
    config.temperature = 1e-9;
    Rng rng(3);
    SpinLattice out = metropolis_sweep(lattice, config, rng);
    for (int sweep = 0; sweep < 4 && ising_energy(out, 1.0) != -32.0; ++sweep)
        out = metropolis_sweep(out, config, rng);
    CHECK(ising_energy(out, 1.0) == doctest::Approx(-32.0));
}

TEST_CASE("sweeps are bit-reproducible for a fixed seed") {
    IsingSamplerConfig config;
    config.side_length = 8;
    config.temperature = 2.5;
    Rng rng_a(99), rng_b(99);
    SpinLattice a = SpinLattice::random(8, rng_a);
    SpinLattice b = SpinLattice::random(8, rng_b);
    for (int i = 0; i < 5; ++i) {
        a = metropolis_sweep(a, config, rng_a);
        b = metropolis_sweep(b, config, rng_b);
    }
    CHECK(a.spins == b.spins);
}

namespace {

/// Mean and batch-means variance of the mean; successive Metropolis samples
/// are correlated, so the naive 1/n variance would be too small.
std::pair<double, double> batched_mean_variance(const std::vector<double>& values, int batches) {
    const std::size_t per_batch = values.size() / static_cast<std::size_t>(batches);
    std::vector<double> means;
    for (int b = 0; b < batches; ++b) {
        double total = 0.0;
        for (std::size_t i = 0; i < per_batch; ++i)
            total += values[static_cast<std::size_t>(b) * per_batch + i];
        means.push_back(total / static_cast<double>(per_batch));
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= batches;
    double variance = 0.0;
    for (double m : means) variance += (m - mean) * (m - mean);
    variance /= (batches - 1.0);
    return {mean, variance / batches};
}

}  // namespace

TEST_CASE("mean |magnetization| agrees with an independent sampler at T=4") {
    IsingSamplerConfig config;
    config.side_length = 16;
    config.temperature = 4.0;
    config.burn_in_sweeps = 300;
    config.sweeps_per_sample = 2;
    config.sample_count = 1500;
    config.rng_seed = 5;
    Dataset ds = generate_ising_dataset(config);

    std::vector<double> mine;
    for (Eigen::Index s = 0; s < ds.sample_count(); ++s)
        mine.push_back(std::abs(ds.samples.row(s).mean()));
    const auto [my_mean, my_var] = batched_mean_variance(mine, 25);

    oracle::ReferenceIsingSampler reference(16, 4.0, 1.0, 777);
    for (int i = 0; i < 300; ++i) reference.sweep();
    std::vector<double> theirs;
    for (int i = 0; i < 1500; ++i) {
        reference.sweep();
        reference.sweep();
        long long m = 0;
        for (int s : reference.spins()) m += s;
        theirs.push_back(std::abs(static_cast<double>(m)) / 256.0);
    }
    const auto [ref_mean, ref_var] = batched_mean_variance(theirs, 25);

    const double sigma = std::sqrt(my_var + ref_var);
    CHECK(std::abs(my_mean - ref_mean) < 3.0 * sigma + 1e-12);
}

TEST_CASE("nearest-neighbour correlation agrees with the oracle sampler") {
    IsingSamplerConfig config;
    config.side_length = 16;
    config.temperature = 4.0;
    config.burn_in_sweeps = 300;
    config.sweeps_per_sample = 2;
    config.sample_count = 1500;
    config.rng_seed = 11;
    Dataset ds = generate_ising_dataset(config);

    auto nn_corr = [](const Eigen::VectorXd& flat, int side) {
        double total = 0.0;
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c) {
                const double s = flat(Eigen::Index(r) * side + c);
                total += s * flat(Eigen::Index(r) * side + (c + 1) % side);
                total += s * flat(Eigen::Index((r + 1) % side) * side + c);
            }
        return total / (2.0 * side * side);
    };

    std::vector<double> mine;
    for (Eigen::Index s = 0; s < ds.sample_count(); ++s)
        mine.push_back(nn_corr(ds.samples.row(s).transpose(), 16));
    const auto [my_mean, my_var] = batched_mean_variance(mine, 25);

    oracle::ReferenceIsingSampler reference(16, 4.0, 1.0, 4242);
    for (int i = 0; i < 300; ++i) reference.sweep();
    std::vector<double> theirs;
    for (int i = 0; i < 1500; ++i) {
        reference.sweep();
        reference.sweep();
        theirs.push_back(reference.nn_correlation());
    }
    const auto [ref_mean, ref_var] = batched_mean_variance(theirs, 25);

    const double sigma = std::sqrt(my_var + ref_var);
    CHECK(std::abs(my_mean - ref_mean) < 3.0 * sigma + 1e-12);
}

TEST_CASE("long-run 3x3 state frequencies match the exact Boltzmann weights") {
    const int side = 3;
    const double temperature = 5.0;
    const std::vector<double> exact = oracle::exact_ising_distribution(side, temperature, 1.0);

    IsingSamplerConfig config;
    config.side_length = side;
    config.temperature = temperature;
    Rng rng(2024);
    SpinLattice lattice = SpinLattice::random(side, rng);
    for (int i = 0; i < 500; ++i) lattice = metropolis_sweep(lattice, config, rng);

    const int draws = 400000;
    std::vector<int> counts(exact.size(), 0);
    for (int i = 0; i < draws; ++i) {
        lattice = metropolis_sweep(lattice, config, rng);
        std::size_t state = 0;
        for (int bit = 0; bit < side * side; ++bit)
            if (lattice.spins[static_cast<std::size_t>(bit)] > 0) state |= std::size_t{1} << bit;
        ++counts[state];
    }

    // Per-state 3-sigma binomial check where the expected count is healthy;
    // rare states are pooled into one tail bin.
    int pooled_count = 0;
    double pooled_expected = 0.0;
    int outliers = 0;
    int tested = 0;
    for (std::size_t state = 0; state < exact.size(); ++state) {
        const double expected = draws * exact[state];
        if (expected < 25.0) {
            pooled_count += counts[state];
            pooled_expected += expected;
            continue;
        }
        ++tested;
        const double sigma = std::sqrt(expected * (1.0 - exact[state]));
        if (std::abs(counts[state] - expected) > 3.0 * sigma) ++outliers;
    }
    // With hundreds of 3-sigma tests a few statistical flags are expected;
    // the run is seeded so this is a frozen, repeatable outcome.
    CHECK(tested > 100);
    CHECK(outliers <= tested / 50);
    if (pooled_expected >= 25.0) {
        const double sigma = std::sqrt(pooled_expected);
        CHECK(std::abs(pooled_count - pooled_expected) < 4.0 * sigma);
    }
}

TEST_CASE("dataset generation respects counts, spacing, and determinism") {
    IsingSamplerConfig config;
    config.side_length = 6;
    config.temperature = 3.0;
    config.burn_in_sweeps = 50;
    config.sweeps_per_sample = 3;
    config.sample_count = 17;
    config.rng_seed = 31;

    Dataset a = generate_ising_dataset(config);
    CHECK(a.sample_count() == 17);
    CHECK(a.dimension() == 36);
    CHECK(a.side == 6);
    CHECK(a.range == ValueRange::Spin);
    for (Eigen::Index s = 0; s < a.sample_count(); ++s)
        for (Eigen::Index j = 0; j < a.dimension(); ++j)
            CHECK(std::abs(a.samples(s, j)) == doctest::Approx(1.0));

    Dataset b = generate_ising_dataset(config);
    CHECK((a.samples - b.samples).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    config.sample_count = 1;
    CHECK(generate_ising_dataset(config).sample_count() == 1);

    config.sample_count = 0;
    CHECK_THROWS_AS(generate_ising_dataset(config), std::invalid_argument);
}
