#include "rgflow/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace rgflow {

SpinLattice SpinLattice::all_up(int side) {
    if (side < 2) throw std::invalid_argument("SpinLattice: side must be >= 2");
    SpinLattice lattice;
    lattice.side = side;
    lattice.spins.assign(static_cast<std::size_t>(side) * side, 1);
    return lattice;
}

SpinLattice SpinLattice::random(int side, Rng& rng) {
    SpinLattice lattice = all_up(side);
    for (auto& s : lattice.spins) s = (rng.uniform() < 0.5) ? std::int8_t{1} : std::int8_t{-1};
    return lattice;
}

Eigen::VectorXd SpinLattice::to_vector() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(spins.size()));
    for (std::size_t i = 0; i < spins.size(); ++i) v(static_cast<Eigen::Index>(i)) = spins[i];
    return v;
}

SpinLattice SpinLattice::from_vector(const Eigen::VectorXd& v, int side) {
    if (v.size() != Eigen::Index(side) * side)
        throw std::invalid_argument("SpinLattice::from_vector: size mismatch");
    SpinLattice lattice = all_up(side);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double x = v(i);
        if (x != 1.0 && x != -1.0)
            throw std::invalid_argument("SpinLattice::from_vector: entry not +-1");
        lattice.spins[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(x);
    }
    return lattice;
}

double ising_energy(const SpinLattice& lattice, double coupling) {
    const int n = lattice.side;
    long long aligned_sum = 0;
    // Right and down neighbours cover every unordered bond exactly once.
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int s = lattice.at(r, c);
            aligned_sum += s * lattice.at(r, (c + 1) % n);
            aligned_sum += s * lattice.at((r + 1) % n, c);
        }
    }
    return -coupling * static_cast<double>(aligned_sum);
}

SpinLattice metropolis_sweep(SpinLattice lattice, const IsingSamplerConfig& config, Rng& rng) {
    if (config.temperature <= 0.0)
        throw std::invalid_argument("metropolis_sweep: temperature must be positive");
    const int n = lattice.side;
    const double beta = 1.0 / config.temperature;
    const auto site_count = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);

    for (std::uint64_t step = 0; step < site_count; ++step) {
        const auto site = rng.uniform_below(site_count);
        const int r = static_cast<int>(site / static_cast<std::uint64_t>(n));
        const int c = static_cast<int>(site % static_cast<std::uint64_t>(n));
        const int s = lattice.at(r, c);
        const int neighbours = lattice.at((r + 1) % n, c) + lattice.at((r + n - 1) % n, c) +
                               lattice.at(r, (c + 1) % n) + lattice.at(r, (c + n - 1) % n);
        const double delta_e = 2.0 * config.coupling * s * neighbours;
        if (delta_e <= 0.0 || rng.uniform() < std::exp(-beta * delta_e))
            lattice.at(r, c) = static_cast<std::int8_t>(-s);
    }
    return lattice;
}

Dataset generate_ising_dataset(const IsingSamplerConfig& config) {
    if (config.sample_count < 1)
        throw std::invalid_argument("generate_ising_dataset: sample_count must be >= 1");
    if (config.sweeps_per_sample < 1)
        throw std::invalid_argument("generate_ising_dataset: sweeps_per_sample must be >= 1");

    Rng rng(config.rng_seed);
    SpinLattice lattice = SpinLattice::random(config.side_length, rng);
    for (int i = 0; i < config.burn_in_sweeps; ++i)
        lattice = metropolis_sweep(std::move(lattice), config, rng);

    Dataset ds;
    ds.side = config.side_length;
    ds.range = ValueRange::Spin;
    ds.provenance = "ising(L=" + std::to_string(config.side_length) +
                    ",T=" + std::to_string(config.temperature) +
                    ",seed=" + std::to_string(config.rng_seed) + ")";
    ds.samples.resize(config.sample_count, Eigen::Index(config.side_length) * config.side_length);
    for (int s = 0; s < config.sample_count; ++s) {
        for (int i = 0; i < config.sweeps_per_sample; ++i)
            lattice = metropolis_sweep(std::move(lattice), config, rng);
        ds.samples.row(s) = lattice.to_vector();
    }
    return ds;
}

}  // namespace rgflow
