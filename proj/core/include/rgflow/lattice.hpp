#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rgflow/dataset.hpp"
#include "rgflow/rng.hpp"

namespace rgflow {

/// Square lattice of +-1 spins, periodic boundary conditions.
struct SpinLattice {
    int side = 0;
    std::vector<std::int8_t> spins;  // row-major, side*side entries

    static SpinLattice all_up(int side);
    static SpinLattice random(int side, Rng& rng);

    std::int8_t& at(int row, int col) { return spins[static_cast<std::size_t>(row) * side + col]; }
    std::int8_t at(int row, int col) const { return spins[static_cast<std::size_t>(row) * side + col]; }

    /// Flattened row-major copy as +-1 doubles.
    Eigen::VectorXd to_vector() const;
    static SpinLattice from_vector(const Eigen::VectorXd& v, int side);
};

struct IsingSamplerConfig {
    int side_length = 16;
    double temperature = 4.0;
    double coupling = 1.0;
    int sweeps_per_sample = 10;
    int burn_in_sweeps = 1000;
    int sample_count = 1000;
    std::uint64_t rng_seed = 1;
};

/// Nearest-neighbour energy H = -J * sum over bonds s_i s_j, each unordered
/// bond counted once, periodic wrap in both directions.
double ising_energy(const SpinLattice& lattice, double coupling);

/// One Monte Carlo sweep: side^2 single-spin Metropolis updates at uniformly
/// random sites, acceptance min(1, exp(-dE/T)). Deterministic given rng state.
SpinLattice metropolis_sweep(SpinLattice lattice, const IsingSamplerConfig& config, Rng& rng);

/// Equilibrates for burn_in_sweeps from a random start, then records one
/// flattened lattice every sweeps_per_sample sweeps.
Dataset generate_ising_dataset(const IsingSamplerConfig& config);

}  // namespace rgflow
