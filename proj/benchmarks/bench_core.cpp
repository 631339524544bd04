#include <benchmark/benchmark.h>

#include "rgflow/block_spin.hpp"
#include "rgflow/lattice.hpp"
#include "rgflow/rbm.hpp"
#include "rgflow/rgm.hpp"
#include "rgflow/spectral.hpp"

using namespace rgflow;

static void MetropolisSweep(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    IsingSamplerConfig config;
    config.side_length = side;
    config.temperature = 4.0;
    Rng rng(1);
    SpinLattice lattice = SpinLattice::random(side, rng);
    for (auto _ : state) {
        lattice = metropolis_sweep(std::move(lattice), config, rng);
        benchmark::DoNotOptimize(lattice.spins.data());
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(MetropolisSweep)->Arg(16)->Arg(32)->Arg(64);

static void Cd1Step(benchmark::State& state) {
    const int batch_size = static_cast<int>(state.range(0));
    Rng rng(2);
    const RbmParams params = xavier_init(16, 8, rng);
    Eigen::MatrixXd batch(batch_size, 256);
    for (Eigen::Index r = 0; r < batch.rows(); ++r)
        for (Eigen::Index c = 0; c < batch.cols(); ++c)
            batch(r, c) = rng.uniform() < 0.5 ? 1.0 : -1.0;
    for (auto _ : state) {
        const Cd1Gradient g = cd1_step(batch, params, rng);
        benchmark::DoNotOptimize(g.weight.data());
    }
    state.SetItemsProcessed(state.iterations() * batch_size);
}
BENCHMARK(Cd1Step)->Arg(100)->Arg(1000);

static void BlockSpinSvd(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const SvdBundle bundle = block_spin_svd_profile({side, 4, 2});
        benchmark::DoNotOptimize(bundle.singular_values.data());
    }
}
BENCHMARK(BlockSpinSvd)->Unit(benchmark::kMillisecond)->Arg(24)->Arg(40);

static void Fft2dTransform(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    Rng rng(3);
    Eigen::MatrixXd lattice(side, side);
    for (Eigen::Index i = 0; i < lattice.size(); ++i)
        lattice(i / side, i % side) = 2.0 * rng.uniform() - 1.0;
    for (auto _ : state) {
        const Eigen::MatrixXcd f = fft2d(lattice);
        benchmark::DoNotOptimize(f.data());
    }
}
BENCHMARK(Fft2dTransform)->Arg(28)->Arg(80);

static void RadialSpectrumBench(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    Rng rng(4);
    Eigen::VectorXd vec(side * side);
    for (Eigen::Index i = 0; i < vec.size(); ++i) vec(i) = rng.normal();
    for (auto _ : state) {
        const RadialSpectrum spectrum = radial_fft(vec, side);
        benchmark::DoNotOptimize(spectrum.power.data());
    }
}
BENCHMARK(RadialSpectrumBench)->Arg(40)->Arg(80);

static void RgmAssembly(benchmark::State& state) {
    const int side = 28, hidden = 14, alpha = 4;
    const int kappa = static_cast<int>(state.range(0));
    Rng rng(5);
    std::vector<FourierModeBlock> coeffs;
    Eigen::VectorXd values(kappa);
    for (int i = 0; i < kappa; ++i) {
        Eigen::VectorXd v(side * side);
        for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.normal();
        coeffs.push_back(fourier_truncate(v.normalized(), side, alpha));
        values(i) = 1.0 + rng.uniform();
    }
    RgmConfig config;
    config.visible_side = side;
    config.hidden_side = hidden;
    for (auto _ : state) {
        const Eigen::MatrixXd w = assemble_rgm_weights(coeffs, values, config);
        benchmark::DoNotOptimize(w.data());
    }
}
BENCHMARK(RgmAssembly)->Unit(benchmark::kMillisecond)->Arg(10)->Arg(50);

BENCHMARK_MAIN();
