#include "commands.hpp"

#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "rgflow/block_spin.hpp"
#include "rgflow/csv.hpp"
#include "rgflow/dataset.hpp"
#include "rgflow/diagnostics.hpp"
#include "rgflow/idx_io.hpp"
#include "rgflow/image_io.hpp"
#include "rgflow/lattice.hpp"
#include "rgflow/rbm.hpp"
#include "rgflow/rbm_io.hpp"
#include "rgflow/rgm.hpp"
#include "rgflow/spectral.hpp"
#include "rgflow/svg.hpp"

namespace rgflow::cli {

namespace {

Dataset load_dataset_checked(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("dataset file not found: " + path.string());
    return load_dataset(path);
}

RbmParams load_rbm_checked(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("weights file not found: " + path.string());
    return load_rbm(path);
}

TrainConfig train_config_from(const CommandContext& ctx) {
    TrainConfig config;
    config.learning_rate = ctx.config.get_double("train.learning_rate", 1e-3);
    config.batch_size = static_cast<int>(ctx.config.get_int("train.batch_size", 100));
    config.epochs = static_cast<int>(ctx.config.get_int("train.epochs", 1));
    config.rng_seed = ctx.seed;
    const std::string transfer = ctx.config.get_string("train.stack_transfer", "expected");
    if (transfer == "expected")
        config.stack_transfer = StackTransfer::Expected;
    else if (transfer == "sampled")
        config.stack_transfer = StackTransfer::Sampled;
    else
        throw ConfigError("train.stack_transfer must be 'expected' or 'sampled'");
    if (config.epochs < 0) throw ConfigError("train.epochs must be >= 0");
    if (config.batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
    if (config.learning_rate <= 0) throw ConfigError("train.learning_rate must be > 0");
    return config;
}

BlockSpinSpec block_spec_from(const CommandContext& ctx, const std::string& prefix,
                              int visible_side, int default_block) {
    BlockSpinSpec spec;
    spec.visible_side =
        static_cast<int>(ctx.config.get_int(prefix + ".visible_side", visible_side));
    spec.block_size = static_cast<int>(ctx.config.get_int(prefix + ".block_size", default_block));
    spec.stride = static_cast<int>(ctx.config.get_int(prefix + ".stride", 2));
    return spec;
}

RgmConfig rgm_config_from(const CommandContext& ctx, int visible_side, int hidden_side) {
    RgmConfig config;
    config.visible_side = visible_side;
    config.hidden_side = hidden_side;
    config.kappa = static_cast<int>(ctx.config.get_int("rgm.kappa", -1));
    config.alpha = static_cast<int>(ctx.config.get_int("rgm.alpha", -1));
    config.gain = ctx.config.get_double("rgm.gain", 1.0);
    config.block_spec = block_spec_from(ctx, "rgm", visible_side, 4);
    return config;
}

RbmParams initial_params(const CommandContext& ctx, const Dataset& dataset, int visible_side,
                         int hidden_side, Rng& rng) {
    const std::string mode = ctx.config.get_string("train.init", "xavier");
    if (mode == "xavier") return xavier_init(visible_side, hidden_side, rng);
    if (mode == "block_spin") {
        BlockSpinSpec spec = block_spec_from(ctx, "train", visible_side, 2);
        spec.visible_side = visible_side;
        spec.stride = visible_side / hidden_side;
        if (spec.stride < 1 || visible_side % hidden_side != 0)
            throw ConfigError("block_spin init needs hidden_side dividing visible_side");
        if (!ctx.config.has("train.block_size")) spec.block_size = spec.stride;
        return block_spin_as_rbm(spec);
    }
    if (mode == "rgm") {
        if (ctx.config.has("train.init_file"))
            return load_rbm_checked(ctx.config.get_string("train.init_file"));
        return build_rgm(dataset, rgm_config_from(ctx, visible_side, hidden_side));
    }
    if (mode == "explicit") return load_rbm_checked(ctx.config.get_string("train.init_file"));
    throw ConfigError("train.init must be xavier | block_spin | rgm | explicit");
}

void ensure_finite_history(const std::vector<double>& history) {
    for (double e : history)
        if (!std::isfinite(e)) throw NumericError("training diverged: non-finite loss");
}

/// Truncation rule for analysis: analysis.top_k beats analysis.floor.
TruncationRule truncation_from(const CommandContext& ctx) {
    if (ctx.config.has("analysis.top_k"))
        return TruncationRule::keep_top(static_cast<int>(ctx.config.get_int("analysis.top_k")));
    return TruncationRule::keep_above(ctx.config.get_double("analysis.floor", 0.2));
}

}  // namespace

CommandContext CommandContext::make(const GlobalFlags& flags) {
    CommandContext ctx{ExperimentConfig::load(flags.config_path), {}, 1, ""};
    ctx.experiment = ctx.config.get_string("experiment", flags.config_path.stem().string());
    ctx.seed = flags.seed_override
                   ? *flags.seed_override
                   : static_cast<std::uint64_t>(ctx.config.get_int("seed", 1));
    ctx.out_dir = flags.out_override ? *flags.out_override
                                     : std::filesystem::path(
                                           ctx.config.get_string("out", "runs/" + ctx.experiment));
    std::filesystem::create_directories(ctx.out_dir);
    if (flags.threads > 0) Eigen::setNbThreads(flags.threads);
    return ctx;
}

int cmd_generate(const GlobalFlags& flags) {
    CommandContext ctx = CommandContext::make(flags);
    const std::string source = ctx.config.get_string("dataset.source");

    Dataset dataset;
    if (source == "ising") {
        IsingSamplerConfig sampler;
        sampler.side_length = static_cast<int>(ctx.config.get_int("dataset.side"));
        sampler.temperature = ctx.config.get_double("dataset.temperature", 4.0);
        sampler.coupling = ctx.config.get_double("dataset.coupling", 1.0);
        sampler.sweeps_per_sample =
            static_cast<int>(ctx.config.get_int("dataset.sweeps_per_sample", 10));
        sampler.burn_in_sweeps = static_cast<int>(ctx.config.get_int("dataset.burn_in", 1000));
        sampler.sample_count = static_cast<int>(ctx.config.get_int("dataset.samples"));
        sampler.rng_seed = ctx.seed;
        if (sampler.sample_count <= 0) throw ConfigError("dataset.samples must be positive");
        if (sampler.temperature <= 0) throw ConfigError("dataset.temperature must be positive");
        dataset = generate_ising_dataset(sampler);
    } else if (source == "idx") {
        std::optional<std::filesystem::path> labels;
        if (ctx.config.has("dataset.labels")) labels = ctx.config.get_string("dataset.labels");
        dataset = load_idx(ctx.config.get_string("dataset.path"), labels);
    } else if (source == "images") {
        ImageFolderOptions options;
        options.target_side = static_cast<int>(ctx.config.get_int("dataset.side", 100));
        if (ctx.config.has("dataset.tile"))
            options.tile = static_cast<int>(ctx.config.get_int("dataset.tile"));
        const ImageFolderResult result =
            load_image_folder(ctx.config.get_string("dataset.path"), options);
        if (result.skipped_files > 0)
            std::cerr << "warning: skipped " << result.skipped_files << " undecodable file(s)\n";
        dataset = result.dataset;
    } else {
        throw ConfigError("dataset.source must be ising | idx | images");
    }

    const auto path = ctx.out_file("_dataset.rgds");
    save_dataset(dataset, path);
    std::cout << "dataset: samples=" << dataset.sample_count() << " side=" << dataset.side
              << " range=" << (dataset.range == ValueRange::Spin ? "spin" : "real") << " -> "
              << path.string() << "\n";
    return 0;
}

int cmd_train(const GlobalFlags& flags) {
    CommandContext ctx = CommandContext::make(flags);
    const Dataset dataset = load_dataset_checked(ctx.config.get_string("data"));

    const int visible_side =
        static_cast<int>(ctx.config.get_int("model.visible_side", dataset.side));
    if (visible_side != dataset.side)
        throw ConfigError("model.visible_side does not match the dataset");
    const std::vector<int> hidden_sides = ctx.config.get_int_list("model.layers");

    TrainConfig config = train_config_from(ctx);
    Rng rng(ctx.seed ^ 0x696e6974ULL);  // init draw stream, distinct from training

    std::vector<std::filesystem::path> written;
    std::vector<std::vector<double>> histories;
    if (hidden_sides.size() == 1) {
        RbmParams init = initial_params(ctx, dataset, visible_side, hidden_sides[0], rng);
        TrainResult result = train(dataset, config, std::move(init));
        ensure_finite_history(result.epoch_error);
        const auto path = ctx.out_file(".rbmw");
        save_rbm(result.params, path);
        written.push_back(path);
        histories.push_back(result.epoch_error);
    } else {
        std::vector<StackLayerSpec> layers;
        std::vector<RbmParams> inits;
        int current_visible = visible_side;
        for (std::size_t k = 0; k < hidden_sides.size(); ++k) {
            StackLayerSpec layer{hidden_sides[k], config};
            layer.config.rng_seed = config.rng_seed + k;
            layers.push_back(layer);
            // Stacked layers start from Xavier unless an explicit first-layer
            // init is configured.
            if (k == 0)
                inits.push_back(initial_params(ctx, dataset, current_visible, hidden_sides[k], rng));
            else
                inits.push_back(xavier_init(current_visible, hidden_sides[k], rng));
            current_visible = hidden_sides[k];
        }
        std::vector<TrainResult> results = train_stacked(dataset, layers, inits);
        for (std::size_t k = 0; k < results.size(); ++k) {
            ensure_finite_history(results[k].epoch_error);
            const auto path = ctx.out_file("_layer" + std::to_string(k) + ".rbmw");
            save_rbm(results[k].params, path);
            written.push_back(path);
            histories.push_back(results[k].epoch_error);
        }
    }

    std::vector<std::string> columns{"epoch"};
    for (std::size_t k = 0; k < histories.size(); ++k)
        columns.push_back(histories.size() == 1 ? "reconstruction_error"
                                                : "layer" + std::to_string(k) + "_error");
    const auto loss_path = ctx.out_file("_loss.csv");
    {
        CsvWriter loss(loss_path, columns);
        std::size_t epochs = 0;
        for (const auto& h : histories) epochs = std::max(epochs, h.size());
        for (std::size_t e = 0; e < epochs; ++e) {
            std::vector<double> row{static_cast<double>(e)};
            for (const auto& h : histories)
                row.push_back(e < h.size() ? h[e] : std::numeric_limits<double>::quiet_NaN());
            loss.row(row);
        }
    }

    for (const auto& path : written) std::cout << "weights -> " << path.string() << "\n";
    std::cout << "loss -> " << loss_path.string() << "\n";
    return 0;
}

int cmd_build_rgm(const GlobalFlags& flags, const std::string& dataset_file) {
    CommandContext ctx = CommandContext::make(flags);
    const std::string data_path =
        dataset_file.empty() ? ctx.config.get_string("data") : dataset_file;
    const Dataset dataset = load_dataset_checked(data_path);

    const int hidden_side = static_cast<int>(ctx.config.get_int("model.hidden_side",
                                                                 (dataset.side + 1) / 2));
    const RgmConfig config = rgm_config_from(ctx, dataset.side, hidden_side);
    const RbmParams params = build_rgm(dataset, config);

    const double weight_scale = params.weights.cwiseAbs().maxCoeff();
    if (weight_scale <= 0.0)
        std::cerr << "warning: built machine has zero weights (no retained modes)\n";

    const auto path = ctx.out_file("_rgm.rbmw");
    save_rbm(params, path);
    std::cout << "rgm: visible=" << params.visible_side << " hidden=" << params.hidden_side
              << " max|W|=" << weight_scale << " -> " << path.string() << "\n";
    return 0;
}

int cmd_analyze(const GlobalFlags& flags, const std::string& weights_file) {
    CommandContext ctx = CommandContext::make(flags);

    Eigen::MatrixXd matrix;
    int visible_side = 0, hidden_side = 0;
    const std::string source = ctx.config.get_string("analysis.source", "weights");
    if (source == "block_spin") {
        BlockSpinSpec spec = block_spec_from(
            ctx, "analysis", static_cast<int>(ctx.config.get_int("model.visible_side")), 4);
        matrix = block_spin_matrix(spec);
        visible_side = spec.visible_side;
        hidden_side = spec.hidden_side();
    } else {
        const RbmParams params = load_rbm_checked(weights_file);
        matrix = params.weights;
        visible_side = params.visible_side;
        hidden_side = params.hidden_side;
    }

    SvdBundle bundle = svd(matrix);
    bundle.visible_side = visible_side;
    bundle.hidden_side = hidden_side;

    // Optional overlay: the block-spin spectrum on the same lattice geometry.
    std::optional<Eigen::VectorXd> overlay;
    if (ctx.config.get_bool("analysis.overlay_block_spin", false)) {
        BlockSpinSpec spec = block_spec_from(ctx, "analysis", visible_side, 4);
        spec.stride = visible_side / hidden_side;
        overlay = block_spin_svd_profile(spec).singular_values;
    }

    const auto sv_csv = ctx.out_file("_singular_values.csv");
    {
        std::vector<std::string> columns{"index", "singular_value"};
        if (overlay) columns.push_back("block_spin_singular_value");
        CsvWriter writer(sv_csv, columns);
        for (Eigen::Index i = 0; i < bundle.rank(); ++i) {
            std::vector<double> row{static_cast<double>(i), bundle.singular_values(i)};
            if (overlay)
                row.push_back(i < overlay->size() ? (*overlay)(i)
                                                  : std::numeric_limits<double>::quiet_NaN());
            writer.row(row);
        }
    }
    {
        ChartOptions chart;
        chart.title = ctx.experiment + ": singular values";
        chart.x_label = "index";
        chart.y_label = "singular value";
        std::vector<std::string> series{"singular_value"};
        if (overlay) series.push_back("block_spin_singular_value");
        write_chart_svg(sv_csv, "index", series, ctx.out_file("_singular_values.svg"), chart);
    }

    const SvdBundle kept = truncate_svd(bundle, truncation_from(ctx));
    const double top_value = bundle.rank() > 0 ? bundle.singular_values(0) : 0.0;

    // Radial spectra + visible/hidden agreement for the chosen indices.
    std::vector<int> indices{0, 1, 2, 3, 4};
    if (ctx.config.has("analysis.compare_indices"))
        indices = ctx.config.get_int_list("analysis.compare_indices");
    const bool degenerate = top_value <= 1e-12;
    {
        CsvWriter compare(ctx.out_file("_vh_compare.csv"),
                          {"index", "rescale", "relative_difference", "shared_modes"});
        if (!degenerate) {
            std::optional<double> fixed_rescale;
            if (ctx.config.has("analysis.rescale"))
                fixed_rescale = ctx.config.get_double("analysis.rescale");
            for (int index : indices) {
                if (index < 0 || index >= bundle.rank()) continue;
                const VhAgreement agreement = compare_visible_hidden(bundle, index, fixed_rescale);
                compare.row({static_cast<double>(index), agreement.rescale,
                             agreement.relative_difference,
                             static_cast<double>(agreement.shared_mode_count)});

                const auto radial_csv =
                    ctx.out_file("_radial_" + std::to_string(index) + ".csv");
                const RadialSpectrum vis =
                    radial_fft(bundle.visible_vectors.col(index), bundle.visible_side);
                const RadialSpectrum hid =
                    radial_fft(bundle.hidden_vectors.col(index), bundle.hidden_side);
                CsvWriter radial(radial_csv, {"mode", "visible", "hidden"});
                const Eigen::Index modes = std::max(vis.mode_count(), hid.mode_count());
                for (Eigen::Index m = 0; m < modes; ++m)
                    radial.row({static_cast<double>(m),
                                m < vis.mode_count() ? vis.magnitudes(m) : 0.0,
                                m < hid.mode_count() ? hid.magnitudes(m) : 0.0});
                radial.close();
                ChartOptions chart;
                chart.title = ctx.experiment + ": radial spectrum, vector " + std::to_string(index);
                chart.x_label = "radial mode";
                chart.y_label = "mean |F|";
                write_chart_svg(radial_csv, "mode", {"visible", "hidden"},
                                ctx.out_file("_radial_" + std::to_string(index) + ".svg"), chart);
            }
        }
    }

    // Alignment against the data subspace, when a dataset is supplied.
    if (ctx.config.has("data")) {
        const Dataset dataset = load_dataset_checked(ctx.config.get_string("data"));
        if (dataset.side != visible_side)
            throw ConfigError("analysis dataset side does not match the weights");
        const int k = std::max<int>(1, static_cast<int>(kept.rank()));
        const EigenModes modes = top_covariance_modes(data_covariance(dataset), k);
        const AlignmentReport report =
            alignment_spectrum(projector(modes.eigenvectors, true),
                               projector(kept.visible_vectors, true));
        const auto align_csv = ctx.out_file("_alignment.csv");
        {
            CsvWriter writer(align_csv, {"index", "eigenvalue"});
            for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
                writer.row({static_cast<double>(i), report.eigenvalues(i)});
        }
        ChartOptions chart;
        chart.title = ctx.experiment + ": subspace alignment";
        chart.x_label = "index";
        chart.y_label = "eigenvalue";
        chart.scatter = true;
        write_chart_svg(align_csv, "index", {"eigenvalue"}, ctx.out_file("_alignment.svg"), chart);
        std::cout << "alignment: rank=" << k << " above 0.8: " << report.count_above.at(0.8)
                  << ", above 0.5: " << report.count_above.at(0.5) << "\n";
    }

    // Effective parameter count for the configured truncation and cutoff.
    // Defaults scale with the lattice: cutoff 10 at side 80, max mode 3L/4.
    const std::int64_t cutoff = ctx.config.get_int(
        "analysis.cutoff_mode",
        std::max<std::int64_t>(1, std::llround(10.0 * visible_side / 80.0)));
    const std::int64_t max_mode =
        ctx.config.get_int("analysis.max_mode", (3LL * visible_side) / 4);
    if (!degenerate && kept.rank() > 0) {
        const std::int64_t effective = effective_parameter_count(
            matrix.rows(), matrix.cols(), kept.rank(), cutoff, max_mode);
        std::cout << "effective parameters: " << matrix.rows() * matrix.cols() << " -> "
                  << kept.rank() * matrix.rows() << " (kept " << kept.rank() << ") -> "
                  << effective << " (cutoff " << cutoff << "/" << max_mode << ")\n";
    } else {
        std::cout << "effective parameters: skipped (zero spectrum)\n";
    }
    return 0;
}

int cmd_compare(const GlobalFlags& flags, const std::vector<std::string>& weights_files,
                const std::string& dataset_file) {
    CommandContext ctx = CommandContext::make(flags);
    if (weights_files.empty()) throw ConfigError("compare: no weights files given");
    const std::string data_path =
        dataset_file.empty() ? ctx.config.get_string("data") : dataset_file;
    const Dataset dataset = load_dataset_checked(data_path);

    const auto train_count = static_cast<Eigen::Index>(
        ctx.config.get_int("split.train", dataset.sample_count() * 4 / 5));
    if (train_count < 0 || train_count > dataset.sample_count())
        throw ConfigError("split.train out of range for this dataset");
    const auto [train_part, heldout] = shuffle_split(dataset, train_count, ctx.seed);
    (void)train_part;
    if (heldout.sample_count() == 0) throw ConfigError("compare: empty held-out split");

    std::vector<RbmParams> models;
    for (const auto& file : weights_files) {
        models.push_back(load_rbm_checked(file));
        if (models.back().weights.rows() != dataset.dimension())
            throw ConfigError("compare: " + file + " does not match the dataset dimension");
    }

    {
        CsvWriter errors(ctx.out_file("_compare_errors.csv"),
                         {"model_index", "mean_reconstruction_error"});
        for (std::size_t m = 0; m < models.size(); ++m) {
            const double err = reconstruction_error(heldout.samples, models[m]);
            errors.row({static_cast<double>(m), err});
            std::cout << "model " << m << " (" << weights_files[m]
                      << "): held-out error = " << err << "\n";
        }
    }

    const int grid_rows =
        static_cast<int>(ctx.config.get_int("compare.grid_rows", 8));
    const Eigen::Index shown = std::min<Eigen::Index>(grid_rows, heldout.sample_count());
    std::vector<std::vector<Eigen::VectorXd>> grid;
    for (Eigen::Index r = 0; r < shown; ++r) {
        std::vector<Eigen::VectorXd> row;
        row.push_back((heldout.samples.row(r).transpose().array() + 1.0) / 2.0);
        for (const auto& model : models)
            row.push_back(reconstruct(heldout.samples.row(r).transpose(), model));
        grid.push_back(std::move(row));
    }
    const auto grid_path = ctx.out_file("_compare_grid.png");
    write_image_grid_png(grid_path, grid, dataset.side, true);
    std::cout << "grid -> " << grid_path.string() << "\n";
    return 0;
}

int cmd_solvable(const GlobalFlags& flags, const std::string& dataset_file) {
    CommandContext ctx = CommandContext::make(flags);
    const std::string data_path =
        dataset_file.empty() ? ctx.config.get_string("data") : dataset_file;
    const Dataset dataset = load_dataset_checked(data_path);

    SolvabilityConfig config;
    config.trials = static_cast<int>(ctx.config.get_int("solvable.trials", 4));
    if (config.trials < 2) throw ConfigError("solvable.trials must be >= 2");
    config.initial_subset_size =
        static_cast<Eigen::Index>(ctx.config.get_int("solvable.subset_size", 0));
    config.eigen_floor = ctx.config.get_double("solvable.eigen_floor", 0.01);
    config.stability_threshold = ctx.config.get_double("solvable.threshold", 0.8);
    config.rng_seed = ctx.seed;

    const SolvabilityReport report = solvability_check(dataset, config);
    std::cout << "verdict: " << (report.stable ? "stable" : "unstable");
    if (report.trivially_stable) std::cout << " (trivially: zero covariance)";
    if (report.full_rank) std::cout << " (retained basis spans nearly the full space)";
    std::cout << "\n";
    for (std::size_t t = 0; t < report.retained_per_trial.size(); ++t)
        std::cout << "trial " << t << ": retained " << report.retained_per_trial[t]
                  << " directions after " << report.final_subset_sizes[t] << " samples\n";
    if (!report.pairwise_alignment.empty()) {
        std::cout << "pairwise mean top-k alignment:";
        for (double a : report.pairwise_alignment) std::printf(" %.3f", a);
        std::cout << "\n";
    }

    CsvWriter writer(ctx.out_file("_solvable.csv"), {"pair", "mean_topk_alignment"});
    for (std::size_t p = 0; p < report.pairwise_alignment.size(); ++p)
        writer.row({static_cast<double>(p), report.pairwise_alignment[p]});
    return 0;
}

}  // namespace rgflow::cli
