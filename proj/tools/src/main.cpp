#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"

namespace {

using rgflow::cli::GlobalFlags;

void add_common_flags(CLI::App* cmd, GlobalFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config file")
        ->required();
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&flags](std::uint64_t s) { flags.seed_override = s; },
        "override the config seed");
    cmd->add_option_function<std::string>(
        "--out", [&flags](const std::string& dir) { flags.out_override = dir; },
        "override the output directory");
    cmd->add_option("--threads", flags.threads, "linear algebra thread hint");
}

int dispatch(const std::function<int()>& run) {
    try {
        return run();
    } catch (const rgflow::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rgflow::cli::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const rgflow::cli::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rgflow: spin-lattice / image autoencoder training and spectral analysis"};
    app.require_subcommand(1);

    GlobalFlags flags;
    std::vector<std::string> weights_files;
    std::string dataset_file;
    std::string weights_file;

    CLI::App* generate = app.add_subcommand("generate", "sample or ingest a dataset");
    add_common_flags(generate, flags);

    CLI::App* train = app.add_subcommand("train", "train one RBM or a greedy stack");
    add_common_flags(train, flags);

    CLI::App* build_rgm = app.add_subcommand("build-rgm", "assemble parameters from data");
    add_common_flags(build_rgm, flags);
    build_rgm->add_option("dataset", dataset_file, "dataset file (.rgds); defaults to config 'data'");

    CLI::App* analyze = app.add_subcommand("analyze", "spectral reports for a weights file");
    add_common_flags(analyze, flags);
    analyze->add_option("weights", weights_file, "weights file (.rbmw)");

    CLI::App* compare = app.add_subcommand("compare", "side-by-side reconstruction report");
    add_common_flags(compare, flags);
    compare->add_option("weights", weights_files, "weights files (.rbmw)")->required();
    compare->add_option("--data", dataset_file, "dataset file; defaults to config 'data'");

    CLI::App* solvable = app.add_subcommand("solvable", "subset-stability verdict for a dataset");
    add_common_flags(solvable, flags);
    solvable->add_option("--data", dataset_file, "dataset file; defaults to config 'data'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    if (generate->parsed()) return dispatch([&] { return rgflow::cli::cmd_generate(flags); });
    if (train->parsed()) return dispatch([&] { return rgflow::cli::cmd_train(flags); });
    if (build_rgm->parsed())
        return dispatch([&] { return rgflow::cli::cmd_build_rgm(flags, dataset_file); });
    if (analyze->parsed())
        return dispatch([&] { return rgflow::cli::cmd_analyze(flags, weights_file); });
    if (compare->parsed())
        return dispatch([&] { return rgflow::cli::cmd_compare(flags, weights_files, dataset_file); });
    if (solvable->parsed())
        return dispatch([&] { return rgflow::cli::cmd_solvable(flags, dataset_file); });
    return 2;
}
