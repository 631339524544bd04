#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "experiment_config.hpp"

namespace rgflow::cli {

struct GlobalFlags {
    std::filesystem::path config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::filesystem::path> out_override;
    int threads = 0;  // 0: leave library defaults alone
};

/// Applies overrides and resolves the output directory (creating it).
struct CommandContext {
    ExperimentConfig config;
    std::filesystem::path out_dir;
    std::uint64_t seed = 1;
    std::string experiment;

    static CommandContext make(const GlobalFlags& flags);

    std::filesystem::path out_file(const std::string& suffix) const {
        return out_dir / (experiment + suffix);
    }
};

int cmd_generate(const GlobalFlags& flags);
int cmd_train(const GlobalFlags& flags);
int cmd_build_rgm(const GlobalFlags& flags, const std::string& dataset_file);
int cmd_analyze(const GlobalFlags& flags, const std::string& weights_file);
int cmd_compare(const GlobalFlags& flags, const std::vector<std::string>& weights_files,
                const std::string& dataset_file);
int cmd_solvable(const GlobalFlags& flags, const std::string& dataset_file);

}  // namespace rgflow::cli
