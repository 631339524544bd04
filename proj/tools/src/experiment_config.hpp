#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgflow::cli {

/// Raised for malformed configs / bad usage (exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Raised for I/O failures (exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Raised when a run goes numerically bad, e.g. non-finite loss (exit code 4).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` experiment file. Lines starting with '#' (or blank)
/// are ignored; values keep internal whitespace.
class ExperimentConfig {
public:
    static ExperimentConfig load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<int> get_int_list(const std::string& key) const;  // comma separated

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    const std::filesystem::path& source_path() const { return source_; }

private:
    std::map<std::string, std::string> values_;
    std::filesystem::path source_;
};

}  // namespace rgflow::cli
