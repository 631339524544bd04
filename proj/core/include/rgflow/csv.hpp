#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace rgflow {

/// Numeric CSV emitter. Every file carries a header row; values are written
/// with enough digits to round-trip doubles.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
    ~CsvWriter();

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);

    /// Flushes and atomically renames the temp file onto the target.
    void close();

private:
    std::filesystem::path target_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    std::size_t column_count_ = 0;
    bool closed_ = false;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 when absent
};

/// Reads a numeric CSV with a header row, as produced by CsvWriter.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace rgflow
