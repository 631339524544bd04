#include "rgflow/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rgflow {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : target_(path), column_count_(columns.size()) {
    if (columns.empty()) throw std::invalid_argument("CsvWriter: header must name columns");
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    tmp_ = path;
    tmp_ += ".tmp";
    out_.open(tmp_, std::ios::trunc);
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + tmp_.string());
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // destructor must not throw; an explicit close() reports failures
    }
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != column_count_)
        throw std::invalid_argument("CsvWriter: row width does not match header");
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        out_ << buf;
    }
    out_ << '\n';
}

void CsvWriter::close() {
    if (closed_) return;
    closed_ = true;
    out_.flush();
    if (!out_) throw std::runtime_error("CsvWriter: write failed for " + tmp_.string());
    out_.close();
    std::filesystem::rename(tmp_, target_);
}

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path.string());
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) table.columns.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.columns.size())
            throw std::runtime_error("read_csv: ragged row in " + path.string());
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace rgflow
