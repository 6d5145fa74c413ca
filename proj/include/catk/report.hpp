#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "catk/common.hpp"

namespace catk {

/// Shortest round-trip decimal form; identical inputs give identical bytes.
std::string fmt(double v);
std::string fmt(long v);
std::string fmt(int v);

/// Line-buffered CSV writer with deterministic formatting.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    template <typename... Ts>
    void row(const Ts&... cells) {
        std::vector<std::string> r;
        (r.push_back(fmt_cell(cells)), ...);
        row_raw(std::move(r));
    }

    void row_raw(std::vector<std::string> cells) {
        if (cells.size() != columns_) throw DomainError("CsvWriter: wrong number of cells");
        rows_.push_back(std::move(cells));
    }

    std::string str() const;
    void write_file(const std::string& path) const;
    std::size_t row_count() const { return rows_.size(); }

private:
    static std::string fmt_cell(double v) { return fmt(v); }
    static std::string fmt_cell(long v) { return fmt(v); }
    static std::string fmt_cell(int v) { return fmt(v); }
    static std::string fmt_cell(const std::string& s) { return s; }
    static std::string fmt_cell(const char* s) { return s; }

    std::size_t columns_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Strict CSV reader for our own outputs (no quoting, comma-separated).
CsvTable read_csv(std::istream& in);
CsvTable load_csv(const std::string& path);

}  // namespace catk
