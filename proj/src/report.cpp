#include "catk/report.hpp"

#include <cstdio>

namespace catk {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()), header_(std::move(header)) {
    if (columns_ == 0) throw DomainError("CsvWriter: empty header");
}

std::string CsvWriter::str() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
    return out.str();
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << str();
    if (!out) throw Error("write failed: " + path);
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    int lineno = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        cells.push_back(cur);
        return cells;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
        } else {
            if (cells.size() != t.header.size())
                throw ParseError(lineno, "row has " + std::to_string(cells.size()) + " cells, header has " +
                                             std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.header.empty()) throw ParseError(lineno == 0 ? 1 : lineno, "empty CSV");
    return t;
}

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path);
    return read_csv(in);
}

}  // namespace catk
