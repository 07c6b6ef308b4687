#include "exzone/report.hpp"

#include <stdexcept>

#include "exzone/scenario.hpp"

namespace exzone::io {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), n_cols_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_)
        throw std::runtime_error("csv row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

std::string CsvWriter::cell(double v) { return format_g12(v); }
std::string CsvWriter::cell(long v) { return std::to_string(v); }
std::string CsvWriter::cell(std::uint64_t v) { return std::to_string(v); }

}  // namespace exzone::io
