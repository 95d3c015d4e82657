#include "polar/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace polar {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {  // '\n' line endings on every platform
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

std::string CsvWriter::format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void CsvWriter::begin_row() { first_in_row_ = true; }

void CsvWriter::field(double value) {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
    out_ << format_double(value);
}

void CsvWriter::field(std::uint64_t value) {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
    out_ << value;
}

void CsvWriter::field(int value) {
    if (!first_in_row_) out_ << ',';
    first_in_row_ = false;
    out_ << value;
}

void CsvWriter::end_row() { out_ << '\n'; }

}  // namespace polar
