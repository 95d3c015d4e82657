#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace polar {

// RFC-4180-style CSV: header row, '.' decimal separator, floats printed with
// 17 significant digits so values round-trip exactly.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void begin_row();
    void field(double value);
    void field(std::uint64_t value);
    void field(int value);
    void end_row();

    static std::string format_double(double value);

private:
    std::ofstream out_;
    bool first_in_row_ = true;
};

}  // namespace polar
