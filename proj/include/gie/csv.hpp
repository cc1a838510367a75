#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gie {

/// Shortest round-trip-safe decimal for a double: 17 significant digits.
std::string format_double(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::string to_csv() const;
    void write_csv(const std::filesystem::path& path) const;
};

} // namespace gie
