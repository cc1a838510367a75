#include "gie/csv.hpp"

#include "gie/error.hpp"

#include <cstdio>
#include <fstream>

namespace gie {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string Table::to_csv() const
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_double(row[i]);
        out += '\n';
    }
    return out;
}

void Table::write_csv(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << to_csv();
    if (!out)
        throw IoError("write failed for " + path.string());
}

} // namespace gie
