#include "gie/error.hpp"
#include "gie/fielddecomp.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <fstream>

namespace gie::fielddecomp {
namespace {

static_assert(std::endian::native == std::endian::little, "field I/O assumes a little-endian host");

std::filesystem::path sidecar(const std::filesystem::path& raw)
{
    return std::filesystem::path(raw.string() + ".json");
}

void write_sidecar(const std::filesystem::path& raw, const Grid3D& g, int comps)
{
    nlohmann::json j = {{"n", g.n}, {"L", g.L}, {"components", comps}};
    std::ofstream os(sidecar(raw));
    if (!os)
        throw IoError("cannot write " + sidecar(raw).string());
    os << j.dump(2) << "\n";
}

struct Header {
    Grid3D grid;
    int components;
};

Header read_sidecar(const std::filesystem::path& raw)
{
    std::ifstream is(sidecar(raw));
    if (!is)
        throw IoError("cannot read " + sidecar(raw).string());
    nlohmann::json j;
    try {
        is >> j;
        Header h{Grid3D{j.at("n").get<int>(), j.at("L").get<double>()}, j.at("components").get<int>()};
        h.grid.validate();
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("bad field sidecar " + sidecar(raw).string() + ": " + e.what());
    }
}

void write_raw(const std::filesystem::path& raw, const std::vector<const double*>& comps, std::size_t n)
{
    std::ofstream os(raw, std::ios::binary);
    if (!os)
        throw IoError("cannot write " + raw.string());
    for (const double* c : comps)
        os.write(reinterpret_cast<const char*>(c), static_cast<std::streamsize>(n * sizeof(double)));
    if (!os)
        throw IoError("write failed for " + raw.string());
}

void read_raw(const std::filesystem::path& raw, const std::vector<double*>& comps, std::size_t n)
{
    std::ifstream is(raw, std::ios::binary | std::ios::ate);
    if (!is)
        throw IoError("cannot read " + raw.string());
    const auto size = static_cast<std::size_t>(is.tellg());
    if (size != comps.size() * n * sizeof(double))
        throw ValidationError("raw field size " + std::to_string(size) + " does not match sidecar");
    is.seekg(0);
    for (double* c : comps)
        is.read(reinterpret_cast<char*>(c), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is)
        throw IoError("read failed for " + raw.string());
}

} // namespace

void write_field(const std::filesystem::path& raw, const GridField3D& f)
{
    std::vector<const double*> comps;
    for (int c = 0; c < f.components; ++c)
        comps.push_back(f.component(c));
    write_raw(raw, comps, f.grid.points());
    write_sidecar(raw, f.grid, f.components);
}

void write_field(const std::filesystem::path& raw, const SymTensorField3D& t)
{
    std::vector<const double*> comps;
    for (const auto& c : t.comp)
        comps.push_back(c.data());
    write_raw(raw, comps, t.grid.points());
    write_sidecar(raw, t.grid, 6);
}

int sidecar_components(const std::filesystem::path& raw)
{
    return read_sidecar(raw).components;
}

GridField3D read_field(const std::filesystem::path& raw)
{
    const Header h = read_sidecar(raw);
    if (h.components != 1 && h.components != 3)
        throw ValidationError("expected a scalar or vector field, sidecar says " + std::to_string(h.components) +
                              " components");
    GridField3D f(h.grid, h.components);
    std::vector<double*> comps;
    for (int c = 0; c < f.components; ++c)
        comps.push_back(f.component(c));
    read_raw(raw, comps, h.grid.points());
    f.require_finite("field file");
    return f;
}

SymTensorField3D read_tensor_field(const std::filesystem::path& raw)
{
    const Header h = read_sidecar(raw);
    if (h.components != 6)
        throw ValidationError("expected a symmetric tensor field (6 components)");
    SymTensorField3D t(h.grid);
    std::vector<double*> comps;
    for (auto& c : t.comp)
        comps.push_back(c.data());
    read_raw(raw, comps, h.grid.points());
    t.require_finite("field file");
    return t;
}

} // namespace gie::fielddecomp
