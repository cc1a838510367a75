#include "gie/fielddecomp.hpp"

#include "gie/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace gie::fielddecomp {

void Grid3D::validate() const
{
    if (n < 16 || (n & (n - 1)) != 0)
        throw ValidationError("grid n must be a power of two >= 16, got " + std::to_string(n));
    if (!(L > 0.0) || !std::isfinite(L))
        throw ValidationError("box side L must be positive");
}

double Grid3D::cell_volume() const
{
    const double h = spacing();
    return h * h * h;
}

Eigen::Vector3d Grid3D::position(std::size_t idx) const
{
    const auto nn = static_cast<std::size_t>(n);
    const double h = spacing();
    return {h * static_cast<double>(idx / (nn * nn)), h * static_cast<double>((idx / nn) % nn),
            h * static_cast<double>(idx % nn)};
}

GridField3D::GridField3D(const Grid3D& g, int comps)
    : grid(g)
    , components(comps)
{
    g.validate();
    if (comps != 1 && comps != 3)
        throw ValidationError("grid fields have 1 or 3 components");
    data.assign(g.points() * static_cast<std::size_t>(comps), 0.0);
}

double GridField3D::max_abs() const
{
    double m = 0.0;
    for (double v : data)
        m = std::max(m, std::abs(v));
    return m;
}

double GridField3D::mean(int c) const
{
    const double* p = component(c);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.points(); ++i)
        s += p[i];
    return s / static_cast<double>(grid.points());
}

void GridField3D::require_finite(const char* what) const
{
    for (double v : data)
        if (!std::isfinite(v))
            throw ValidationError(std::string(what) + " contains non-finite values");
}

SymTensorField3D::SymTensorField3D(const Grid3D& g)
    : grid(g)
{
    g.validate();
    for (auto& c : comp)
        c.assign(g.points(), 0.0);
}

double SymTensorField3D::max_abs() const
{
    double m = 0.0;
    for (const auto& c : comp)
        for (double v : c)
            m = std::max(m, std::abs(v));
    return m;
}

double SymTensorField3D::max_abs_trace() const
{
    double m = 0.0;
    for (std::size_t p = 0; p < grid.points(); ++p)
        m = std::max(m, std::abs(comp[0][p] + comp[3][p] + comp[5][p]));
    return m;
}

GridField3D SymTensorField3D::trace() const
{
    GridField3D t(grid, 1);
    for (std::size_t p = 0; p < grid.points(); ++p)
        t.data[p] = comp[0][p] + comp[3][p] + comp[5][p];
    return t;
}

SymTensorField3D SymTensorField3D::traceless() const
{
    SymTensorField3D out = *this;
    for (std::size_t p = 0; p < grid.points(); ++p) {
        const double third = (comp[0][p] + comp[3][p] + comp[5][p]) / 3.0;
        out.comp[0][p] -= third;
        out.comp[3][p] -= third;
        out.comp[5][p] -= third;
    }
    return out;
}

void SymTensorField3D::require_finite(const char* what) const
{
    for (const auto& c : comp)
        for (double v : c)
            if (!std::isfinite(v))
                throw ValidationError(std::string(what) + " contains non-finite values");
}

GridField3D axpby(double a, const GridField3D& x, double b, const GridField3D& y)
{
    if (x.grid != y.grid || x.components != y.components)
        throw ValidationError("field shapes differ");
    GridField3D out(x.grid, x.components);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = a * x.data[i] + b * y.data[i];
    return out;
}

SymTensorField3D axpby(double a, const SymTensorField3D& x, double b, const SymTensorField3D& y)
{
    if (x.grid != y.grid)
        throw ValidationError("field shapes differ");
    SymTensorField3D out(x.grid);
    for (std::size_t c = 0; c < 6; ++c)
        for (std::size_t i = 0; i < x.grid.points(); ++i)
            out.comp[c][i] = a * x.comp[c][i] + b * y.comp[c][i];
    return out;
}

double max_abs_diff(const GridField3D& a, const GridField3D& b)
{
    if (a.grid != b.grid || a.components != b.components)
        throw ValidationError("field shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

double max_abs_diff(const SymTensorField3D& a, const SymTensorField3D& b)
{
    if (a.grid != b.grid)
        throw ValidationError("field shapes differ");
    double m = 0.0;
    for (std::size_t c = 0; c < 6; ++c)
        for (std::size_t i = 0; i < a.grid.points(); ++i)
            m = std::max(m, std::abs(a.comp[c][i] - b.comp[c][i]));
    return m;
}

namespace {

struct Mode {
    Eigen::Vector3d k;
    double phase;
    std::array<double, 6> amp;
};

std::vector<Mode> random_modes(const Grid3D& g, std::uint64_t seed, int max_mode, int terms)
{
    g.validate();
    if (max_mode < 1 || 2 * max_mode >= g.n)
        throw ValidationError("band limit must satisfy 1 <= max_mode < n/2");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> mdist(-max_mode, max_mode);
    std::uniform_real_distribution<double> udist(-1.0, 1.0);
    std::vector<Mode> out;
    while (static_cast<int>(out.size()) < terms) {
        // sequenced draws: argument evaluation order is unspecified
        const int mx = mdist(rng);
        const int my = mdist(rng);
        const int mz = mdist(rng);
        const Eigen::Vector3d m(mx, my, mz);
        const double phase = std::numbers::pi * udist(rng);
        Mode md{m * (2.0 * std::numbers::pi / g.L), phase, {}};
        for (auto& a : md.amp)
            a = udist(rng);
        if (m.squaredNorm() == 0.0)
            continue; // keep fields zero-mean
        out.push_back(md);
    }
    return out;
}

} // namespace

GridField3D random_bandlimited_scalar(const Grid3D& g, std::uint64_t seed, int max_mode, int terms)
{
    const auto modes = random_modes(g, seed, max_mode, terms);
    GridField3D f(g, 1);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const Eigen::Vector3d r = g.position(p);
        for (const auto& m : modes)
            f.data[p] += m.amp[0] * std::cos(m.k.dot(r) + m.phase);
    }
    return f;
}

GridField3D random_bandlimited_vector(const Grid3D& g, std::uint64_t seed, int max_mode, int terms)
{
    const auto modes = random_modes(g, seed, max_mode, terms);
    GridField3D f(g, 3);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const Eigen::Vector3d r = g.position(p);
        for (const auto& m : modes) {
            const double c = std::cos(m.k.dot(r) + m.phase);
            for (int comp = 0; comp < 3; ++comp)
                f.component(comp)[p] += m.amp[static_cast<std::size_t>(comp)] * c;
        }
    }
    return f;
}

SymTensorField3D random_bandlimited_traceless(const Grid3D& g, std::uint64_t seed, int max_mode, int terms)
{
    const auto modes = random_modes(g, seed, max_mode, terms);
    SymTensorField3D t(g);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const Eigen::Vector3d r = g.position(p);
        for (const auto& m : modes) {
            const double c = std::cos(m.k.dot(r) + m.phase);
            for (std::size_t s = 0; s < 6; ++s)
                t.comp[s][p] += m.amp[s] * c;
        }
    }
    return t.traceless();
}

} // namespace gie::fielddecomp
