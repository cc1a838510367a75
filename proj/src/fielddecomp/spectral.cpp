#include "spectral.hpp"

#include "gie/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace gie::fielddecomp {
namespace detail {

Spectrum::Spectrum(std::size_t n)
    : p_(reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n)))
    , n_(n)
{
    if (!p_)
        throw std::bad_alloc();
}

Spectrum::~Spectrum()
{
    if (p_)
        fftw_free(p_);
}

Spectrum::Spectrum(Spectrum&& o) noexcept
    : p_(std::exchange(o.p_, nullptr))
    , n_(std::exchange(o.n_, 0))
{
}

Spectrum& Spectrum::operator=(Spectrum&& o) noexcept
{
    if (this != &o) {
        if (p_)
            fftw_free(p_);
        p_ = std::exchange(o.p_, nullptr);
        n_ = std::exchange(o.n_, 0);
    }
    return *this;
}

namespace {

// fftw planning is not thread safe; execution on fresh arrays is.
std::mutex plan_mutex;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

const PlanPair& plans_for(int n)
{
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    Spectrum scratch(static_cast<std::size_t>(n) * n * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair p;
    // ESTIMATE keeps the plan (and so the bits) independent of timing.
    p.fwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!p.fwd || !p.bwd)
        throw std::runtime_error("fftw planning failed");
    return cache.emplace(n, p).first->second;
}

} // namespace

Spectrum forward(const Grid3D& g, const double* real)
{
    const std::size_t np = g.points();
    Spectrum s(np);
    for (std::size_t i = 0; i < np; ++i)
        s[i] = real[i];
    auto* buf = reinterpret_cast<fftw_complex*>(s.data());
    fftw_execute_dft(plans_for(g.n).fwd, buf, buf);
    return s;
}

void inverse(const Grid3D& g, Spectrum& s, double* out)
{
    auto* buf = reinterpret_cast<fftw_complex*>(s.data());
    fftw_execute_dft(plans_for(g.n).bwd, buf, buf);
    const std::size_t np = g.points();
    const double scale = 1.0 / static_cast<double>(np);
    for (std::size_t i = 0; i < np; ++i)
        out[i] = s[i].real() * scale;
}

} // namespace detail

using detail::cplx;

namespace {

const cplx I(0.0, 1.0);

} // namespace

GridField3D gradient(const GridField3D& f, const Parallelism& policy)
{
    if (f.components != 1)
        throw ValidationError("gradient needs a scalar field");
    auto s = detail::forward(f.grid, f.component(0));
    GridField3D out(f.grid, 3);
    for (int c = 0; c < 3; ++c) {
        detail::Spectrum t(s.size());
        detail::for_each_mode(f.grid, policy, [&](std::size_t p, const detail::Wave& w) { t[p] = I * w.k[c] * s[p]; });
        detail::inverse(f.grid, t, out.component(c));
    }
    return out;
}

GridField3D divergence(const GridField3D& f, const Parallelism& policy)
{
    if (f.components != 3)
        throw ValidationError("divergence needs a vector field");
    detail::Spectrum acc(f.grid.points());
    for (std::size_t p = 0; p < acc.size(); ++p)
        acc[p] = 0.0;
    for (int c = 0; c < 3; ++c) {
        auto s = detail::forward(f.grid, f.component(c));
        detail::for_each_mode(f.grid, policy, [&](std::size_t p, const detail::Wave& w) { acc[p] += I * w.k[c] * s[p]; });
    }
    GridField3D out(f.grid, 1);
    detail::inverse(f.grid, acc, out.component(0));
    return out;
}

GridField3D curl(const GridField3D& f, const Parallelism& policy)
{
    if (f.components != 3)
        throw ValidationError("curl needs a vector field");
    std::vector<detail::Spectrum> s;
    for (int c = 0; c < 3; ++c)
        s.push_back(detail::forward(f.grid, f.component(c)));
    GridField3D out(f.grid, 3);
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        detail::Spectrum t(f.grid.points());
        detail::for_each_mode(f.grid, policy, [&](std::size_t p, const detail::Wave& w) {
            t[p] = I * (w.k[a] * s[static_cast<std::size_t>(b)][p] - w.k[b] * s[static_cast<std::size_t>(a)][p]);
        });
        detail::inverse(f.grid, t, out.component(c));
    }
    return out;
}

GridField3D laplacian(const GridField3D& f, const Parallelism& policy)
{
    GridField3D out(f.grid, f.components);
    for (int c = 0; c < f.components; ++c) {
        auto s = detail::forward(f.grid, f.component(c));
        detail::for_each_mode(f.grid, policy, [&](std::size_t p, const detail::Wave& w) { s[p] *= -w.k2; });
        detail::inverse(f.grid, s, out.component(c));
    }
    return out;
}

GridField3D tensor_divergence(const SymTensorField3D& t, const Parallelism& policy)
{
    const Grid3D& g = t.grid;
    std::vector<detail::Spectrum> s;
    for (int c = 0; c < 6; ++c)
        s.push_back(detail::forward(g, t.comp[static_cast<std::size_t>(c)].data()));
    GridField3D out(g, 3);
    for (int j = 0; j < 3; ++j) {
        detail::Spectrum r(g.points());
        detail::for_each_mode(g, policy, [&](std::size_t p, const detail::Wave& w) {
            cplx acc = 0.0;
            for (int i = 0; i < 3; ++i)
                acc += I * w.k[i] * s[static_cast<std::size_t>(SymTensorField3D::slot(i, j))][p];
            r[p] = acc;
        });
        detail::inverse(g, r, out.component(j));
    }
    return out;
}

} // namespace gie::fielddecomp
