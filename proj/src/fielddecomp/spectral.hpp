#pragma once

#include "gie/fielddecomp.hpp"

#include <complex>
#include <cstddef>
#include <numbers>

namespace gie::fielddecomp::detail {

using cplx = std::complex<double>;

/// SIMD-aligned complex buffer of one n^3 spectrum.
class Spectrum {
public:
    explicit Spectrum(std::size_t n);
    ~Spectrum();
    Spectrum(Spectrum&& o) noexcept;
    Spectrum& operator=(Spectrum&& o) noexcept;
    Spectrum(const Spectrum&) = delete;
    Spectrum& operator=(const Spectrum&) = delete;

    cplx* data() { return p_; }
    const cplx* data() const { return p_; }
    cplx& operator[](std::size_t i) { return p_[i]; }
    const cplx& operator[](std::size_t i) const { return p_[i]; }
    std::size_t size() const { return n_; }

private:
    cplx* p_ = nullptr;
    std::size_t n_ = 0;
};

/// Unnormalized forward DFT sum_r f(r) e^{-i k.r}.
Spectrum forward(const Grid3D& g, const double* real);
/// Inverse DFT with 1/N normalization; writes the real part.
void inverse(const Grid3D& g, Spectrum& s, double* out);

/// Signed integer frequency of index i.
inline int frequency(int i, int n) { return i < n / 2 ? i : i - n; }

/// Wavevector with Nyquist components zeroed, and the true |k|^2.
struct Wave {
    Eigen::Vector3d k;
    double k2;
};

/// Calls fn(p, wave) for every spectral index, split across workers by
/// the first axis. fn must only touch index p.
template <class Fn>
void for_each_mode(const Grid3D& g, const Parallelism& policy, Fn&& fn)
{
    const int n = g.n;
    const double dk = 2.0 * std::numbers::pi / g.L;
    parallel_for(static_cast<std::size_t>(n), policy, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        const int fi = frequency(i, n);
        for (int j = 0; j < n; ++j) {
            const int fj = frequency(j, n);
            for (int k = 0; k < n; ++k) {
                const int fk = frequency(k, n);
                Wave w;
                w.k2 = dk * dk * (double(fi) * fi + double(fj) * fj + double(fk) * fk);
                w.k = Eigen::Vector3d(i == n / 2 ? 0.0 : dk * fi, j == n / 2 ? 0.0 : dk * fj,
                                      k == n / 2 ? 0.0 : dk * fk);
                fn(g.index(i, j, k), w);
            }
        }
    });
}

} // namespace gie::fielddecomp::detail
