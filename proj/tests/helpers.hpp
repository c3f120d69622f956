#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "lpkit/lpkit.hpp"

namespace th {

using lpkit::cplx;
using lpkit::Grid;
using lpkit::SampledField;
using lpkit::Vec;

inline Grid grid1(std::size_t n = 4096, double L = 32.0) { return Grid(1, n, L); }
inline Grid grid2(std::size_t n = 128, double L = 16.0) { return Grid(2, n, L); }

// -x exp(-|x|^2/2): smooth, odd in x0, mean zero.
inline SampledField gauss_deriv(const Grid& g, double s = 1.0) {
    return SampledField::from_function(g, [s](const Vec& x) {
        const double r2 = (x[0] * x[0] + x[1] * x[1]) / (s * s);
        return cplx(-x[0] / s * std::exp(-0.5 * r2), 0.0);
    });
}

// Smooth random field: a few random Gaussian bumps, mean removed.
inline SampledField random_smooth(const Grid& g, unsigned seed, bool complex_values = false) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SampledField f(g);
    for (int b = 0; b < 6; ++b) {
        const Vec c{0.2 * g.half_length * u(rng), g.dim == 2 ? 0.2 * g.half_length * u(rng) : 0.0};
        const double s = 0.5 + 1.5 * (u(rng) + 1.0) / 2.0;
        const cplx a(u(rng), complex_values ? u(rng) : 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Vec x = g.point(i);
            const double r2 = (x[0] - c[0]) * (x[0] - c[0]) + (g.dim == 2 ? (x[1] - c[1]) * (x[1] - c[1]) : 0.0);
            f.values[i] += a * std::exp(-r2 / (2 * s * s));
        }
    }
    cplx mean{};
    for (auto& z : f.values) mean += z;
    mean /= double(f.size());
    for (auto& z : f.values) z -= mean;
    return f;
}

inline double max_diff(const SampledField& a, const SampledField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

inline double rel_l2(const SampledField& a, const SampledField& b) { return lpkit::l2_norm(a - b) / lpkit::l2_norm(b); }

}  // namespace th
