#pragma once

// Littlewood-Paley square functions g_psi, Delta_psi, the generalized
// Marcinkiewicz integral mu_alpha, and the vector-valued adjoint embeddings.
// Every convolution f * psi_t is spectral: F^-1(psi_hat(t xi) f_hat(xi)).

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lpkit/grid.hpp"
#include "lpkit/kernels.hpp"
#include "lpkit/multiplier.hpp"
#include "lpkit/quadrature.hpp"

namespace lpkit {

/// One field per node of a LogTimeGrid: h(y, t_j).
struct TimeIndexedField {
    LogTimeGrid tg;
    std::vector<SampledField> layers;

    /// ||h^y||_H = (sum_j w_q |h(y, t_j)|^2)^(1/2) at every y.
    SampledField hilbert_norm() const {
        SampledField out(layers.front().grid);
        for (const auto& l : layers)
            for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += std::norm(l.values[i]);
        for (auto& z : out.values) z = std::sqrt(z.real() * tg.weight());
        return out;
    }
};

/// One field per dyadic scale k: l(y, k).
struct DyadicIndexedField {
    DyadicRange kr;
    std::vector<SampledField> layers;

    /// ||l^y||_K = (sum_k |l(y, k)|^2)^(1/2).
    SampledField sequence_norm() const {
        SampledField out(layers.front().grid);
        for (const auto& l : layers)
            for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += std::norm(l.values[i]);
        for (auto& z : out.values) z = std::sqrt(z.real());
        return out;
    }
};

/// Bilinear pairing <u, v> = int u v.
inline cplx pairing(const SampledField& u, const SampledField& v) {
    u.check_same(v);
    cplx s{};
    for (std::size_t i = 0; i < u.size(); ++i) s += u.values[i] * v.values[i];
    return s * u.grid.cell_volume();
}

inline SampledField conj(const SampledField& f) {
    SampledField out = f;
    for (auto& z : out.values) z = std::conj(z);
    return out;
}

namespace detail {

// (sum_j w_j |F^-1(s_j f_hat)|^2)^(1/2), streaming over layers.
template <class LayerSymbol>
SampledField square_function(const SampledField& f, std::size_t count, LayerSymbol&& symbol,
                             const std::vector<double>& weights) {
    const Grid& g = f.grid;
    const SpectralField F = forward_transform(f);
    const auto freqs = g.frequencies();
    std::vector<double> acc(g.size(), 0.0);
    SpectralField G(g);
    for (std::size_t j = 0; j < count; ++j) {
        for (std::size_t i = 0; i < g.size(); ++i) G.coeffs[i] = symbol(j, freqs[i]) * F.coeffs[i];
        const SampledField layer = inverse_transform(G);
        for (std::size_t i = 0; i < g.size(); ++i) acc[i] += weights[j] * std::norm(layer.values[i]);
    }
    SampledField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = std::sqrt(acc[i]);
    return out;
}

inline cplx dilated_hat(const Kernel& psi, double t, const Vec& xi) {
    return psi.fourier(Vec{t * xi[0], t * xi[1]});
}

}  // namespace detail

/// F(psi, f)(y, t_j) = f * psi_{t_j}(y).
inline TimeIndexedField convolve_levels(const SampledField& f, const Kernel& psi, const LogTimeGrid& tg) {
    const Grid& g = f.grid;
    const SpectralField F = forward_transform(f);
    const auto freqs = g.frequencies();
    TimeIndexedField out{tg, {}};
    out.layers.reserve(tg.size());
    SpectralField G(g);
    for (double t : tg.nodes()) {
        for (std::size_t i = 0; i < g.size(); ++i) G.coeffs[i] = detail::dilated_hat(psi, t, freqs[i]) * F.coeffs[i];
        out.layers.push_back(inverse_transform(G));
    }
    return out;
}

/// l(y, k) = f * psi_{2^k}(y).
inline DyadicIndexedField convolve_dyadic(const SampledField& f, const Kernel& psi, const DyadicRange& kr) {
    const Grid& g = f.grid;
    const SpectralField F = forward_transform(f);
    const auto freqs = g.frequencies();
    DyadicIndexedField out{kr, {}};
    SpectralField G(g);
    for (int k = kr.k_min; k <= kr.k_max; ++k) {
        const double t = std::ldexp(1.0, k);
        for (std::size_t i = 0; i < g.size(); ++i) G.coeffs[i] = detail::dilated_hat(psi, t, freqs[i]) * F.coeffs[i];
        out.layers.push_back(inverse_transform(G));
    }
    return out;
}

/// g_psi(f)(x) = (int_0^inf |f * psi_t(x)|^2 dt/t)^(1/2) on the time grid.
inline SampledField g_psi(const SampledField& f, const Kernel& psi, const LogTimeGrid& tg) {
    const auto& nodes = tg.nodes();
    return detail::square_function(
        f, nodes.size(), [&](std::size_t j, const Vec& xi) { return detail::dilated_hat(psi, nodes[j], xi); },
        std::vector<double>(nodes.size(), tg.weight()));
}

/// Delta_psi(f)(x) = (sum_k |f * psi_{2^k}(x)|^2)^(1/2).
inline SampledField delta_psi(const SampledField& f, const Kernel& psi, const DyadicRange& kr) {
    return detail::square_function(
        f, kr.size(),
        [&](std::size_t j, const Vec& xi) {
            return detail::dilated_hat(psi, std::ldexp(1.0, kr.k_min + static_cast<int>(j)), xi);
        },
        std::vector<double>(kr.size(), 1.0));
}

/// Circular translate by a real offset a: result(x) = f(x - a), by exact
/// trigonometric interpolation.
inline SampledField translate(const SampledField& f, double a) {
    return apply_multiplier(shift_symbol(Vec{a, 0.0}, 1), f);
}

/// Periodic antiderivative of a mean-zero 1-D field: F_hat = f_hat/(2 pi i xi).
inline SampledField spectral_antiderivative(const SampledField& f) {
    if (f.grid.dim != 1) throw std::invalid_argument("antiderivative is one-dimensional");
    SpectralField F = forward_transform(f);
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double xi = g.frequency(i)[0];
        F.coeffs[i] = xi == 0.0 ? cplx{} : F.coeffs[i] / cplx(0.0, 2.0 * std::numbers::pi * xi);
    }
    return inverse_transform(F);
}

/// mu_alpha(f)(x) = (int_0^inf |S_t^alpha f(x)|^2 dt/t)^(1/2) with
/// S_t^alpha f(x) = (alpha/t) int_0^t (1 - u/t)^(alpha-1) (f(x-u) - f(x+u)) du,
/// evaluated in physical space: u = t s, and the s-integral uses a
/// Gauss-Jacobi rule carrying the (1 - s)^(alpha-1) weight exactly. Off-grid
/// values f(x -+ u) come from trigonometric interpolation.
inline SampledField marcinkiewicz_direct(const SampledField& f, double alpha, const LogTimeGrid& tg,
                                         std::size_t u_nodes = 64) {
    if (f.grid.dim != 1) throw std::invalid_argument("Marcinkiewicz integral is one-dimensional");
    if (!(alpha > 0.0)) throw std::invalid_argument("Marcinkiewicz order must be positive");
    const Grid& g = f.grid;
    const quad::Rule rule = quad::jacobi_unit_right(u_nodes, alpha - 1.0);
    const SpectralField F = forward_transform(f);
    const auto freqs = g.frequencies();
    std::vector<double> acc(g.size(), 0.0);
    SpectralField G(g);
    for (double t : tg.nodes()) {
        std::vector<cplx> s_t(g.size(), cplx{});
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double u = t * rule.nodes[q];
            const double wgt = alpha * rule.weights[q];
            // f(x - u) - f(x + u)
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double ph = 2.0 * std::numbers::pi * u * freqs[i][0];
                G.coeffs[i] = F.coeffs[i] * cplx(0.0, -2.0 * std::sin(ph));
            }
            const SampledField diff = inverse_transform(G);
            for (std::size_t i = 0; i < g.size(); ++i) s_t[i] += wgt * diff.values[i];
        }
        for (std::size_t i = 0; i < g.size(); ++i) acc[i] += std::norm(s_t[i]);
    }
    SampledField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = std::sqrt(acc[i] * tg.weight());
    return out;
}

/// mu(f)(x) = (int_0^inf |F(x+t) + F(x-t) - 2F(x)|^2 dt/t^3)^(1/2) with F an
/// antiderivative of the mean-zero field f.
inline SampledField marcinkiewicz_classical(const SampledField& f, const LogTimeGrid& tg) {
    const SampledField F = spectral_antiderivative(f);
    const Grid& g = f.grid;
    std::vector<double> acc(g.size(), 0.0);
    for (double t : tg.nodes()) {
        const SampledField plus = translate(F, -t), minus = translate(F, t);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const cplx d = plus.values[i] + minus.values[i] - 2.0 * F.values[i];
            acc[i] += std::norm(d) / (t * t);
        }
    }
    SampledField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = std::sqrt(acc[i] * tg.weight());
    return out;
}

class empty_window : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// E_psi^eps(h)(x) = int_0^inf psi_t * h_(eps)(., t)(x) dt/t, where h_(eps)
/// keeps only the layers with eps < t < 1/eps.
inline SampledField embed_adjoint(const TimeIndexedField& h, const Kernel& psi, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("truncation eps must lie in (0, 1)");
    if (h.layers.empty()) throw empty_window("time-indexed field has no layers");
    const Grid& g = h.layers.front().grid;
    const auto freqs = g.frequencies();
    SpectralField acc(g);
    std::size_t active = 0;
    for (std::size_t j = 0; j < h.tg.size(); ++j) {
        const double t = h.tg.node(j);
        if (!(t > eps && t < 1.0 / eps)) continue;
        ++active;
        const SpectralField H = forward_transform(h.layers[j]);
        for (std::size_t i = 0; i < g.size(); ++i)
            acc.coeffs[i] += detail::dilated_hat(psi, t, freqs[i]) * H.coeffs[i];
    }
    if (active == 0) throw empty_window("no time node lies in (eps, 1/eps)");
    for (auto& z : acc.coeffs) z *= h.tg.weight();
    return inverse_transform(acc);
}

/// sum_{|k| <= N} psi_{2^k} * l(., k).
inline SampledField embed_adjoint_discrete(const DyadicIndexedField& l, const Kernel& psi, int N) {
    if (N < 0) throw std::invalid_argument("dyadic truncation must be nonnegative");
    if (l.layers.empty()) throw empty_window("dyadic field has no layers");
    const Grid& g = l.layers.front().grid;
    const auto freqs = g.frequencies();
    SpectralField acc(g);
    for (int k = l.kr.k_min; k <= l.kr.k_max; ++k) {
        if (k < -N || k > N) continue;
        const double t = std::ldexp(1.0, k);
        const SpectralField H = forward_transform(l.layers[static_cast<std::size_t>(k - l.kr.k_min)]);
        for (std::size_t i = 0; i < g.size(); ++i)
            acc.coeffs[i] += detail::dilated_hat(psi, t, freqs[i]) * H.coeffs[i];
    }
    return inverse_transform(acc);
}

/// ||E^eps_{psi~bar}(F) - T_{m^(eps)} f||_2 / ||f||_2 with F = f * psi_t on a
/// log grid spanning (eps, 1/eps) and m^(eps) the truncated continuous symbol
/// over the same nodes. Returns 0 for f = 0.
inline double duality_residual(const SampledField& f, const Kernel& psi, double eps, int per_octave = 16) {
    const double nf = l2_norm(f);
    if (nf == 0.0) return 0.0;
    // Whole cells only: stop half a cell short of 1/eps so that ceil() in
    // the grid never adds a cell whose node sits above 1/eps.
    const double cells = std::floor(per_octave * std::log2(1.0 / (eps * eps)));
    if (cells < 1.0) throw empty_window("no time node lies in (eps, 1/eps)");
    const LogTimeGrid tg(eps, eps * std::exp2((cells - 0.5) / per_octave), per_octave);
    const TimeIndexedField F = convolve_levels(f, psi, tg);
    const SampledField lhs = embed_adjoint(F, reflected_conjugate(psi), eps);
    const SampledField rhs = apply_multiplier(symbol_continuous(psi, tg), f);
    return l2_norm(lhs - rhs) / nf;
}

}  // namespace lpkit
