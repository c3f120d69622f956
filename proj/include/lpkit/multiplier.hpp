#pragma once

// Fourier multiplier symbols and the operator T_m f = F^-1(m f_hat).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpkit/grid.hpp"
#include "lpkit/kernels.hpp"

namespace lpkit {

enum class Homogeneity { degree_zero, dyadic, none };

/// A function of frequency. `eval` already applies the stored value at xi = 0.
struct Symbol {
    std::string name;
    int dim = 1;
    Homogeneity homogeneity = Homogeneity::none;
    cplx dc_value{};
    std::function<cplx(const Vec&)> eval;
    /// Truncation-error bound at a frequency, for symbols defined by an
    /// infinite integral or sum; empty when the symbol is exact.
    std::function<double(const Vec&)> tail_error;

    cplx operator()(const Vec& xi) const { return eval(xi); }
    cplx operator()(double xi) const { return eval(Vec{xi, 0.0}); }

    std::vector<cplx> sample(const Grid& g) const {
        std::vector<cplx> out(g.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval(g.frequency(i));
        return out;
    }
};

class degenerate_symbol : public std::runtime_error {
public:
    degenerate_symbol(const std::string& what, Vec xi, double value)
        : std::runtime_error(what), frequency(xi), magnitude(value) {}
    Vec frequency;
    double magnitude;
};

namespace detail {

inline Symbol with_dc(std::string name, int dim, Homogeneity h, cplx dc,
                      std::function<cplx(const Vec&)> body) {
    Symbol s;
    s.name = std::move(name);
    s.dim = dim;
    s.homogeneity = h;
    s.dc_value = dc;
    s.eval = [dc, body = std::move(body)](const Vec& xi) {
        return xi[0] == 0.0 && xi[1] == 0.0 ? dc : body(xi);
    };
    return s;
}

inline double two_pi_abs(const Vec& xi, int dim) { return 2.0 * std::numbers::pi * norm(xi, dim); }

}  // namespace detail

inline Symbol constant_symbol(cplx c, int dim = 1) {
    Symbol s;
    s.name = "constant";
    s.dim = dim;
    s.homogeneity = Homogeneity::degree_zero;
    s.dc_value = c;
    s.eval = [c](const Vec&) { return c; };
    return s;
}

/// exp(-2 pi i <a, xi>): T_m f = f(. - a).
inline Symbol shift_symbol(Vec a, int dim = 1) {
    Symbol s;
    s.name = "shift";
    s.dim = dim;
    s.dc_value = 1.0;
    s.eval = [a](const Vec& xi) {
        return std::polar(1.0, -2.0 * std::numbers::pi * (a[0] * xi[0] + a[1] * xi[1]));
    };
    return s;
}

inline Symbol product(const Symbol& a, const Symbol& b) {
    Symbol s;
    s.name = a.name + "*" + b.name;
    s.dim = a.dim;
    s.homogeneity = a.homogeneity == b.homogeneity ? a.homogeneity : Homogeneity::none;
    s.dc_value = a.dc_value * b.dc_value;
    auto ea = a.eval, eb = b.eval;
    s.eval = [ea, eb](const Vec& xi) { return ea(xi) * eb(xi); };
    return s;
}

/// m(xi) = int |psi_hat(t xi)|^2 dt/t over the time grid; m(0) = 0.
inline Symbol symbol_continuous(const Kernel& psi, const LogTimeGrid& tg) {
    auto nodes = tg.nodes();
    const double wq = tg.weight();
    auto f = psi.fourier;
    Symbol s = detail::with_dc("continuous:" + psi.id, psi.dim, Homogeneity::degree_zero, 0.0,
                               [f, nodes, wq](const Vec& xi) {
                                   double acc = 0.0;
                                   for (double t : nodes) acc += std::norm(f(Vec{t * xi[0], t * xi[1]}));
                                   return cplx(acc * wq, 0.0);
                               });
    const double t_lo = tg.t_min(), t_hi = tg.t_end();
    const auto decay = psi.fourier_decay;
    const auto vanish = psi.fourier_vanishing;
    const int dim = psi.dim;
    s.tail_error = [decay, vanish, t_lo, t_hi, dim](const Vec& xi) {
        const double r = norm(xi, dim);
        if (r == 0.0) return 0.0;
        double err = 0.0;
        // int_{t_hi}^inf C^2 (t r)^(-2 delta) dt/t
        if (decay && t_hi * r >= 1.0)
            err += decay->constant * decay->constant * std::pow(t_hi * r, -2.0 * decay->exponent) /
                   (2.0 * decay->exponent);
        else
            return std::numeric_limits<double>::infinity();
        // int_0^{t_lo} C^2 (t r)^(2 eps) dt/t
        if (vanish && t_lo * r <= 1.0)
            err += vanish->constant * vanish->constant * std::pow(t_lo * r, 2.0 * vanish->exponent) /
                   (2.0 * vanish->exponent);
        else
            return std::numeric_limits<double>::infinity();
        return err;
    };
    return s;
}

/// m(xi) = sum_{k in range} |psi_hat(2^k xi)|^2; m(0) = 0.
inline Symbol symbol_discrete(const Kernel& psi, const DyadicRange& kr) {
    auto f = psi.fourier;
    const int lo = kr.k_min, hi = kr.k_max;
    Symbol s = detail::with_dc("discrete:" + psi.id, psi.dim, Homogeneity::dyadic, 0.0,
                               [f, lo, hi](const Vec& xi) {
                                   double acc = 0.0;
                                   for (int k = lo; k <= hi; ++k) {
                                       const double sc = std::ldexp(1.0, k);
                                       acc += std::norm(f(Vec{sc * xi[0], sc * xi[1]}));
                                   }
                                   return cplx(acc, 0.0);
                               });
    const auto decay = psi.fourier_decay;
    const auto vanish = psi.fourier_vanishing;
    const int dim = psi.dim;
    s.tail_error = [decay, vanish, lo, hi, dim](const Vec& xi) {
        const double r = norm(xi, dim);
        if (r == 0.0) return 0.0;
        const double top = std::ldexp(r, hi + 1), bottom = std::ldexp(r, lo - 1);
        if (!decay || top < 1.0 || !vanish || bottom > 1.0)
            return std::numeric_limits<double>::infinity();
        const double d = decay->exponent, e = vanish->exponent;
        return decay->constant * decay->constant * std::pow(top, -2.0 * d) / (1.0 - std::exp2(-2.0 * d)) +
               vanish->constant * vanish->constant * std::pow(bottom, 2.0 * e) / (1.0 - std::exp2(-2.0 * e));
    };
    return s;
}

/// T_m f = F^-1(m f_hat).
inline SampledField apply_multiplier(const Symbol& m, const SampledField& f) {
    SpectralField F = forward_transform(f);
    const Grid& g = f.grid;
    for (std::size_t i = 0; i < F.size(); ++i) F.coeffs[i] *= m(g.frequency(i));
    return inverse_transform(F);
}

/// Applies pre-sampled symbol values (FFT order) to a field.
inline SampledField apply_sampled(const std::vector<cplx>& values, const SpectralField& F) {
    SpectralField G = F;
    for (std::size_t i = 0; i < G.size(); ++i) G.coeffs[i] *= values[i];
    return inverse_transform(G);
}

/// 1/m with value 0 at xi = 0, after checking |m| >= floor at every nonzero
/// grid frequency.
inline Symbol invert_multiplier(const Symbol& m, double floor, const Grid& g) {
    if (!(floor > 0.0)) throw std::invalid_argument("inversion floor must be positive");
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec xi = g.frequency(i);
        if (xi[0] == 0.0 && xi[1] == 0.0) continue;
        const double v = std::abs(m(xi));
        if (!(v >= floor)) {
            std::ostringstream os;
            os << "symbol '" << m.name << "' is degenerate: |m(" << xi[0];
            if (g.dim == 2) os << ", " << xi[1];
            os << ")| = " << v << " < " << floor
               << "; the multiplier vanishes, so the non-vanishing hypothesis fails";
            throw degenerate_symbol(os.str(), xi, v);
        }
    }
    Symbol s;
    s.name = "inverse:" + m.name;
    s.dim = m.dim;
    s.homogeneity = m.homogeneity;
    s.dc_value = 0.0;
    auto e = m.eval;
    s.eval = [e](const Vec& xi) {
        if (xi[0] == 0.0 && xi[1] == 0.0) return cplx{};
        return cplx(1.0) / e(xi);
    };
    return s;
}

/// (2 pi |xi|)^-alpha with value 0 at the origin.
inline Symbol riesz_symbol(double alpha, int dim = 1) {
    return detail::with_dc("riesz", dim, Homogeneity::none, 0.0, [alpha, dim](const Vec& xi) {
        return cplx(std::pow(detail::two_pi_abs(xi, dim), -alpha), 0.0);
    });
}

/// (1 + 4 pi^2 |xi|^2)^(-alpha/2); any real alpha (negative alpha gives J_{-alpha}).
inline Symbol bessel_symbol(double alpha, int dim = 1) {
    return detail::with_dc("bessel", dim, Homogeneity::none, 1.0, [alpha, dim](const Vec& xi) {
        const double z = detail::two_pi_abs(xi, dim);
        return cplx(std::pow(1.0 + z * z, -alpha / 2.0), 0.0);
    });
}

/// l(xi) = (2 pi |xi|)^a / (1 + 4 pi^2 |xi|^2)^(a/2), l(0) = 0.
inline Symbol lemma55_ell(double alpha, int dim = 1) {
    return detail::with_dc("ell", dim, Homogeneity::none, 0.0, [alpha, dim](const Vec& xi) {
        const double z = detail::two_pi_abs(xi, dim);
        return cplx(std::pow(z * z / (1.0 + z * z), alpha / 2.0), 0.0);
    });
}

/// m(xi) = (1 + 4 pi^2 |xi|^2)^(a/2) / (1 + (2 pi |xi|)^a), m(0) = 1.
inline Symbol lemma55_m(double alpha, int dim = 1) {
    return detail::with_dc("lemma55-m", dim, Homogeneity::none, 1.0, [alpha, dim](const Vec& xi) {
        const double z = detail::two_pi_abs(xi, dim);
        return cplx(std::pow(1.0 + z * z, alpha / 2.0) / (1.0 + std::pow(z, alpha)), 0.0);
    });
}

/// Grid frequency pairs (xi, 2 xi) with both on the grid and xi != 0.
inline std::vector<std::pair<std::size_t, std::size_t>> doubling_pairs(const Grid& g) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const long half = static_cast<long>(g.n / 2);
    auto ok = [&](long j) { return 2 * j >= -half && 2 * j < half; };
    if (g.dim == 1) {
        for (std::size_t k = 0; k < g.n; ++k) {
            const long j = g.signed_index(k);
            if (j != 0 && ok(j)) out.emplace_back(k, g.wrap_index(2 * j));
        }
        return out;
    }
    for (std::size_t r = 0; r < g.n; ++r)
        for (std::size_t c = 0; c < g.n; ++c) {
            const long j0 = g.signed_index(r), j1 = g.signed_index(c);
            if ((j0 != 0 || j1 != 0) && ok(j0) && ok(j1))
                out.emplace_back(r * g.n + c, g.wrap_index(2 * j0) * g.n + g.wrap_index(2 * j1));
        }
    return out;
}

/// max over on-grid doubling pairs of |m(2 xi) - m(xi)|.
inline double homogeneity_defect(const Symbol& m, const Grid& g) {
    double worst = 0.0;
    for (const auto& [a, b] : doubling_pairs(g))
        worst = std::max(worst, std::abs(m(g.frequency(b)) - m(g.frequency(a))));
    return worst;
}

/// min |m| over grid frequencies in the annulus 1 <= |xi| <= 2.
inline double annulus_minimum(const Symbol& m, const Grid& g) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec xi = g.frequency(i);
        const double r = norm(xi, g.dim);
        if (r >= 1.0 && r <= 2.0) best = std::min(best, std::abs(m(xi)));
    }
    return best;
}

}  // namespace lpkit
