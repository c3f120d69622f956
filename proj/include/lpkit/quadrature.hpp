#pragma once

// Gauss rules and graded composite quadrature for integrands with algebraic
// endpoint singularities.

#include <cmath>
#include <limits>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

namespace lpkit::quad {

/// Nodes and weights of an n-point rule on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline Rule build_gauss_legendre(std::size_t n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

// Golub-Welsch for the weight (1-x)^a (1+x)^b on [-1, 1].
inline Rule build_gauss_jacobi(std::size_t n, double a, double b) {
    if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("Jacobi exponents must exceed -1");
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    const double ab = a + b;
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        diag(static_cast<Eigen::Index>(k)) =
            k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
        if (k + 1 < n) {
            const double k1 = kk + 1.0;
            const double s1 = 2.0 * k1 + ab;
            const double beta = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + ab) /
                                (s1 * s1 * (s1 + 1.0) * (s1 - 1.0));
            sub(static_cast<Eigen::Index>(k)) = std::sqrt(beta);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n > 1 ? n - 1 : 0), Eigen::ComputeEigenvectors);
    const double mu0 = std::exp((ab + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) +
                                std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        r.nodes[i] = es.eigenvalues()(ii);
        const double v0 = es.eigenvectors()(0, ii);
        r.weights[i] = mu0 * v0 * v0;
    }
    return r;
}

}  // namespace detail

inline std::shared_ptr<const Rule> gauss_legendre(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, std::shared_ptr<const Rule>> cache;
    std::lock_guard lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const Rule>(detail::build_gauss_legendre(n));
    return slot;
}

/// Gauss-Jacobi rule for (1-x)^a (1+x)^b on [-1, 1].
inline std::shared_ptr<const Rule> gauss_jacobi(std::size_t n, double a, double b) {
    static std::mutex mtx;
    static std::map<std::tuple<std::size_t, double, double>, std::shared_ptr<const Rule>> cache;
    std::lock_guard lock(mtx);
    auto& slot = cache[{n, a, b}];
    if (!slot) slot = std::make_shared<const Rule>(detail::build_gauss_jacobi(n, a, b));
    return slot;
}

/// Rule for int_0^1 (1-s)^e g(s) ds: returns (s_i, W_i) with the weight folded in.
inline Rule jacobi_unit_right(std::size_t n, double e) {
    const auto base = gauss_jacobi(n, e, 0.0);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double scale = std::pow(0.5, e + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        r.nodes[i] = 0.5 * (base->nodes[i] + 1.0);
        r.weights[i] = base->weights[i] * scale;
    }
    return r;
}

/// Rule for int_0^1 s^e g(s) ds.
inline Rule jacobi_unit_left(std::size_t n, double e) {
    const auto base = gauss_jacobi(n, 0.0, e);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double scale = std::pow(0.5, e + 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        r.nodes[i] = 0.5 * (base->nodes[i] + 1.0);
        r.weights[i] = base->weights[i] * scale;
    }
    return r;
}

template <class F>
auto gauss_legendre_integral(F&& f, double a, double b, std::size_t order = 16) {
    const auto rule = gauss_legendre(order);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    using R = decltype(f(a));
    R s{};
    for (std::size_t i = 0; i < rule->size(); ++i) s += rule->weights[i] * f(c + h * rule->nodes[i]);
    return s * h;
}

/// Resolution controls for graded integration.
struct Grading {
    int panels_per_octave = 4;
    std::size_t order = 16;
    double depth = 1e-13;  ///< smallest resolved distance to the endpoint, relative
};

/// int_a^b g(x) dx where g may behave like (b - x)^exponent near b
/// (exponent > -1), and may have structure at any scale approaching b.
///
/// For negative exponents substitutes b - x = D v^q with q = 1/(exponent + 1),
/// which makes the leading singular term bounded in v; then integrates in v
/// over panels that are geometric toward v = 0.
template <class F>
auto graded_integral_right(F&& g, double a, double b, double exponent, const Grading& gr = {}) {
    if (!(exponent > -1.0)) throw std::invalid_argument("endpoint exponent must exceed -1");
    using R = decltype(g(a));
    const double D = b - a;
    R total{};
    if (!(D > 0.0)) return total;
    // Only negative exponents need the power substitution.
    const double q = exponent < 0.0 ? 1.0 / (exponent + 1.0) : 1.0;
    auto integrand = [&](double v) {
        const double d = D * std::pow(v, q);
        return g(b - d) * (D * q * std::pow(v, q - 1.0));
    };
    // v_min such that D v_min^q = depth * D. g only sees x = b - d, which
    // carries an absolute rounding error ~eps|b|; stopping at sqrt of that
    // balances it against the one-point sliver below.
    const double depth = std::max(gr.depth, std::sqrt(std::numeric_limits<double>::epsilon() * std::abs(b) / D));
    const double v_min = std::pow(std::min(depth, 0.5), 1.0 / q);
    const double octaves = std::log2(1.0 / v_min);
    const int panels = std::max(1, static_cast<int>(std::ceil(octaves * gr.panels_per_octave)));
    double hi = 1.0;
    for (int k = 1; k <= panels; ++k) {
        const double lo = std::exp2(-octaves * k / panels);
        total += gauss_legendre_integral(integrand, lo, hi, gr.order);
        hi = lo;
    }
    // Final sliver [0, v_min]. The substitution leaves the leading term
    // constant in v; the next one usually goes like v^s with s unknown
    // (e.g. s = 1/2 for (A - B d^-1/4)^2). Fit h0 + h1 v^s from two steps
    // below v_min, each shrinking d by at most 4 so rounding stays ~1e-7,
    // and integrate the fit. One-point rule if the fit is not clean.
    const R A = integrand(hi);
    R sliver = hi * A;
    if constexpr (std::is_same_v<R, double>) {
        const double lam = std::max(0.5, std::pow(0.25, 1.0 / q));
        const double B = integrand(hi * lam), C = integrand(hi * lam * lam);
        const double ratio = (A - B) / (B - C);  // = lam^-s
        const double s = std::log(ratio) / -std::log(lam);
        if (std::abs(A - B) > 1e-6 * std::abs(A) && std::isfinite(s) && s > 0.05 && s < 4.0) {
            const double h1 = (A - B) / (1.0 - 1.0 / ratio);  // h1 v_min^s
            sliver = hi * (A - h1 * s / (1.0 + s));
        }
    }
    total += sliver;
    return total;
}

/// Mirror of graded_integral_right for a singular left endpoint.
template <class F>
auto graded_integral_left(F&& g, double a, double b, double exponent, const Grading& gr = {}) {
    return graded_integral_right([&](double x) { return g(a + b - x); }, a, b, exponent, gr);
}

/// Composite Gauss-Legendre over equal panels.
template <class F>
auto composite_integral(F&& f, double a, double b, int panels, std::size_t order = 16) {
    using R = decltype(f(a));
    R s{};
    const double w = (b - a) / panels;
    for (int k = 0; k < panels; ++k) s += gauss_legendre_integral(f, a + k * w, a + (k + 1) * w, order);
    return s;
}

/// int_a^infty f(x) dx over geometrically growing panels out to a * 2^octaves.
template <class F>
auto geometric_tail_integral(F&& f, double a, double octaves, int panels_per_octave = 4,
                             std::size_t order = 16) {
    using R = decltype(f(a));
    R s{};
    const int panels = static_cast<int>(std::ceil(octaves * panels_per_octave));
    double lo = a;
    for (int k = 1; k <= panels; ++k) {
        const double hi = a * std::exp2(static_cast<double>(k) / panels_per_octave);
        s += gauss_legendre_integral(f, lo, hi, order);
        lo = hi;
    }
    return s;
}

}  // namespace lpkit::quad
