#pragma once

// Kernel zoo: the functions psi whose dilates psi_t(x) = t^-n psi(x/t) drive
// the square functions, together with the averaging profiles Phi used by the
// Sobolev-space operators.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpkit/grid.hpp"
#include "lpkit/quadrature.hpp"

namespace lpkit {

class kernel_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class FourierTag { closed_form, quadrature };

/// |psi(x)| behaves like C | |x| - radius |^exponent near the sphere |x| = radius.
struct Singularity {
    double radius = 1.0;
    double exponent = 0.0;
};

/// Power-law bound |h(s)| <= C s^exponent.
struct PowerBound {
    double constant = 1.0;
    double exponent = 0.0;
};

struct Kernel {
    std::string id;
    int dim = 1;
    /// Spatial evaluator; empty for kernels defined on the Fourier side only.
    std::function<double(const Vec&)> spatial;
    std::function<cplx(const Vec&)> fourier;
    FourierTag fourier_tag = FourierTag::closed_form;
    /// Radius of a ball containing the support; nullopt when unbounded.
    std::optional<double> support_radius;
    /// Largest M with vanishing moments up to order M; -1 when the integral is nonzero.
    int cancellation_order = -1;
    /// |psi_hat(xi)| <= C |xi|^-delta for |xi| >= 1.
    std::optional<PowerBound> fourier_decay;
    /// |psi_hat(xi)| <= C |xi|^eps for |xi| <= 1.
    std::optional<PowerBound> fourier_vanishing;
    /// |psi(x)| <= C |x|^-beta for |x| >= 1.
    std::optional<PowerBound> spatial_decay;
    std::vector<Singularity> singularities;
    bool odd = false;
    bool radial = false;

    bool has_spatial() const { return static_cast<bool>(spatial); }

    double operator()(const Vec& x) const {
        if (!spatial) throw kernel_error("kernel '" + id + "' has no spatial evaluator");
        return spatial(x);
    }
    cplx hat(const Vec& xi) const { return fourier(xi); }
    cplx hat(double xi) const { return fourier(Vec{xi, 0.0}); }

    /// psi_t(x) = t^-n psi(x/t); Fourier side psi_hat(t xi).
    Kernel dilated(double t) const {
        if (!(t > 0.0)) throw kernel_error("dilation parameter must be positive");
        Kernel k = *this;
        k.id = id + "@t=" + std::to_string(t);
        const int n = dim;
        if (spatial) {
            auto s = spatial;
            k.spatial = [s, t, n](const Vec& x) {
                return std::pow(t, -n) * s(Vec{x[0] / t, x[1] / t});
            };
        }
        auto f = fourier;
        k.fourier = [f, t](const Vec& xi) { return f(Vec{t * xi[0], t * xi[1]}); };
        if (support_radius) k.support_radius = *support_radius * t;
        for (auto& s : k.singularities) s.radius *= t;
        return k;
    }
};

/// A bounded, compactly supported Phi with unit mass. In 1-D the support is
/// the interval [lo, hi]; in 2-D it is the disk of radius hi about 0.
struct AveragingProfile {
    Kernel kernel;
    double lo = -1.0;
    double hi = 1.0;
    /// Accurate 1 - Phi_hat(xi) near xi = 0, where direct subtraction cancels.
    std::function<cplx(const Vec&)> one_minus_hat;

    cplx hat(const Vec& xi) const { return kernel.fourier(xi); }
    cplx complement_hat(const Vec& xi) const {
        return one_minus_hat ? one_minus_hat(xi) : cplx(1.0) - kernel.fourier(xi);
    }
    int dim() const { return kernel.dim; }
};

namespace detail {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// 1 - sin(z)/z, stable near 0.
inline double one_minus_sinc(double z) {
    const double z2 = z * z;
    if (std::abs(z) < 1e-2) return z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
    return 1.0 - std::sin(z) / z;
}

// 1 - 2 J1(z)/z, stable near 0.
inline double one_minus_jinc(double z) {
    const double z2 = z * z;
    if (std::abs(z) < 1e-2) return z2 / 8.0 * (1.0 - z2 / 24.0 * (1.0 - z2 / 48.0));
    return 1.0 - 2.0 * std::cyl_bessel_j(1.0, z) / z;
}

// G(w) = int_0^1 a s^(a-1) e^{i w s} ds for w >= 0.
//
// Moderate w: Gauss-Jacobi with the s^(a-1) weight built in. Large w: the
// complete integral over (0, inf) minus the asymptotic expansion of the tail
// over (1, inf), whose terms decrease until k ~ w.
class PowerExpTransform {
public:
    explicit PowerExpTransform(double a)
        : a_(a), rule_(quad::jacobi_unit_left(96, a - 1.0)), gamma_a_(std::tgamma(a)) {}

    cplx operator()(double w) const {
        if (w < 0.0) return std::conj((*this)(-w));
        if (w <= kSwitch) {
            cplx s{};
            for (std::size_t i = 0; i < rule_.size(); ++i)
                s += rule_.weights[i] * std::exp(cplx(0.0, w * rule_.nodes[i]));
            return a_ * s;
        }
        // Gamma(a) (-i w)^(-a) = Gamma(a) w^-a e^{i pi a / 2}
        const cplx complete = gamma_a_ * std::pow(w, -a_) * std::polar(1.0, std::numbers::pi * a_ / 2.0);
        const double beta = a_ - 1.0;
        const cplx iw(0.0, w);
        cplx term(1.0), series(1.0);
        for (int k = 1; k < 200; ++k) {
            const cplx next = term * (-(beta - (k - 1))) / iw;
            if (std::abs(next) > std::abs(term)) break;  // asymptotic series turns over
            series += next;
            term = next;
            if (std::abs(term) < 1e-18) break;
        }
        const cplx tail = -std::exp(iw) / iw * series;
        return a_ * (complete - tail);
    }

private:
    static constexpr double kSwitch = 40.0;
    double a_;
    quad::Rule rule_;
    double gamma_a_;
};

}  // namespace detail

/// H(x) = sgn(x) 1_[-1,1](x); H_hat(xi) = -i (1 - cos 2 pi xi)/(pi xi).
inline Kernel make_haar() {
    Kernel k;
    k.id = "haar";
    k.dim = 1;
    k.spatial = [](const Vec& x) { return std::abs(x[0]) <= 1.0 ? detail::sgn(x[0]) : 0.0; };
    k.fourier = [](const Vec& xi) {
        const double z = xi[0];
        if (z == 0.0) return cplx{};
        const double s = std::sin(std::numbers::pi * z);
        return cplx(0.0, -2.0 * s * s / (std::numbers::pi * z));
    };
    k.fourier_tag = FourierTag::closed_form;
    k.support_radius = 1.0;
    k.cancellation_order = 0;
    k.fourier_decay = PowerBound{2.0 / std::numbers::pi, 1.0};
    k.fourier_vanishing = PowerBound{2.0 * std::numbers::pi, 1.0};
    k.odd = true;
    return k;
}

/// phi^(a)(x) = a |1 - |x||^(a-1) sgn(x) 1_(-1,1)(x), the kernel of the
/// generalized Marcinkiewicz integral.
inline Kernel make_gen_marcinkiewicz(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw kernel_error("generalized Marcinkiewicz order must be positive");
    Kernel k;
    std::ostringstream id;
    id << "gm:" << alpha;
    k.id = id.str();
    k.dim = 1;
    k.spatial = [alpha](const Vec& x) {
        const double ax = std::abs(x[0]);
        if (ax >= 1.0 || x[0] == 0.0) return 0.0;
        return alpha * std::pow(1.0 - ax, alpha - 1.0) * detail::sgn(x[0]);
    };
    auto G = std::make_shared<const detail::PowerExpTransform>(alpha);
    // psi_hat(xi) = -2i int_0^1 a (1-x)^(a-1) sin(w x) dx = -2i Im(e^{iw} conj G(w)), w = 2 pi xi.
    k.fourier = [G](const Vec& xi) {
        const double w = 2.0 * std::numbers::pi * xi[0];
        if (w == 0.0) return cplx{};
        const double im = std::imag(std::exp(cplx(0.0, w)) * std::conj((*G)(w)));
        return cplx(0.0, -2.0 * im);
    };
    k.fourier_tag = FourierTag::quadrature;
    k.support_radius = 1.0;
    k.cancellation_order = 0;
    // Leading large-xi terms: 2 a Gamma(a) (2 pi xi)^-a from the endpoint
    // singularity and 2/(2 pi xi) from the jump at 0.
    const double delta = std::min(alpha, 1.0);
    k.fourier_decay = PowerBound{2.0 * alpha * std::tgamma(alpha) + 2.0, delta};
    k.fourier_vanishing = PowerBound{4.0 * std::numbers::pi, 1.0};
    if (alpha != 1.0) k.singularities.push_back({1.0, alpha - 1.0});
    k.odd = true;
    return k;
}

/// Q(x) = d/dt P_t(x) at t = 1 with P_t = c_n t/(|x|^2+t^2)^((n+1)/2) and
/// c_n = Gamma((n+1)/2)/pi^((n+1)/2), so that P_t_hat(xi) = exp(-2 pi t |xi|).
inline Kernel make_poisson_deriv(int dim) {
    if (dim != 1 && dim != 2) throw kernel_error("Poisson kernel dimension must be 1 or 2");
    const double n = dim;
    const double cn = std::tgamma((n + 1.0) / 2.0) / std::pow(std::numbers::pi, (n + 1.0) / 2.0);
    Kernel k;
    k.id = "poisson-q:" + std::to_string(dim);
    k.dim = dim;
    k.spatial = [cn, n, dim](const Vec& x) {
        const double r2 = dim == 1 ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1];
        return cn * (r2 - n) / std::pow(r2 + 1.0, (n + 3.0) / 2.0);
    };
    k.fourier = [dim](const Vec& xi) {
        const double r = norm(xi, dim);
        return cplx(-2.0 * std::numbers::pi * r * std::exp(-2.0 * std::numbers::pi * r), 0.0);
    };
    k.fourier_tag = FourierTag::closed_form;
    k.cancellation_order = 0;
    k.fourier_decay = PowerBound{1.0, 8.0};  // exp(-2 pi r) dominates any power; C for delta = 8
    k.fourier_vanishing = PowerBound{2.0 * std::numbers::pi, 1.0};
    k.spatial_decay = PowerBound{cn, n + 1.0};
    k.radial = true;
    return k;
}

/// chi_0 = 1_B(0,1)/|B(0,1)|.
inline AveragingProfile make_ball_average(int dim) {
    if (dim != 1 && dim != 2) throw kernel_error("ball dimension must be 1 or 2");
    AveragingProfile p;
    Kernel& k = p.kernel;
    k.dim = dim;
    k.id = "ball:" + std::to_string(dim);
    k.support_radius = 1.0;
    k.radial = true;
    k.cancellation_order = -1;
    if (dim == 1) {
        k.spatial = [](const Vec& x) { return std::abs(x[0]) <= 1.0 ? 0.5 : 0.0; };
        k.fourier = [](const Vec& xi) {
            const double z = 2.0 * std::numbers::pi * xi[0];
            return cplx(z == 0.0 ? 1.0 : std::sin(z) / z, 0.0);
        };
        p.one_minus_hat = [](const Vec& xi) {
            return cplx(detail::one_minus_sinc(2.0 * std::numbers::pi * xi[0]), 0.0);
        };
    } else {
        k.spatial = [](const Vec& x) {
            return x[0] * x[0] + x[1] * x[1] <= 1.0 ? 1.0 / std::numbers::pi : 0.0;
        };
        k.fourier = [](const Vec& xi) {
            const double z = 2.0 * std::numbers::pi * std::hypot(xi[0], xi[1]);
            return cplx(z == 0.0 ? 1.0 : 2.0 * std::cyl_bessel_j(1.0, z) / z, 0.0);
        };
        p.one_minus_hat = [](const Vec& xi) {
            return cplx(detail::one_minus_jinc(2.0 * std::numbers::pi * std::hypot(xi[0], xi[1])), 0.0);
        };
    }
    k.fourier_tag = FourierTag::closed_form;
    p.lo = dim == 1 ? -1.0 : 0.0;
    p.hi = 1.0;
    return p;
}

/// Normalized indicator of [lo, hi] on the line.
inline AveragingProfile make_box_average(double lo, double hi) {
    if (!(hi > lo)) throw kernel_error("box average needs lo < hi");
    AveragingProfile p;
    Kernel& k = p.kernel;
    k.dim = 1;
    std::ostringstream id;
    id << "box:" << lo << ":" << hi;
    k.id = id.str();
    const double len = hi - lo, mid = 0.5 * (lo + hi);
    k.spatial = [lo, hi, len](const Vec& x) { return x[0] >= lo && x[0] <= hi ? 1.0 / len : 0.0; };
    k.fourier = [len, mid](const Vec& xi) {
        const double z = std::numbers::pi * xi[0] * len;
        const double s = z == 0.0 ? 1.0 : std::sin(z) / z;
        return std::polar(s, -2.0 * std::numbers::pi * xi[0] * mid);
    };
    k.support_radius = std::max(std::abs(lo), std::abs(hi));
    p.lo = lo;
    p.hi = hi;
    return p;
}

struct Moment {
    std::array<int, 2> exponents{};  ///< gamma
    double value = 0.0;
};

struct MomentReport {
    bool pass = false;
    double mass = 0.0;
    int order = 0;  ///< [alpha], the highest checked moment order
    std::vector<Moment> moments;
    std::string failure;
};

/// Membership in M^alpha: unit mass and vanishing moments x^gamma for
/// 1 <= |gamma| <= floor(alpha), each to within 1e-9.
inline MomentReport moment_class_check(const AveragingProfile& phi, double alpha) {
    constexpr double tol = 1e-9;
    MomentReport rep;
    rep.order = static_cast<int>(std::floor(alpha));
    const Kernel& k = phi.kernel;
    if (!k.spatial) throw kernel_error("averaging profile needs a spatial evaluator");

    auto integrate = [&](int g0, int g1) {
        if (k.dim == 1) {
            auto f = [&](double x) { return k.spatial(Vec{x, 0.0}) * std::pow(x, g0); };
            return quad::composite_integral(f, phi.lo, phi.hi, 8, 20);
        }
        // Polar quadrature over the disk of radius hi.
        const int n_theta = 64;
        double s = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * (j + 0.5) / n_theta;
            const double c = std::cos(th), sn = std::sin(th);
            auto f = [&](double r) {
                const double x = r * c, y = r * sn;
                return k.spatial(Vec{x, y}) * std::pow(x, g0) * std::pow(y, g1) * r;
            };
            s += quad::composite_integral(f, 0.0, phi.hi * (1.0 - 1e-15), 8, 20);
        }
        return s * 2.0 * std::numbers::pi / n_theta;
    };

    rep.mass = integrate(0, 0);
    rep.pass = std::abs(rep.mass - 1.0) < tol;
    if (!rep.pass) {
        std::ostringstream os;
        os << "mass " << rep.mass << " differs from 1";
        rep.failure = os.str();
    }
    for (int order = 1; order <= rep.order; ++order) {
        for (int g0 = order; g0 >= 0; --g0) {
            const int g1 = order - g0;
            if (k.dim == 1 && g1 != 0) continue;
            Moment m{{g0, g1}, integrate(g0, g1)};
            rep.moments.push_back(m);
            if (std::abs(m.value) >= tol && rep.pass) {
                rep.pass = false;
                std::ostringstream os;
                os << "moment x^(" << g0;
                if (k.dim == 2) os << "," << g1;
                os << ") = " << m.value << " does not vanish";
                rep.failure = os.str();
            }
        }
    }
    return rep;
}

/// psi = L_a - Phi * L_a with L_a the Riesz kernel; defined on the Fourier
/// side by psi_hat(xi) = (2 pi |xi|)^-a (1 - Phi_hat(xi)).
inline Kernel make_riesz_diff(double alpha, const AveragingProfile& phi) {
    const int n = phi.dim();
    if (!(alpha > 0.0) || !(alpha < n))
        throw kernel_error("Riesz-difference order must lie in (0, n)");
    const auto rep = moment_class_check(phi, alpha);
    if (!rep.pass) throw kernel_error("averaging profile is not in M^alpha: " + rep.failure);
    Kernel k;
    std::ostringstream id;
    id << "riesz-diff:" << alpha << ":" << phi.kernel.id;
    k.id = id.str();
    k.dim = n;
    k.fourier = [alpha, phi, n](const Vec& xi) {
        const double r = norm(xi, n);
        if (r == 0.0) return cplx{};
        return std::pow(2.0 * std::numbers::pi * r, -alpha) * phi.complement_hat(xi);
    };
    k.fourier_tag = FourierTag::closed_form;
    k.cancellation_order = 0;
    k.fourier_decay = PowerBound{2.0 * std::pow(2.0 * std::numbers::pi, -alpha), alpha};
    k.radial = phi.kernel.radial;
    return k;
}

/// psi = sgn - sgn * Phi on the line; psi_hat(xi) = -i (pi xi)^-1 (1 - Phi_hat(xi)).
inline Kernel make_sgn_diff(const AveragingProfile& phi) {
    if (phi.dim() != 1) throw kernel_error("sign-difference kernel is one-dimensional");
    const auto rep = moment_class_check(phi, 1.0);
    if (!rep.pass) throw kernel_error("averaging profile is not in M^1: " + rep.failure);
    Kernel k;
    k.id = "sgn-diff:" + phi.kernel.id;
    k.dim = 1;
    // (sgn * Phi)(x) = 2 int_{-inf}^x Phi - 1.
    k.spatial = [phi](const Vec& x) {
        const double lo = phi.lo, hi = phi.hi;
        double cdf;
        if (x[0] <= lo) cdf = 0.0;
        else if (x[0] >= hi) cdf = 1.0;
        else
            cdf = quad::composite_integral([&](double y) { return phi.kernel.spatial(Vec{y, 0.0}); },
                                           lo, x[0], 4, 20);
        return detail::sgn(x[0]) - (2.0 * cdf - 1.0);
    };
    k.fourier = [phi](const Vec& xi) {
        if (xi[0] == 0.0) return cplx{};
        return cplx(0.0, -1.0 / (std::numbers::pi * xi[0])) * phi.complement_hat(xi);
    };
    k.fourier_tag = FourierTag::closed_form;
    k.support_radius = std::max(std::abs(phi.lo), std::abs(phi.hi));
    k.cancellation_order = 0;
    k.fourier_decay = PowerBound{2.0 / std::numbers::pi, 1.0};
    return k;
}

/// Fourier-side band indicator psi_hat = 1_[lo, hi)(|xi|); no spatial form.
inline Kernel make_fourier_band(int dim, double lo, double hi) {
    if (!(hi > lo) || !(lo >= 0.0)) throw kernel_error("band needs 0 <= lo < hi");
    Kernel k;
    std::ostringstream id;
    id << "band:" << lo << ":" << hi;
    k.id = id.str();
    k.dim = dim;
    k.fourier = [lo, hi, dim](const Vec& xi) {
        const double r = norm(xi, dim);
        return cplx(r >= lo && r < hi ? 1.0 : 0.0, 0.0);
    };
    k.cancellation_order = lo > 0.0 ? 0 : -1;
    k.radial = true;
    return k;
}

/// Surrogate with psi_hat identically one (no Fourier decay).
inline Kernel make_flat_spectrum(int dim) {
    Kernel k;
    k.id = "flat";
    k.dim = dim;
    k.fourier = [](const Vec&) { return cplx(1.0, 0.0); };
    return k;
}

/// psi~bar(x) = conj(psi(-x)); Fourier side conj(psi_hat(xi)).
inline Kernel reflected_conjugate(const Kernel& psi) {
    Kernel k = psi;
    k.id = psi.id + "~";
    if (psi.spatial) {
        auto s = psi.spatial;
        k.spatial = [s](const Vec& x) { return s(Vec{-x[0], -x[1]}); };
    }
    auto f = psi.fourier;
    k.fourier = [f](const Vec& xi) { return std::conj(f(xi)); };
    return k;
}

}  // namespace lpkit
