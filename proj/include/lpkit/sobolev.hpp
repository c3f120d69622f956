#pragma once

// Riesz and Bessel potentials, the square functions U_alpha, T_alpha, E_alpha,
// D_alpha built from f - Phi_t * f, weighted Sobolev norms, and the
// norm-equivalence experiments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpkit/grid.hpp"
#include "lpkit/kernels.hpp"
#include "lpkit/multiplier.hpp"
#include "lpkit/squarefn.hpp"
#include "lpkit/weights.hpp"

namespace lpkit {

class sobolev_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_mean_zero(const SampledField& f, const char* op) {
    const SpectralField F = forward_transform(f);
    const std::size_t dc = 0;  // FFT order: zero frequency first
    // |f_hat(0)| is in physical units; compare against ||f||_2 which is as well
    // for the unit-free tolerance of 1e-9.
    const double nf = l2_norm(f);
    if (std::abs(F.coeffs[dc]) >= 1e-9 * std::max(nf, std::numeric_limits<double>::min()) && nf > 0.0) {
        std::ostringstream os;
        os << op << " needs a mean-zero field: |f_hat(0)| = " << std::abs(F.coeffs[dc])
           << " (Riesz symbols are singular at xi = 0 and the zero mode is not defined; "
              "subtract the mean first)";
        throw sobolev_error(os.str());
    }
}

inline void require_riesz_order(double alpha, int dim) {
    if (!(alpha > 0.0 && alpha < dim)) {
        std::ostringstream os;
        os << "Riesz order " << alpha << " must lie in (0, " << dim << ")";
        throw sobolev_error(os.str());
    }
}

inline void require_moment_class(const AveragingProfile& phi, double alpha) {
    const MomentReport r = moment_class_check(phi, alpha);
    if (!r.pass) throw sobolev_error("averaging profile rejected: " + r.failure);
}

}  // namespace detail

/// I_alpha f = F^-1((2 pi |xi|)^-alpha f_hat), f mean-zero, 0 < alpha < n.
inline SampledField riesz_potential(const SampledField& f, double alpha) {
    detail::require_riesz_order(alpha, f.grid.dim);
    detail::require_mean_zero(f, "Riesz potential");
    return apply_multiplier(riesz_symbol(alpha, f.grid.dim), f);
}

/// I_{-beta} f = F^-1((2 pi |xi|)^beta f_hat), beta > 0, f mean-zero.
inline SampledField riesz_derivative(const SampledField& f, double beta) {
    if (!(beta > 0.0)) throw sobolev_error("Riesz derivative order must be positive");
    detail::require_mean_zero(f, "Riesz derivative");
    return apply_multiplier(riesz_symbol(-beta, f.grid.dim), f);
}

/// J_alpha f = F^-1((1 + 4 pi^2 |xi|^2)^(-alpha/2) f_hat). Negative alpha gives the inverse.
inline SampledField bessel_potential(const SampledField& f, double alpha) {
    return apply_multiplier(bessel_symbol(alpha, f.grid.dim), f);
}

/// U_alpha f(x) = (int_0^inf |f(x) - Phi_t * f(x)|^2 t^(-2 alpha) dt/t)^(1/2).
inline SampledField u_alpha(const SampledField& f, double alpha, const AveragingProfile& phi, const LogTimeGrid& tg) {
    if (!(alpha > 0.0)) throw sobolev_error("smoothness order must be positive");
    detail::require_moment_class(phi, alpha);
    const auto& nodes = tg.nodes();
    std::vector<double> w(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) w[j] = tg.weight() * std::pow(nodes[j], -2.0 * alpha);
    return detail::square_function(
        f, nodes.size(),
        [&](std::size_t j, const Vec& xi) {
            return phi.complement_hat(Vec{nodes[j] * xi[0], nodes[j] * xi[1]});
        },
        w);
}

/// T_alpha f = U_alpha(I_alpha f).
inline SampledField t_alpha(const SampledField& f, double alpha, const AveragingProfile& phi, const LogTimeGrid& tg) {
    return u_alpha(riesz_potential(f, alpha), alpha, phi, tg);
}

/// T_alpha as one g-type function with layer symbol (2 pi |xi|)^-alpha (1 - Phi_hat(t xi)) t^-alpha.
inline SampledField t_alpha_direct(const SampledField& f, double alpha, const AveragingProfile& phi,
                                   const LogTimeGrid& tg) {
    detail::require_riesz_order(alpha, f.grid.dim);
    detail::require_mean_zero(f, "T_alpha");
    detail::require_moment_class(phi, alpha);
    const auto& nodes = tg.nodes();
    const int n = f.grid.dim;
    std::vector<double> w(nodes.size(), tg.weight());
    return detail::square_function(
        f, nodes.size(),
        [&](std::size_t j, const Vec& xi) {
            const double r = detail::two_pi_abs(xi, n);
            if (r == 0.0) return cplx{};
            const double t = nodes[j];
            return std::pow(r * t, -alpha) * phi.complement_hat(Vec{t * xi[0], t * xi[1]});
        },
        w);
}

/// E_alpha f(x) = (sum_k |f(x) - Phi_{2^k} * f(x)|^2 2^(-2 k alpha))^(1/2).
inline SampledField e_alpha(const SampledField& f, double alpha, const AveragingProfile& phi, const DyadicRange& kr) {
    if (!(alpha > 0.0)) throw sobolev_error("smoothness order must be positive");
    detail::require_moment_class(phi, alpha);
    std::vector<double> w(kr.size());
    for (std::size_t j = 0; j < kr.size(); ++j) w[j] = std::exp2(-2.0 * alpha * (kr.k_min + static_cast<int>(j)));
    return detail::square_function(
        f, kr.size(),
        [&](std::size_t j, const Vec& xi) {
            const double s = std::ldexp(1.0, kr.k_min + static_cast<int>(j));
            return phi.complement_hat(Vec{s * xi[0], s * xi[1]});
        },
        w);
}

/// D_alpha f = Delta_psi f with psi_hat = (2 pi |xi|)^-alpha (1 - Phi_hat).
inline SampledField d_alpha(const SampledField& f, double alpha, const AveragingProfile& phi, const DyadicRange& kr) {
    detail::require_riesz_order(alpha, f.grid.dim);
    detail::require_mean_zero(f, "D_alpha");
    return delta_psi(f, make_riesz_diff(alpha, phi), kr);
}

/// ||f||_{p,alpha,w} = ||g||_{p,w} with f = J_alpha g.
inline double sobolev_norm(const SampledField& f, double alpha, double p, const Weight& w) {
    if (!(alpha >= 0.0)) throw sobolev_error("Sobolev order must be nonnegative");
    const Grid& g = f.grid;
    // The inverse symbol is radial and increasing; its grid maximum sits at the corner.
    const double r = detail::two_pi_abs(Vec{g.nyquist(), g.dim == 2 ? g.nyquist() : 0.0}, g.dim);
    const double amp = std::pow(1.0 + r * r, alpha / 2.0);
    const double limit = 1.0 / (1e3 * std::numeric_limits<double>::epsilon());
    if (!(amp <= limit)) {
        std::ostringstream os;
        os << "inverse Bessel symbol reaches " << amp << " on this grid, beyond the usable dynamic range "
           << limit;
        throw sobolev_error(os.str());
    }
    return weighted_norm(bessel_potential(f, -alpha), p, w);
}

/// Deterministic family of mean-zero test fields.
struct TestFamily {
    std::vector<SampledField> members;
    std::vector<std::string> labels;

    std::size_t size() const { return members.size(); }

    /// 5 widths x 2 centres of Gaussians, 5 modulated Gaussians, 5 smooth
    /// bumps; parameters jittered by the seed, each member mean-subtracted.
    static TestFamily make_default(const Grid& g, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> jitter(0.9, 1.1), unit(-1.0, 1.0);
        const double L = g.half_length;
        const int n = g.dim;
        auto r2 = [n](const Vec& x, const Vec& c) {
            const double d0 = x[0] - c[0], d1 = n == 2 ? x[1] - c[1] : 0.0;
            return d0 * d0 + d1 * d1;
        };
        auto random_centre = [&](double span) {
            return Vec{span * unit(rng), n == 2 ? span * unit(rng) : 0.0};
        };
        TestFamily fam;
        auto add = [&](std::string label, std::function<double(const Vec&)> fn) {
            SampledField f = SampledField::from_function(g, [&](const Vec& x) { return cplx(fn(x), 0.0); });
            cplx mean{};
            for (const auto& z : f.values) mean += z;
            mean /= static_cast<double>(f.size());
            for (auto& z : f.values) z -= mean;
            fam.members.push_back(std::move(f));
            fam.labels.push_back(std::move(label));
        };
        const double scale = L / 32.0;
        for (double s0 : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            for (int side : {-1, 1}) {
                const double s = s0 * scale * jitter(rng);
                Vec c = random_centre(0.15 * L);
                c[0] += side * 0.2 * L;
                std::ostringstream os;
                os << "gauss(s=" << s << ")";
                add(os.str(), [=](const Vec& x) { return std::exp(-r2(x, c) / (2.0 * s * s)); });
            }
        }
        for (double nu0 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double nu = nu0 * jitter(rng), s = 2.0 * scale * jitter(rng);
            const Vec c = random_centre(0.25 * L);
            std::ostringstream os;
            os << "modulated(nu=" << nu << ")";
            add(os.str(), [=](const Vec& x) {
                return std::exp(-r2(x, c) / (2.0 * s * s)) * std::cos(2.0 * std::numbers::pi * nu * (x[0] - c[0]));
            });
        }
        for (double rad0 : {1.0, 2.0, 3.0, 4.0, 6.0}) {
            const double rad = rad0 * scale * jitter(rng);
            const Vec c = random_centre(0.5 * L);
            std::ostringstream os;
            os << "bump(r=" << rad << ")";
            add(os.str(), [=](const Vec& x) {
                const double q = r2(x, c) / (rad * rad);
                return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0;
            });
        }
        return fam;
    }

    static TestFamily single(SampledField f, std::string label = "member") {
        TestFamily fam;
        fam.members.push_back(std::move(f));
        fam.labels.push_back(std::move(label));
        return fam;
    }

    TestFamily scaled(double c) const {
        TestFamily out = *this;
        for (auto& f : out.members) f *= cplx(c, 0.0);
        return out;
    }
};

/// A ratio numerator(f) / denominator(f) evaluated per family member.
struct RatioSpec {
    std::string name;
    std::function<double(const SampledField&)> numerator;
    std::function<double(const SampledField&)> denominator;
};

struct RatioReport {
    std::string op;
    double p = 2.0;
    std::string weight;
    std::size_t members = 0;
    std::vector<double> ratios;
    std::vector<std::string> skipped;
    double min = 0.0, max = 0.0, spread = 0.0;
};

inline RatioReport equivalence_experiment(const TestFamily& family, const RatioSpec& spec, double p, const Weight& w) {
    if (family.members.empty()) throw sobolev_error("test family is empty");
    RatioReport rep;
    rep.op = spec.name;
    rep.p = p;
    rep.weight = w.id;
    rep.members = family.size();
    for (std::size_t i = 0; i < family.size(); ++i) {
        const double den = spec.denominator(family.members[i]);
        if (!(den > 0.0) || !std::isfinite(den)) {
            rep.skipped.push_back(family.labels[i]);
            continue;
        }
        rep.ratios.push_back(spec.numerator(family.members[i]) / den);
    }
    if (rep.ratios.empty()) throw sobolev_error("every family member has a zero denominator");
    rep.min = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    rep.max = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    rep.spread = rep.min > 0.0 ? rep.max / rep.min : std::numeric_limits<double>::infinity();
    return rep;
}

/// ||g_psi f||_{p,w} / ||f||_{p,w}.
inline RatioSpec gfun_ratio(const Kernel& psi, const LogTimeGrid& tg, double p, const Weight& w) {
    return {"gfun:" + psi.id, [=](const SampledField& f) { return weighted_norm(g_psi(f, psi, tg), p, w); },
            [=](const SampledField& f) { return weighted_norm(f, p, w); }};
}

/// ||Delta_psi f||_{p,w} / ||f||_{p,w}.
inline RatioSpec delta_ratio(const Kernel& psi, const DyadicRange& kr, double p, const Weight& w) {
    return {"delta:" + psi.id, [=](const SampledField& f) { return weighted_norm(delta_psi(f, psi, kr), p, w); },
            [=](const SampledField& f) { return weighted_norm(f, p, w); }};
}

/// (||E_alpha(J_alpha g)||_{p,w} + ||J_alpha g||_{p,w}) / ||g||_{p,w}.
inline RatioSpec sobolev_ratio(double alpha, const AveragingProfile& phi, const DyadicRange& kr, double p,
                               const Weight& w) {
    std::ostringstream os;
    os << "sobolev:" << alpha << ":" << phi.kernel.id;
    return {os.str(),
            [=](const SampledField& g) {
                const SampledField jg = bessel_potential(g, alpha);
                return weighted_norm(e_alpha(jg, alpha, phi, kr), p, w) + weighted_norm(jg, p, w);
            },
            [=](const SampledField& g) { return weighted_norm(g, p, w); }};
}

/// (||f||_{p,w} + ||E_alpha f||_{p,w}) / ||f||_{p,alpha,w}.
inline RatioSpec e_alpha_ratio(double alpha, const AveragingProfile& phi, const DyadicRange& kr, double p,
                               const Weight& w) {
    std::ostringstream os;
    os << "e-alpha:" << alpha << ":" << phi.kernel.id;
    return {os.str(),
            [=](const SampledField& f) {
                return weighted_norm(f, p, w) + weighted_norm(e_alpha(f, alpha, phi, kr), p, w);
            },
            [=](const SampledField& f) { return sobolev_norm(f, alpha, p, w); }};
}

/// Spectral bracket for the p = 2, w = 1 Sobolev ratio: with
/// a(xi) = e(xi) (1 + 4 pi^2 |xi|^2)^-alpha, e(xi) = sum_k |1 - Phi_hat(2^k xi)|^2 2^(-2 k alpha),
/// and b(xi) = (1 + 4 pi^2 |xi|^2)^-alpha, every ratio lies in
/// [sqrt(min a) + sqrt(min b), sqrt(max a) + sqrt(max b)] over nonzero grid frequencies.
struct SpectralBracket {
    double lower = 0.0, upper = 0.0;
    double spread() const { return upper / lower; }
};

inline SpectralBracket sobolev_spectral_bracket(const Grid& g, double alpha, const AveragingProfile& phi,
                                                const DyadicRange& kr) {
    double amin = std::numeric_limits<double>::infinity(), amax = 0.0;
    double bmin = amin, bmax = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const Vec xi = g.frequency(i);
        const double r = detail::two_pi_abs(xi, g.dim);
        double e = 0.0;
        for (int k = kr.k_min; k <= kr.k_max; ++k) {
            const double s = std::ldexp(1.0, k);
            e += std::norm(phi.complement_hat(Vec{s * xi[0], s * xi[1]})) * std::exp2(-2.0 * alpha * k);
        }
        const double b = std::pow(1.0 + r * r, -alpha);
        amin = std::min(amin, e * b);
        amax = std::max(amax, e * b);
        bmin = std::min(bmin, b);
        bmax = std::max(bmax, b);
    }
    return {std::sqrt(amin) + std::sqrt(bmin), std::sqrt(amax) + std::sqrt(bmax)};
}

}  // namespace lpkit
