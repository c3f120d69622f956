#pragma once

// Numerical checkers for the hypotheses placed on psi: tail and local
// integrability, the radial majorant, Fourier decay, non-degeneracy, and the
// scan of the vector-valued Hormander estimate for phi^(alpha).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpkit/grid.hpp"
#include "lpkit/kernels.hpp"
#include "lpkit/quadrature.hpp"

namespace lpkit {

class condition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A scalar with an explicit divergence state. `value` is +inf when divergent.
struct QuantityReport {
    double value = 0.0;
    bool finite = true;
    std::string note;

    static QuantityReport divergent(std::string why) {
        return {std::numeric_limits<double>::infinity(), false, std::move(why)};
    }
};

namespace detail {

inline void require_spatial(const Kernel& psi, const char* what) {
    if (!psi.has_spatial())
        throw condition_error(std::string(what) + " needs a spatial evaluator; kernel '" + psi.id +
                              "' is defined on the Fourier side only");
}

// int over the sphere |x| = r of g, as a function of r (1-D: two points).
template <class G>
double sphere_sum(const Kernel& psi, double r, G&& g) {
    if (psi.dim == 1) return g(Vec{r, 0.0}) + g(Vec{-r, 0.0});
    if (psi.radial) return 2.0 * std::numbers::pi * r * g(Vec{r, 0.0});
    const int n_theta = 64;
    double s = 0.0;
    for (int j = 0; j < n_theta; ++j) {
        const double th = 2.0 * std::numbers::pi * (j + 0.5) / n_theta;
        s += g(Vec{r * std::cos(th), r * std::sin(th)});
    }
    return s * 2.0 * std::numbers::pi * r / n_theta;
}

inline double surface_measure(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }

}  // namespace detail

/// Integral of psi, i.e. psi_hat(0).
inline double cancellation_defect(const Kernel& psi) { return std::abs(psi.hat(Vec{0.0, 0.0})); }

/// B_eps(psi) = int_{|x| > 1} |psi(x)| |x|^eps dx.
inline QuantityReport b_eps(const Kernel& psi, double eps) {
    if (!(eps > 0.0)) throw condition_error("B_eps needs eps > 0");
    if (psi.support_radius && *psi.support_radius <= 1.0) return {0.0, true, "support inside the unit ball"};
    detail::require_spatial(psi, "B_eps");
    const int n = psi.dim;
    auto radial = [&](double r) {
        return detail::sphere_sum(psi, r, [&](const Vec& x) { return std::abs(psi(x)); }) * std::pow(r, eps);
    };
    if (psi.support_radius) {
        const double R = *psi.support_radius;
        return {quad::composite_integral(radial, 1.0, R, 32, 16), true, "compact support"};
    }
    if (!psi.spatial_decay) return QuantityReport::divergent("no spatial decay bound: tail not certified");
    const double beta = psi.spatial_decay->exponent;
    const double tail_exp = eps + n - 1.0 - beta;  // integrand ~ r^tail_exp
    if (tail_exp >= -1.0) {
        std::ostringstream os;
        os << "tail |x|^" << eps << " |psi| ~ r^" << tail_exp << " dr is not integrable";
        return QuantityReport::divergent(os.str());
    }
    const double octaves = 48.0;
    const double R = std::exp2(octaves);
    double v = quad::geometric_tail_integral(radial, 1.0, octaves, 8, 16);
    // remainder <= C |S| int_R^inf r^tail_exp dr
    const double rem = psi.spatial_decay->constant * detail::surface_measure(n) *
                       std::pow(R, tail_exp + 1.0) / -(tail_exp + 1.0);
    std::ostringstream os;
    os << "tail remainder bound " << rem;
    return {v + rem, true, os.str()};
}

/// C_u(psi) = int_{|x| < 1} |psi(x)|^u dx.
inline QuantityReport c_u(const Kernel& psi, double u) {
    if (!(u > 1.0)) throw condition_error("C_u needs u > 1");
    detail::require_spatial(psi, "C_u");
    std::vector<double> cuts{0.0, 1.0};
    double worst = 0.0;
    for (const auto& s : psi.singularities) {
        if (s.radius > 1.0) continue;
        if (u * s.exponent <= -1.0) {
            std::ostringstream os;
            os << "|psi|^" << u << " ~ |r - " << s.radius << "|^" << u * s.exponent << " is not integrable";
            return QuantityReport::divergent(os.str());
        }
        if (s.radius > 0.0 && s.radius < 1.0) cuts.push_back(s.radius);
        worst = std::min(worst, u * s.exponent);
    }
    std::sort(cuts.begin(), cuts.end());
    auto sing_at = [&](double r) {
        for (const auto& s : psi.singularities)
            if (s.radius == r) return u * s.exponent;
        return 0.0;
    };
    auto radial = [&](double r) {
        return detail::sphere_sum(psi, r, [&](const Vec& x) { return std::pow(std::abs(psi(x)), u); });
    };
    const quad::Grading gr{6, 16, 1e-14};
    double v = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        const double ea = sing_at(a), eb = sing_at(b);
        const double mid = 0.5 * (a + b);
        v += quad::graded_integral_left(radial, a, mid, ea, gr) + quad::graded_integral_right(radial, mid, b, eb, gr);
    }
    return {v, true, worst < 0.0 ? "graded at integrable endpoint singularity" : ""};
}

/// ||H_psi||_1 with H_psi(x) = sup_{|y| >= |x|} |psi(y)|.
inline QuantityReport h_majorant_l1(const Kernel& psi) {
    detail::require_spatial(psi, "H_psi");
    for (const auto& s : psi.singularities)
        if (s.exponent < 0.0) {
            std::ostringstream os;
            os << "psi is unbounded near |x| = " << s.radius << ", so H_psi is infinite inside it";
            return QuantityReport::divergent(os.str());
        }
    const int n = psi.dim;
    auto sphere_max = [&](double r) {
        if (n == 1) return std::max(std::abs(psi(Vec{r, 0.0})), std::abs(psi(Vec{-r, 0.0})));
        if (psi.radial) return std::abs(psi(Vec{r, 0.0}));
        double m = 0.0;
        for (int j = 0; j < 256; ++j) {
            const double th = 2.0 * std::numbers::pi * j / 256.0;
            m = std::max(m, std::abs(psi(Vec{r * std::cos(th), r * std::sin(th)})));
        }
        return m;
    };
    // Sample radii: uniform on [0, R0], geometric beyond when the support is unbounded.
    const double R0 = psi.support_radius ? *psi.support_radius : 8.0;
    const std::size_t n_uniform = 1u << 16;
    std::vector<double> r;
    for (std::size_t k = 0; k <= n_uniform; ++k) r.push_back(R0 * static_cast<double>(k) / n_uniform);
    double tail = 0.0;
    std::string note = "compact support";
    if (!psi.support_radius) {
        if (!psi.spatial_decay) return QuantityReport::divergent("no spatial decay bound: tail not certified");
        const double beta = psi.spatial_decay->exponent;
        if (beta <= n) return QuantityReport::divergent("majorant tail r^-beta with beta <= n is not integrable");
        const double octaves = 40.0;
        for (int k = 1; k <= octaves * 64; ++k) r.push_back(R0 * std::exp2(k / 64.0));
        const double R = r.back();
        // int_R^inf C r^-beta |S| r^(n-1) dr
        tail = psi.spatial_decay->constant * detail::surface_measure(n) * std::pow(R, n - beta) / (beta - n);
        std::ostringstream os;
        os << "tail bound " << tail;
        note = os.str();
    }
    std::vector<double> H(r.size());
    double run = 0.0;
    for (std::size_t k = r.size(); k-- > 0;) {
        run = std::max(run, sphere_max(r[k]));
        H[k] = run;
    }
    // H is nonincreasing: right endpoint sums bound the integral from below
    // and are exact for step majorants with a jump on the sample grid.
    double v = 0.0;
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
        const double a = r[k], b = r[k + 1];
        const double shell = n == 1 ? 2.0 * (b - a) : std::numbers::pi * (b * b - a * a);
        v += H[k + 1] * shell;
    }
    return {v + tail, true, note};
}

struct DecayCheck {
    double c_est = 0.0;
    double c_refined = 0.0;
    bool pass = false;
};

/// max over 1 <= |xi| <= xi_max of |psi_hat(xi)| |xi|^delta, stable within 10% when xi_max doubles.
inline DecayCheck fourier_decay_check(const Kernel& psi, double delta, double xi_max = 64.0) {
    if (!(xi_max > 1.0)) throw condition_error("decay check needs xi_max > 1");
    std::vector<Vec> dirs;
    if (psi.dim == 1) dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    else if (psi.radial) dirs = {{1.0, 0.0}};
    else
        for (int j = 0; j < 16; ++j) {
            const double th = 2.0 * std::numbers::pi * j / 16.0;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    auto scan = [&](double top) {
        double c = 0.0;
        const long steps = std::lround((top - 1.0) * 32.0);
        for (long s = 0; s <= steps; ++s) {
            const double r = 1.0 + s / 32.0;
            for (const Vec& d : dirs) c = std::max(c, std::abs(psi.hat(Vec{r * d[0], r * d[1]})) * std::pow(r, delta));
        }
        return c;
    };
    DecayCheck out;
    out.c_est = scan(xi_max);
    out.c_refined = scan(2.0 * xi_max);
    out.pass = std::isfinite(out.c_est) && out.c_est > 0.0 ? std::abs(out.c_refined / out.c_est - 1.0) <= 0.1
                                                           : out.c_refined == 0.0 && out.c_est == 0.0;
    return out;
}

enum class NondegMode { continuous, dyadic };

struct NondegReport {
    double min_value = 0.0;
    Vec argmin{};
    bool pass = false;
};

/// continuous: min over unit directions of sup_t |psi_hat(t xi)|;
/// dyadic: min over the annulus 1 <= |xi| < 2 of max_k |psi_hat(2^k xi)|. Passes above 1e-8.
inline NondegReport nondegeneracy(const Kernel& psi, NondegMode mode) {
    std::vector<Vec> dirs;
    if (psi.dim == 1) dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    else
        for (int j = 0; j < 64; ++j) {
            const double th = 2.0 * std::numbers::pi * j / 64.0;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    NondegReport rep;
    rep.min_value = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vec& xi, double v) {
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.argmin = xi;
        }
    };
    if (mode == NondegMode::continuous) {
        for (const Vec& d : dirs) {
            double best = 0.0;
            for (int j = -20 * 64; j <= 20 * 64; ++j) {
                const double t = std::exp2(j / 64.0);
                best = std::max(best, std::abs(psi.hat(Vec{t * d[0], t * d[1]})));
            }
            consider(d, best);
        }
    } else {
        const int radial_samples = psi.dim == 1 ? 1024 : 256;
        for (const Vec& d : dirs)
            for (int s = 0; s < radial_samples; ++s) {
                const double r = 1.0 + static_cast<double>(s) / radial_samples;
                double best = 0.0;
                for (int k = -30; k <= 30; ++k) {
                    const double t = std::ldexp(r, k);
                    best = std::max(best, std::abs(psi.hat(Vec{t * d[0], t * d[1]})));
                }
                consider(Vec{r * d[0], r * d[1]}, best);
            }
    }
    rep.pass = rep.min_value > 1e-8;
    return rep;
}

/// L(x, y) = int_0^inf |psi_t(x - y) - psi_t(x)|^2 dt/t for a 1-D kernel,
/// computed after u = x/t as x^-2 int_0^inf |psi(u c) - psi(u)|^2 u du with
/// c = 1 - y/x, split at every support edge and singular radius.
/// `resolution` is the number of quadrature panels per octave of grading.
inline double hormander_L(const Kernel& psi, double x, double y, int resolution = 16) {
    if (psi.dim != 1) throw condition_error("Hormander scan is one-dimensional");
    detail::require_spatial(psi, "hormander_L");
    if (!(std::abs(y) < std::abs(x) / 2.0)) {
        std::ostringstream os;
        os << "need |y| < |x|/2, got x = " << x << ", y = " << y;
        throw condition_error(os.str());
    }
    if (resolution < 1) throw condition_error("resolution must be >= 1");
    if (y == 0.0) return 0.0;
    // Odd kernels: L(x, y) = L(-x, -y); for general kernels reflect psi instead.
    Kernel k = psi;
    if (x < 0.0) {
        if (!psi.odd) k = reflected_conjugate(psi);
        x = -x;
        y = -y;
    }
    const double c = 1.0 - y / x;
    auto integrand = [&](double u) {
        const double d = k(Vec{u * c, 0.0}) - k(Vec{u, 0.0});
        return d * d * u;
    };
    // Breakpoints: radii r where psi is singular or stops, seen at u = r and u = r / c.
    struct Edge {
        double u;
        double exponent;
    };
    std::vector<Edge> edges;
    for (const auto& s : k.singularities) {
        edges.push_back({s.radius, std::min(0.0, 2.0 * s.exponent)});
        edges.push_back({s.radius / c, std::min(0.0, 2.0 * s.exponent)});
    }
    if (k.support_radius) {
        edges.push_back({*k.support_radius, 0.0});
        edges.push_back({*k.support_radius / c, 0.0});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.u < b.u; });
    // Coincident edges keep the strongest singularity.
    std::vector<Edge> merged;
    for (const Edge& e : edges) {
        if (!merged.empty() && std::abs(merged.back().u - e.u) <= 1e-15 * e.u)
            merged.back().exponent = std::min(merged.back().exponent, e.exponent);
        else
            merged.push_back(e);
    }
    edges.swap(merged);
    const quad::Grading gr{resolution / 4 > 0 ? resolution / 4 : 1, 16, 1e-14};
    double lo = 0.0, e_lo = 0.0, v = 0.0;
    for (const Edge& e : edges) {
        const double mid = 0.5 * (lo + e.u);
        v += quad::graded_integral_left(integrand, lo, mid, e_lo, gr) +
             quad::graded_integral_right(integrand, mid, e.u, e.exponent, gr);
        lo = e.u;
        e_lo = e.exponent;
    }
    if (!k.support_radius) {
        const double a = lo > 0.0 ? lo : 1.0;
        if (lo == 0.0) v += quad::graded_integral_left(integrand, 0.0, a, 0.0, gr);
        v += quad::geometric_tail_integral(integrand, a, 60.0, std::max(4, resolution / 2), 16);
    }
    return v / (x * x);
}

struct ScanOptions {
    int j_min = -8, j_max = 8;  ///< x = 2^(j / (4 density))
    int m_min = 2, m_max = 12;  ///< rho = 2^(-m / density)
    int density = 1;
    int resolution = 16;
    double margin = 0.5;  ///< admissible |y| < margin |x|
};

struct ScanPoint {
    double x = 0.0, y = 0.0, ratio = 0.0;
};

struct ScanReport {
    double alpha = 0.0;
    double max_ratio = 0.0;
    ScanPoint argmax;
    double refined_max = 0.0;
    double refinement_delta = 0.0;
    std::size_t points = 0;
    bool pass = false;
};

/// max of R = L(x, y) |x|^(1 + 2 alpha) / |y|^(2 alpha - 1) over one scan grid.
inline ScanPoint scan_max(const Kernel& psi, double alpha, const ScanOptions& opt, std::size_t* count = nullptr) {
    ScanPoint best;
    best.ratio = -1.0;
    std::size_t n = 0;
    const int d = opt.density;
    for (int j = opt.j_min * d; j <= opt.j_max * d; ++j) {
        const double ax = std::exp2(j / (4.0 * d));
        for (int m = opt.m_min * d; m <= opt.m_max * d; ++m) {
            const double rho = std::exp2(-static_cast<double>(m) / d);
            if (!(rho < opt.margin)) continue;
            for (int sx : {1, -1})
                for (int sy : {1, -1}) {
                    const double x = sx * ax, y = sy * rho * ax;
                    const double L = hormander_L(psi, x, y, opt.resolution);
                    const double R = L * std::pow(ax, 1.0 + 2.0 * alpha) / std::pow(std::abs(y), 2.0 * alpha - 1.0);
                    ++n;
                    if (!std::isfinite(R)) return {x, y, R};
                    if (R > best.ratio) best = {x, y, R};
                }
        }
    }
    if (count) *count = n;
    return best;
}

/// Scan over all four sign quadrants, then again with twice the (x, y)
/// density and twice the quadrature resolution.
inline ScanReport mar_scan(double alpha, const ScanOptions& opt = {}) {
    if (!(alpha > 0.5 && alpha < 1.5)) {
        std::ostringstream os;
        os << "scan order " << alpha << " must lie in (1/2, 3/2)";
        throw condition_error(os.str());
    }
    const Kernel psi = make_gen_marcinkiewicz(alpha);
    ScanReport rep;
    rep.alpha = alpha;
    rep.argmax = scan_max(psi, alpha, opt, &rep.points);
    rep.max_ratio = rep.argmax.ratio;
    ScanOptions fine = opt;
    fine.density *= 2;
    fine.resolution *= 2;
    rep.refined_max = scan_max(psi, alpha, fine).ratio;
    rep.refinement_delta = std::abs(rep.refined_max / rep.max_ratio - 1.0);
    rep.pass = std::isfinite(rep.max_ratio) && std::isfinite(rep.refined_max) && rep.refinement_delta < 0.05;
    return rep;
}

}  // namespace lpkit
