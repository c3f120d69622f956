#pragma once

// Muckenhoupt A_p weights: evaluators, a lower estimate of [w]_{A_p} over a
// finite family of balls, weighted L^p norms and the duality weight.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpkit/grid.hpp"
#include "lpkit/quadrature.hpp"

namespace lpkit {

class weight_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class WeightKind { constant, power, product, sampled };

struct Weight {
    WeightKind kind = WeightKind::constant;
    std::string id = "const";
    std::function<double(const Vec&)> eval;
    /// For power weights: |x|^exponent, singular or vanishing at the origin.
    std::optional<double> power_exponent;

    double operator()(const Vec& x) const { return eval(x); }
    bool singular_at_origin() const { return power_exponent && *power_exponent < 0.0; }
};

inline Weight make_constant_weight(double c = 1.0) {
    if (!(c > 0.0)) throw weight_error("constant weight must be positive");
    Weight w;
    w.kind = WeightKind::constant;
    std::ostringstream id;
    id << "const";
    if (c != 1.0) id << ":" << c;
    w.id = id.str();
    w.eval = [c](const Vec&) { return c; };
    return w;
}

/// |x|^a.
inline Weight make_power_weight(double a) {
    Weight w;
    w.kind = WeightKind::power;
    std::ostringstream id;
    id << "pow:" << a;
    w.id = id.str();
    w.eval = [a](const Vec& x) { return std::pow(std::hypot(x[0], x[1]), a); };
    w.power_exponent = a;
    return w;
}

inline Weight make_product_weight(const Weight& u, const Weight& v) {
    Weight w;
    w.kind = WeightKind::product;
    w.id = u.id + "*" + v.id;
    auto ue = u.eval, ve = v.eval;
    w.eval = [ue, ve](const Vec& x) { return ue(x) * ve(x); };
    if (u.power_exponent && v.kind == WeightKind::constant) w.power_exponent = u.power_exponent;
    if (v.power_exponent && u.kind == WeightKind::constant) w.power_exponent = v.power_exponent;
    if (u.power_exponent && v.power_exponent)
        w.power_exponent = *u.power_exponent + *v.power_exponent;
    return w;
}

/// Piecewise-constant weight from grid samples (nearest grid point, periodic).
inline Weight make_sampled_weight(const Grid& g, std::vector<double> samples) {
    if (samples.size() != g.size()) throw weight_error("sample count does not match grid");
    for (double s : samples)
        if (!(s > 0.0) || !std::isfinite(s)) throw weight_error("sampled weight must be positive and finite");
    Weight w;
    w.kind = WeightKind::sampled;
    w.id = "sampled";
    auto data = std::make_shared<const std::vector<double>>(std::move(samples));
    w.eval = [g, data](const Vec& x) {
        const double h = g.spacing();
        auto idx = [&](double c) { return g.wrap_index(std::lround((c + g.half_length) / h)); };
        return g.dim == 1 ? (*data)[idx(x[0])] : (*data)[idx(x[0]) * g.n + idx(x[1])];
    };
    return w;
}

inline Weight weight_from_id(const std::string& id) {
    if (id == "const") return make_constant_weight();
    if (id.rfind("pow:", 0) == 0) {
        const std::string tail = id.substr(4);
        char* end = nullptr;
        const double a = std::strtod(tail.c_str(), &end);
        if (tail.empty() || end != tail.c_str() + tail.size())
            throw weight_error("bad exponent in weight id '" + id + "'");
        return make_power_weight(a);
    }
    throw weight_error("unknown weight id '" + id + "'");
}

/// x -> w(-x)^(-p'/p) with 1/p + 1/p' = 1.
inline Weight dual_weight(const Weight& w, double p) {
    if (!(p > 1.0)) throw weight_error("dual weight needs p > 1");
    const double e = -1.0 / (p - 1.0);  // -p'/p
    Weight d;
    d.kind = w.kind == WeightKind::constant ? WeightKind::constant : w.kind;
    std::ostringstream id;
    id << "dual(" << w.id << "," << p << ")";
    d.id = id.str();
    auto ev = w.eval;
    d.eval = [ev, e](const Vec& x) { return std::pow(ev(Vec{-x[0], -x[1]}), e); };
    if (w.power_exponent) d.power_exponent = *w.power_exponent * e;
    return d;
}

/// Sample points for weighted sums: grid points, shifted by h/2 per axis when
/// the weight is singular at the origin (the grid contains x = 0).
inline double weight_at_sample(const Weight& w, const Grid& g, std::size_t i) {
    Vec x = g.point(i);
    if (w.singular_at_origin()) {
        x[0] += 0.5 * g.spacing();
        if (g.dim == 2) x[1] += 0.5 * g.spacing();
    }
    return w(x);
}

/// (int |f|^p w)^(1/p) by the Riemann sum h^n sum |f(x_m)|^p w(x_m).
inline double weighted_norm(const SampledField& f, double p, const Weight& w) {
    if (!(p >= 1.0)) throw weight_error("weighted norm needs p >= 1");
    const Grid& g = f.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f.values[i]);
        if (a == 0.0) continue;
        s += std::pow(a, p) * weight_at_sample(w, g, i);
    }
    return std::pow(s * g.cell_volume(), 1.0 / p);
}

/// Finite family of balls B(center, 2^(j / radii_per_octave)) with centers on
/// a lattice of step center_step inside [-L, L)^n.
struct Ball {
    Vec center{};
    double radius = 1.0;
};

struct BallFamily {
    int dim = 1;
    std::vector<Ball> balls;

    static BallFamily lattice(const Grid& g, int j_min, int j_max, double center_step,
                              int radii_per_octave = 1) {
        if (j_min > j_max) throw weight_error("ball family radius range is empty");
        if (!(center_step > 0.0)) throw weight_error("ball center step must be positive");
        if (radii_per_octave < 1) throw weight_error("radii per octave must be >= 1");
        BallFamily fam;
        fam.dim = g.dim;
        std::vector<double> coords;
        const long kmax = static_cast<long>(std::floor(g.half_length / center_step));
        for (long k = -kmax; k <= kmax; ++k) {
            const double c = static_cast<double>(k) * center_step;
            if (c >= -g.half_length && c < g.half_length) coords.push_back(c);
        }
        for (int j = j_min * radii_per_octave; j <= j_max * radii_per_octave; ++j) {
            const double r = std::exp2(static_cast<double>(j) / radii_per_octave);
            if (g.dim == 1) {
                for (double c : coords) fam.balls.push_back({{c, 0.0}, r});
            } else {
                for (double c0 : coords)
                    for (double c1 : coords) fam.balls.push_back({{c0, c1}, r});
            }
        }
        return fam;
    }
};

struct ApEstimate {
    double value = 1.0;  ///< +inf when some ball average diverges
    bool finite = true;
    Ball argmax{};
};

namespace detail {

// Average of |x|^e-type integrands f over a ball. `singular_exponent` is the
// local power at the origin (0 when f is regular there).
template <class F>
double ball_average(F&& f, const Ball& b, int dim, double singular_exponent, bool has_singular_point) {
    const quad::Grading gr{4, 12, 1e-12};
    if (dim == 1) {
        const double lo = b.center[0] - b.radius, hi = b.center[0] + b.radius;
        auto g1 = [&](double x) { return f(Vec{x, 0.0}); };
        double s;
        if (has_singular_point && lo < 0.0 && hi > 0.0) {
            s = quad::graded_integral_right(g1, lo, 0.0, singular_exponent, gr) +
                quad::graded_integral_left(g1, 0.0, hi, singular_exponent, gr);
        } else if (has_singular_point && lo >= 0.0) {
            s = quad::graded_integral_left(g1, lo, hi, lo == 0.0 ? singular_exponent : 0.0, gr);
        } else if (has_singular_point && hi <= 0.0) {
            s = quad::graded_integral_right(g1, lo, hi, hi == 0.0 ? singular_exponent : 0.0, gr);
        } else {
            s = quad::composite_integral(g1, lo, hi, 8, 16);
        }
        return s / (2.0 * b.radius);
    }
    const double area = std::numbers::pi * b.radius * b.radius;
    const int n_theta = 64;
    double s = 0.0;
    const double cn = std::hypot(b.center[0], b.center[1]);
    if (has_singular_point && cn < b.radius) {
        // Polar about the origin; rho(theta) is the distance to the circle.
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * (j + 0.5) / n_theta;
            const double ct = std::cos(th), st = std::sin(th);
            const double proj = b.center[0] * ct + b.center[1] * st;
            const double rho = proj + std::sqrt(proj * proj - cn * cn + b.radius * b.radius);
            auto radial = [&](double r) { return f(Vec{r * ct, r * st}) * r; };
            s += quad::graded_integral_left(radial, 0.0, rho, singular_exponent + 1.0, gr);
        }
    } else {
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * std::numbers::pi * (j + 0.5) / n_theta;
            const double ct = std::cos(th), st = std::sin(th);
            auto radial = [&](double r) {
                return f(Vec{b.center[0] + r * ct, b.center[1] + r * st}) * r;
            };
            s += quad::composite_integral(radial, 0.0, b.radius, 8, 16);
        }
    }
    return s * 2.0 * std::numbers::pi / n_theta / area;
}

}  // namespace detail

/// max over the family of (avg_B w)(avg_B w^(-1/(p-1)))^(p-1); a lower bound for [w]_{A_p}.
inline ApEstimate ap_constant_estimate(const Weight& w, double p, const BallFamily& balls) {
    if (!(p > 1.0)) throw weight_error("A_p estimate needs p > 1");
    if (balls.balls.empty()) throw weight_error("ball family is empty");
    const int n = balls.dim;
    const double dual_exp = -1.0 / (p - 1.0);
    const bool sing = w.power_exponent.has_value();
    const double a = sing ? *w.power_exponent : 0.0;
    auto w_checked = [&](const Vec& x) {
        const double v = w(x);
        if (!(v > 0.0) || !std::isfinite(v)) {
            // The origin itself is excluded for power weights by the quadrature.
            std::ostringstream os;
            os << "weight is not positive at (" << x[0] << ", " << x[1] << ")";
            throw weight_error(os.str());
        }
        return v;
    };
    ApEstimate best;
    best.value = 0.0;
    for (const Ball& b : balls.balls) {
        const bool contains_origin =
            sing && std::hypot(b.center[0], b.center[1]) <= b.radius;
        double aw, as;
        if (contains_origin && a <= -n) {
            aw = std::numeric_limits<double>::infinity();
        } else {
            aw = detail::ball_average(w_checked, b, n, a, sing);
        }
        if (contains_origin && a * dual_exp <= -n) {
            as = std::numeric_limits<double>::infinity();
        } else {
            as = detail::ball_average([&](const Vec& x) { return std::pow(w_checked(x), dual_exp); },
                                      b, n, a * dual_exp, sing);
        }
        const double v = aw * std::pow(as, p - 1.0);
        if (v > best.value || !std::isfinite(v)) {
            best.value = v;
            best.argmax = b;
            if (!std::isfinite(v)) {
                best.finite = false;
                return best;
            }
        }
    }
    return best;
}

}  // namespace lpkit
