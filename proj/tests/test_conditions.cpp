#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "helpers.hpp"

using namespace lpkit;
using boost::math::quadrature::gauss_kronrod;

TEST(BEps, PoissonAgainstHighPrecision) {
    // 2 int_1^inf (x^2-1) x^eps / (pi (x^2+1)^2) dx, 30-digit quadrature.
    // The code adds a rigorous tail bound past 2^48, so it may sit above by at most that.
    const Kernel Q1 = make_poisson_deriv(1);
    const std::pair<double, double> refs[] = {{0.25, 0.492678908148203687}, {0.5, 0.870242032032966807}, {0.9, 5.85811800027105550}};
    for (auto [eps, ref] : refs) {
        const auto r = b_eps(Q1, eps);
        ASSERT_TRUE(r.finite);
        EXPECT_GE(r.value, ref * (1 - 1e-12)) << eps;
        const double tail = 2.0 / M_PI * std::pow(2.0, 48 * (eps - 1)) / (1 - eps);
        EXPECT_LE(r.value, ref + tail + 1e-12) << eps;
        if (eps < 0.6) {
            EXPECT_NEAR(r.value, ref, 1e-9 * ref);
        }
    }
    // 2-D: 2 pi int_1^inf Gamma(3/2) pi^-3/2 |r^2-2| r^1.5 / (r^2+1)^(5/2) dr
    EXPECT_NEAR(b_eps(make_poisson_deriv(2), 0.5).value, 1.23712213967320906, 1e-10);
}

TEST(BEps, DivergenceAndCompactSupport) {
    const auto d = b_eps(make_poisson_deriv(1), 1.5);
    EXPECT_FALSE(d.finite);
    EXPECT_TRUE(std::isinf(d.value));
    EXPECT_FALSE(d.note.empty());
    EXPECT_FALSE(b_eps(make_poisson_deriv(1), 1.0).finite);  // borderline r^-1
    EXPECT_EQ(b_eps(make_haar(), 0.5).value, 0.0);
    EXPECT_EQ(b_eps(make_gen_marcinkiewicz(0.75), 2.0).value, 0.0);
    // Haar dilated by 2: int_{1<|x|<2} (1/2) |x|^eps dx = (2^(eps+1) - 1)/(eps + 1).
    const double e = 0.5;
    EXPECT_NEAR(b_eps(make_haar().dilated(2.0), e).value, (std::pow(2.0, e + 1) - 1) / (e + 1), 1e-12);
    EXPECT_THROW(b_eps(make_haar(), 0.0), condition_error);
    EXPECT_THROW(b_eps(make_poisson_deriv(1).dilated(1.0).dilated(1.0), -1.0), condition_error);
}

TEST(Cu, ClosedForms) {
    EXPECT_NEAR(c_u(make_haar(), 2.0).value, 2.0, 1e-12);
    EXPECT_NEAR(c_u(make_haar(), 3.7).value, 2.0, 1e-12);
    // int_{-1}^{1} a^u (1-|x|)^(u(a-1)) dx = 2 a^u / (u(a-1) + 1)
    for (double u : {2.0, 3.0, 3.9}) {
        const double a = 0.75;
        const double exact = 2 * std::pow(a, u) / (u * (a - 1) + 1);
        const auto r = c_u(make_gen_marcinkiewicz(a), u);
        ASSERT_TRUE(r.finite);
        EXPECT_NEAR(r.value, exact, 1e-7 * exact) << u;
    }
    EXPECT_NEAR(c_u(make_gen_marcinkiewicz(0.75), 2.0).value, 2.25, 1e-9);
    EXPECT_NEAR(c_u(make_gen_marcinkiewicz(1.5), 2.0).value, 2 * 2.25 / 2.0, 1e-10);
    const Kernel Q = make_poisson_deriv(1);
    const double ref = 2.0 * gauss_kronrod<double, 61>::integrate([&](double x) { return std::pow(std::abs(Q(Vec{x, 0})), 2.5); }, 0.0, 1.0, 10, 1e-14);
    EXPECT_NEAR(c_u(Q, 2.5).value, ref, 1e-9 * ref);
}

TEST(Cu, DivergenceAndGuards) {
    const auto r = c_u(make_gen_marcinkiewicz(0.75), 4.0);
    EXPECT_FALSE(r.finite);
    EXPECT_NE(r.note.find("not integrable"), std::string::npos);
    EXPECT_THROW(c_u(make_haar(), 1.0), condition_error);
    EXPECT_THROW(c_u(make_fourier_band(1, 1, 2), 2.0), condition_error);
}

TEST(HMajorant, HaarAndPoisson) {
    EXPECT_NEAR(h_majorant_l1(make_haar()).value, 2.0, 1e-4);
    // |Q| = |x^2-1|/(pi (x^2+1)^2): peak 1/pi at 0, zero at 1, second peak 1/(8 pi) at sqrt 3.
    // H = |Q| on [0, r*], 1/(8 pi) on [r*, sqrt 3], Q beyond; antiderivative of (x^2-1)/(x^2+1)^2 is -x/(x^2+1).
    const double r = [] {
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (lo + hi);
            ((1 - m * m) / std::pow(1 + m * m, 2) > 0.125 ? lo : hi) = m;
        }
        return lo;
    }();
    const double s3 = std::sqrt(3.0);
    const double exact = 2.0 / M_PI * (r / (r * r + 1) + (s3 - r) / 8.0 + s3 / 4.0);
    const auto h = h_majorant_l1(make_poisson_deriv(1));
    ASSERT_TRUE(h.finite);
    EXPECT_NEAR(h.value, exact, 1e-3);
    EXPECT_LE(h.value, exact * (1 + 1e-9));  // right-endpoint sums of a nonincreasing majorant
}

TEST(HMajorant, UnboundedKernelDiverges) {
    EXPECT_FALSE(h_majorant_l1(make_gen_marcinkiewicz(0.75)).finite);
    EXPECT_TRUE(h_majorant_l1(make_gen_marcinkiewicz(1.5)).finite);
    // phi^(1.5) has |psi| = 1.5 (1-|x|)^0.5, maximal at 0: H = 1.5 sqrt(1-|x|) integrates to 2.
    EXPECT_NEAR(h_majorant_l1(make_gen_marcinkiewicz(1.5)).value, 2.0, 1e-3);
}

TEST(FourierDecay, HaarAndFlat) {
    const auto d = fourier_decay_check(make_haar(), 1.0);
    EXPECT_TRUE(d.pass);
    EXPECT_NEAR(d.c_est, 2.0 / M_PI, 1e-12);
    EXPECT_FALSE(fourier_decay_check(make_flat_spectrum(1), 0.5).pass);
    EXPECT_TRUE(fourier_decay_check(make_gen_marcinkiewicz(0.75), 0.75).pass);
    EXPECT_TRUE(fourier_decay_check(make_poisson_deriv(2), 1.0).pass);
    EXPECT_THROW(fourier_decay_check(make_haar(), 1.0, 1.0), condition_error);
}

TEST(Nondegeneracy, Modes) {
    EXPECT_TRUE(nondegeneracy(make_haar(), NondegMode::continuous).pass);
    EXPECT_TRUE(nondegeneracy(make_haar(), NondegMode::dyadic).pass);
    const Kernel band = make_fourier_band(1, 1.0, 1.5);
    EXPECT_TRUE(nondegeneracy(band, NondegMode::continuous).pass);
    const auto r = nondegeneracy(band, NondegMode::dyadic);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.min_value, 0.0);
    EXPECT_GE(std::abs(r.argmin[0]), 1.5);
    EXPECT_TRUE(nondegeneracy(make_riesz_diff(1.0, make_ball_average(2)), NondegMode::dyadic).pass);
}

TEST(Hormander, HaarClosedForm) {
    // L(x, y) = |1/c^2 - 1| / (2 x^2), c = 1 - y/x.
    const Kernel H = make_haar();
    for (auto [x, y] : {std::pair{1.0, 0.1}, {3.0, -1.0}, {-2.0, 0.5}, {0.01, 0.004}}) {
        const double c = 1 - y / x;
        EXPECT_NEAR(hormander_L(H, x, y), std::abs(1 / (c * c) - 1) / (2 * x * x), 1e-10 / (x * x)) << x << " " << y;
    }
    EXPECT_NEAR(hormander_L(H, 1.0, 0.1), 0.11728395061728, 1e-12);
    EXPECT_EQ(hormander_L(H, 1.0, 0.0), 0.0);
}

TEST(Hormander, GenMarcinkiewiczAgainstHighPrecision) {
    // int_0^inf |psi_t(x-y) - psi_t(x)|^2 dt/t at 40 digits, with u = p - w^2
    // at each singular edge p.
    struct Case {
        double a, x, y, ref;
    };
    const Case cases[] = {
        {0.75, 1.0, 0.2, 0.82517601786865096},   {0.75, 2.0, -0.3, 0.1114544487478398},
        {0.75, -1.5, 0.25, 0.20570954292692408}, {1.25, 1.0, 0.2, 0.14240057901683672},
        {1.25, 2.0, -0.3, 0.01290619370580822},  {1.25, -1.5, 0.25, 0.025947235473566842},
    };
    for (const auto& c : cases)
        EXPECT_NEAR(hormander_L(make_gen_marcinkiewicz(c.a), c.x, c.y), c.ref, 1e-8 * c.ref) << c.a << " " << c.x << " " << c.y;
}

TEST(Hormander, RatioDependsOnlyOnRho) {
    const Kernel psi = make_gen_marcinkiewicz(0.75);
    const double a = 0.75;
    auto R = [&](double x, double y) {
        return hormander_L(psi, x, y) * std::pow(std::abs(x), 1 + 2 * a) / std::pow(std::abs(y), 2 * a - 1);
    };
    const double base = R(1.0, 0.125);
    for (double lam : {0.01, 0.3, 7.0, 256.0}) EXPECT_NEAR(R(lam, 0.125 * lam), base, 1e-8 * base) << lam;
}

TEST(Hormander, Guards) {
    const Kernel H = make_haar();
    EXPECT_THROW(hormander_L(H, 1.0, 0.6), condition_error);
    EXPECT_THROW(hormander_L(make_poisson_deriv(2), 1.0, 0.1), condition_error);
    EXPECT_THROW(hormander_L(H, 1.0, 0.1, 0), condition_error);
    EXPECT_THROW(hormander_L(make_fourier_band(1, 1, 2), 1.0, 0.1), condition_error);
}

TEST(MarScan, PassesAndReports) {
    ScanOptions opt;
    opt.j_min = -2;
    opt.j_max = 2;
    opt.m_max = 8;
    for (double a : {0.75, 1.0, 1.25}) {
        const auto r = mar_scan(a, opt);
        EXPECT_TRUE(r.pass) << a;
        EXPECT_TRUE(std::isfinite(r.max_ratio));
        EXPECT_GT(r.max_ratio, 0.0);
        EXPECT_LT(r.refinement_delta, 0.05);
        EXPECT_LT(std::abs(r.argmax.y), 0.5 * std::abs(r.argmax.x));
        EXPECT_EQ(r.points, static_cast<std::size_t>(5 * 7 * 4));
    }
    // alpha = 1 is Haar: R = |x|^3 |1/c^2 - 1| / (2 x^2 |y|), largest at the biggest admissible rho.
    const auto h = mar_scan(1.0, opt);
    const double rho = 0.25, c = 1 - rho;
    EXPECT_NEAR(h.max_ratio, (1 / (c * c) - 1) / (2 * rho), 1e-9);
    EXPECT_THROW(mar_scan(0.5), condition_error);
    EXPECT_THROW(mar_scan(1.5), condition_error);
}
