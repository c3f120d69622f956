// g_psi and Delta_psi applied to a Gaussian derivative, plus the Marcinkiewicz
// integral computed two ways.

#include <cstdio>

#include "lpkit/lpkit.hpp"

using namespace lpkit;

int main() {
    const Grid g(1, 4096, 32.0);
    const auto f = SampledField::from_function(g, [](const Vec& x) { return cplx(-x[0] * std::exp(-0.5 * x[0] * x[0])); });
    const LogTimeGrid tg = LogTimeGrid::for_grid(g);
    const double nf = l2_norm(f);
    std::printf("%-22s %12s %12s\n", "kernel", "|g f|/|f|", "|D f|/|f|");
    for (const char* id : {"haar", "gm:0.75", "gm:1.25", "poisson-q:1", "riesz-diff:0.5:ball"}) {
        const Kernel psi = kernel_from_id(id);
        std::printf("%-22s %12.6f %12.6f\n", id, l2_norm(g_psi(f, psi, tg)) / nf,
                    l2_norm(delta_psi(f, psi, DyadicRange(-30, 30))) / nf);
    }
    const auto direct = marcinkiewicz_direct(f, 1.0, tg), classical = marcinkiewicz_classical(f, tg);
    SampledField d = direct;
    for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= classical.values[i];
    std::printf("\nmu_1: direct vs second-difference form, relative L2 gap %.2e\n", l2_norm(d) / l2_norm(direct));
    save_field("mu1.csv", direct);
    std::printf("wrote mu1.csv\n");
}
