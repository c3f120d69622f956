// Continuous and dyadic symbols of a few kernels, side by side.
// The continuous Haar column should sit at 4 ln 2 = 2.7726 everywhere; the
// dyadic one at exactly 4.

#include <cstdio>

#include "lpkit/lpkit.hpp"

using namespace lpkit;

int main() {
    const LogTimeGrid tg(1e-6, 1e6, 16);
    const DyadicRange kr(-40, 40);
    for (const char* id : {"haar", "gm:0.75", "poisson-q:1", "riesz-diff:0.5:ball"}) {
        const Kernel psi = kernel_from_id(id);
        const Symbol mc = symbol_continuous(psi, tg), md = symbol_discrete(psi, kr);
        std::printf("%s\n%10s %14s %14s\n", id, "xi", "continuous", "dyadic");
        for (double xi : {0.01, 0.1, 0.37, 1.0, 2.5, 10.0})
            std::printf("%10.3g %14.8f %14.8f\n", xi, mc(xi).real(), md(xi).real());
        std::printf("  homogeneity defect of the dyadic symbol on N=4096: %.2e\n\n",
                    homogeneity_defect(md, Grid(1, 4096, 32.0)));
    }
}
