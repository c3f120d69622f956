// Sobolev-norm equivalence ratios for several p and weights, and the
// Hormander-type scan for phi^(alpha).

#include <cstdio>

#include "lpkit/lpkit.hpp"

using namespace lpkit;

int main() {
    const Grid g(1, 4096, 32.0);
    const auto phi = make_ball_average(1);
    const DyadicRange kr(-30, 30);
    const TestFamily fam = TestFamily::make_default(g, 3);
    std::printf("%6s %6s %-10s %10s %10s %10s\n", "alpha", "p", "weight", "min", "max", "spread");
    for (double a : {0.25, 0.5, 0.9})
        for (double p : {1.5, 2.0, 3.0})
            for (const char* wid : {"const", "pow:0.3"}) {
                const Weight w = weight_from_id(wid);
                const auto r = equivalence_experiment(fam, sobolev_ratio(a, phi, kr, p, w), p, w);
                std::printf("%6.2f %6.1f %-10s %10.5f %10.5f %10.5f\n", a, p, wid, r.min, r.max, r.spread);
            }
    const auto br = sobolev_spectral_bracket(g, 0.5, phi, kr);
    std::printf("\np=2 spectral bracket at alpha=0.5: [%.5f, %.5f]\n\n", br.lower, br.upper);
    for (double a : {0.75, 1.0, 1.25}) {
        const auto s = mar_scan(a);
        std::printf("scan alpha=%.2f: max R = %.6f at (x, y) = (%.4g, %.4g), refinement delta %.1e\n", a,
                    s.max_ratio, s.argmax.x, s.argmax.y, s.refinement_delta);
    }
}
