#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "cpsf/cpsf.hpp"
#include "cpsf/stability.hpp"

namespace cpsf::testing {

// Fig. 3 operating point (M = -3).
inline DimensionlessParams fig3_m3() {
    DimensionlessParams d;
    d.c0 = 2.0;
    d.c1 = 0.25;
    d.xi_m = 1.390;
    d.xi_d = 0.931;
    d.kappa_over_gamma_m = 1e4;
    d.gamma_ratio = 1.0;
    return d;
}

// Random parameter sets strictly inside the stable region, away from the
// xi = 1 poles, verified by the eigenvalue route.
inline std::vector<DimensionlessParams> random_stable_sets(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uc0(0.1, 5.0);
    std::uniform_real_distribution<double> uc1(0.0, 2.0);
    std::uniform_real_distribution<double> uxm(0.0, 3.0);
    std::uniform_real_distribution<double> uxd(0.0, 1.5);
    std::uniform_real_distribution<double> ukg(2.0, 4.0);  // log10 kappa/gamma_m
    std::uniform_real_distribution<double> ur(0.2, 5.0);

    std::vector<DimensionlessParams> out;
    while (int(out.size()) < n) {
        DimensionlessParams d;
        d.c0 = uc0(rng);
        d.c1 = uc1(rng);
        d.xi_m = uxm(rng);
        d.xi_d = uxd(rng);
        d.kappa_over_gamma_m = std::pow(10.0, ukg(rng));
        d.gamma_ratio = ur(rng);
        if (std::abs(d.xi_m - 1.0) < 1e-3 || std::abs(d.xi_d - 1.0) < 1e-3) continue;
        try {
            const StabilityReport r = stability_report(d);
            if (r.margin < 0.05 || !r.stable_closed_form || !r.stable_eigen) continue;
        } catch (const std::domain_error&) {
            continue;
        }
        out.push_back(d);
    }
    return out;
}

}  // namespace cpsf::testing
