#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "cpsf/params.hpp"

namespace cpsf {

// Cavity self-energy, induced parametric coefficient, squeezing mixing
// coefficient M(omega) and the modified self-energy, all in one sample.
struct SelfEnergySample {
    double omega;
    cx sigma_a;       // Sigma_a(omega)
    cx lambda_tilde;  // lambda~_a(omega)
    cx sigma_tilde;   // Sigma~_a(omega)
    cx m_coeff;       // M(omega)
};

namespace detail {

// (gamma/2 - i w)^2 - |lambda|^2, the shared mechanical denominator.
inline cx mech_denom(double gamma, double lambda_abs, double omega) {
    const cx z(gamma / 2.0, -omega);
    return z * z - lambda_abs * lambda_abs;
}

inline void check_pole(const SystemParams& p, double omega) {
    const double tm = 1e-12 * p.gamma_m * p.gamma_m;
    const double td = 1e-12 * p.gamma_d * p.gamma_d;
    if (std::abs(mech_denom(p.gamma_m, p.lambda_m, omega)) < tm ||
        std::abs(mech_denom(p.gamma_d, p.lambda_d, omega)) < td)
        throw std::domain_error("self_energy: mechanical denominator at a pole");
}

// Sigma_a and lambda~_a alone; used at both +omega and -omega.
inline void bare_self_energy(const SystemParams& p, double omega, cx& sigma, cx& ltilde) {
    const cx I(0.0, 1.0);
    const cx dm = mech_denom(p.gamma_m, p.lambda_m, omega);
    const cx dd = mech_denom(p.gamma_d, p.lambda_d, omega);
    const cx zm(p.gamma_m / 2.0, -omega);
    const cx zd(p.gamma_d / 2.0, -omega);
    const cx i_sigma = p.g * p.g * zm / dm + p.G * p.G * zd / dd;
    sigma = -I * i_sigma;
    ltilde = p.g * p.g * p.lambda_m_c() / dm + p.G * p.G * p.lambda_d_c() / dd;
}

}  // namespace detail

inline SelfEnergySample self_energy(const SystemParams& p, double omega) {
    p.validate();
    detail::check_pole(p, omega);
    detail::check_pole(p, -omega);

    SelfEnergySample s;
    s.omega = omega;
    cx sigma_m, ltilde_m;  // evaluated at -omega
    detail::bare_self_energy(p, omega, s.sigma_a, s.lambda_tilde);
    detail::bare_self_energy(p, -omega, sigma_m, ltilde_m);

    const cx I(0.0, 1.0);
    const cx shifted = omega + std::conj(sigma_m);  // omega + Sigma_a*(-omega)
    s.m_coeff = s.lambda_tilde / (p.kappa / 2.0 - I * shifted);
    s.sigma_tilde = s.sigma_a -
                    s.lambda_tilde * std::conj(ltilde_m) / (I * p.kappa / 2.0 + shifted);
    return s;
}

// The six row-1 susceptibility matrix elements in closed form.
struct ChiElements {
    double omega;
    cx aa, aad, ab, abd, ad, add;
};

inline ChiElements chi_elements(const SystemParams& p, double omega) {
    const SelfEnergySample s = self_energy(p, omega);
    const cx I(0.0, 1.0);
    const cx denom = I * p.kappa / 2.0 + (omega - s.sigma_tilde);
    if (std::abs(denom) < 1e-300)
        throw std::domain_error("chi_elements: cavity denominator vanishes");

    ChiElements e;
    e.omega = omega;
    e.aa = I / denom;
    e.aad = e.aa * s.m_coeff;

    const cx dm = detail::mech_denom(p.gamma_m, p.lambda_m, omega);
    const cx dd = detail::mech_denom(p.gamma_d, p.lambda_d, omega);
    const cx zm(p.gamma_m / 2.0, -omega);
    const cx zd(p.gamma_d / 2.0, -omega);
    const cx lm = p.lambda_m_c();
    const cx ld = p.lambda_d_c();

    e.ab = e.aa * I * p.g * (zm - std::conj(lm) * s.m_coeff) / dm;
    e.abd = e.aa * I * p.g * (lm - zm * s.m_coeff) / dm;
    e.ad = e.aa * I * p.G * (zd - std::conj(ld) * s.m_coeff) / dd;
    e.add = e.aa * I * p.G * (ld - zd * s.m_coeff) / dd;
    return e;
}

// Retarded Green's functions, spectral function and effective damping.
struct GreensSample {
    double omega;
    cx g_ret_aad;      // G^R_{aa+}(omega) = -i chi_aa
    cx g_ret_aa;       // G^R_{aa}(omega)  = -i chi_aa+
    double cpsf;       // A(omega) = -2 Im G^R_{aa+}
    double kappa_eff;  // kappa - 2 Im Sigma~_a
};

inline GreensSample greens(const SystemParams& p, double omega) {
    const SelfEnergySample s = self_energy(p, omega);
    const ChiElements e = chi_elements(p, omega);
    const cx I(0.0, 1.0);
    GreensSample g;
    g.omega = omega;
    g.g_ret_aad = -I * e.aa;
    g.g_ret_aa = -I * e.aad;
    g.cpsf = -2.0 * g.g_ret_aad.imag();
    g.kappa_eff = p.kappa - 2.0 * s.sigma_tilde.imag();
    return g;
}

// On-resonance algebra: cooperativity combinations and the two routes to
// the on-resonance CPSF. All values are kappa-normalized (kappa = 1).
//
// lambda~_a(0) is taken from the direct omega = 0 evaluation of the
// frequency-dependent coefficient, giving C'_a = C0 xi_m/(1-xi_m^2) +
// C1 xi_d/(1-xi_d^2); the factor-2 variant fails the numeric cross-checks.
struct OnResonanceAlgebra {
    double c_a;         // C_a
    double c_a_prime;   // C'_a
    double c_a_dprime;  // C''_a
    double a_n;         // numerator
    double a_d;         // denominator
    double a0;          // A(0), kappa-units
    double m_negativity;  // M = kappa A(0)
};

inline OnResonanceAlgebra cpsf_on_resonance(const DimensionlessParams& d) {
    d.validate();
    const double kappa = 1.0;
    if (std::abs(d.xi_m - 1.0) < 1e-9 || std::abs(d.xi_d - 1.0) < 1e-9)
        throw std::domain_error("cpsf_on_resonance: xi too close to the removable xi = 1 pole");

    const double um = d.xi_m * d.xi_m - 1.0;
    const double ud = d.xi_d * d.xi_d - 1.0;

    OnResonanceAlgebra r;
    r.a_n = um * ud - d.c0 * ud - d.c1 * um;
    r.a_d = um * ud - 2.0 * d.c0 * d.c1 * (d.xi_m * d.xi_d - 1.0) -
            d.c0 * (d.c0 + 2.0) * ud - d.c1 * (d.c1 + 2.0) * um;
    if (std::abs(r.a_d) < 1e-12)
        throw std::domain_error("cpsf_on_resonance: denominator A_D vanishes");

    r.c_a = -d.c0 / um - d.c1 / ud;
    r.c_a_prime = -d.c0 * d.xi_m / um - d.c1 * d.xi_d / ud;
    r.c_a_dprime = r.c_a - r.c_a_prime * r.c_a_prime / (1.0 + r.c_a);
    r.a0 = (4.0 / kappa) * r.a_n / r.a_d;
    r.m_negativity = kappa * r.a0;
    return r;
}

}  // namespace cpsf
