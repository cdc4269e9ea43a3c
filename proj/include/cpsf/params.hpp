#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace cpsf {

using cx = std::complex<double>;

// Dimensional rates and couplings of the linearized model. All rates share
// one unit system; the library convention is kappa = 1 (kappa-units).
// Modulation amplitudes are stored as magnitude + phase; closed forms that
// require real paramps check phi == 0.
struct SystemParams {
    double kappa = 1.0;
    double gamma_m = 1.0;
    double gamma_d = 1.0;
    double g = 0.0;
    double G = 0.0;
    double lambda_m = 0.0;
    double lambda_d = 0.0;
    double phi_m = 0.0;
    double phi_d = 0.0;

    cx lambda_m_c() const { return std::polar(lambda_m, phi_m); }
    cx lambda_d_c() const { return std::polar(lambda_d, phi_d); }

    bool real_paramps() const { return phi_m == 0.0 && phi_d == 0.0; }

    void validate() const {
        if (!(kappa > 0.0) || !(gamma_m > 0.0) || !(gamma_d > 0.0))
            throw std::invalid_argument("SystemParams: damping rates must be positive");
        if (g < 0.0 || G < 0.0)
            throw std::invalid_argument("SystemParams: couplings must be nonnegative");
        if (lambda_m < 0.0 || lambda_d < 0.0)
            throw std::invalid_argument("SystemParams: modulation magnitudes must be nonnegative");
    }
};

// Cooperativities and paramp amplitudes, the coordinates of all closed forms.
struct DimensionlessParams {
    double c0 = 0.0;
    double c1 = 0.0;
    double xi_m = 0.0;
    double xi_d = 0.0;
    double kappa_over_gamma_m = 1.0;
    double gamma_ratio = 1.0;  // gamma_m / gamma_d

    void validate() const {
        if (c0 < 0.0 || c1 < 0.0 || xi_m < 0.0 || xi_d < 0.0)
            throw std::invalid_argument("DimensionlessParams: c0, c1, xi must be nonnegative");
        if (!(kappa_over_gamma_m > 0.0) || !(gamma_ratio > 0.0))
            throw std::invalid_argument("DimensionlessParams: rate ratios must be positive");
    }
};

// Physical drive quantities used to derive the enhanced couplings.
struct PhysicalDrive {
    double g0 = 0.0;
    double G0 = 0.0;
    double E_L = 0.0;
    double Delta_0 = 0.0;
    double omega_m = 1.0;
    double omega_d = 1.0;

    void validate() const {
        if (E_L < 0.0)
            throw std::invalid_argument("PhysicalDrive: drive rate must be nonnegative");
        if (!(omega_m > 0.0) || !(omega_d > 0.0))
            throw std::invalid_argument("PhysicalDrive: mechanical frequencies must be positive");
    }
};

inline DimensionlessParams to_dimensionless(const SystemParams& p) {
    p.validate();
    DimensionlessParams d;
    d.c0 = 4.0 * p.g * p.g / (p.kappa * p.gamma_m);
    d.c1 = 4.0 * p.G * p.G / (p.kappa * p.gamma_d);
    d.xi_m = 2.0 * p.lambda_m / p.gamma_m;
    d.xi_d = 2.0 * p.lambda_d / p.gamma_d;
    d.kappa_over_gamma_m = p.kappa / p.gamma_m;
    d.gamma_ratio = p.gamma_m / p.gamma_d;
    return d;
}

// Inverse of to_dimensionless with kappa = 1 as the unit scale.
inline SystemParams from_dimensionless(const DimensionlessParams& d) {
    d.validate();
    SystemParams p;
    p.kappa = 1.0;
    p.gamma_m = p.kappa / d.kappa_over_gamma_m;
    p.gamma_d = p.gamma_m / d.gamma_ratio;
    p.g = std::sqrt(d.c0 * p.kappa * p.gamma_m / 4.0);
    p.G = std::sqrt(d.c1 * p.kappa * p.gamma_d / 4.0);
    p.lambda_m = d.xi_m * p.gamma_m / 2.0;
    p.lambda_d = d.xi_d * p.gamma_d / 2.0;
    return p;
}

// Steady-state cavity amplitude and the enhanced couplings g = g0*abar, G = G0*abar.
struct EnhancedCoupling {
    double abar;
    double g;
    double G;
};

inline EnhancedCoupling enhanced_coupling(const PhysicalDrive& pd, double kappa) {
    pd.validate();
    if (!(kappa > 0.0))
        throw std::invalid_argument("enhanced_coupling: kappa must be positive");
    const double abar = pd.E_L / std::sqrt(kappa * kappa / 4.0 + pd.Delta_0 * pd.Delta_0);
    return {abar, pd.g0 * abar, pd.G0 * abar};
}

}  // namespace cpsf
