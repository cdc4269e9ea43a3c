#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpsf/linsys.hpp"
#include "cpsf/params.hpp"
#include "cpsf/response.hpp"

namespace cpsf {

struct BathOccupations {
    double n_c = 0.0;
    double n_m = 0.0;
    double n_d = 0.0;

    void validate() const {
        if (n_c < 0.0 || n_m < 0.0 || n_d < 0.0)
            throw std::invalid_argument("BathOccupations: occupations must be nonnegative");
    }
};

// Diffusion matrix D of the input-noise vector: <u_in,i(t) u_in,j(t')> = D_ij d(t-t').
// Only the normal/antinormal pair blocks are nonzero.
inline Eigen::Matrix<double, 6, 6> noise_covariance(const BathOccupations& b,
                                                    const SystemParams& p) {
    b.validate();
    p.validate();
    Eigen::Matrix<double, 6, 6> d = Eigen::Matrix<double, 6, 6>::Zero();
    d(0, 1) = p.kappa * (1.0 + b.n_c);
    d(1, 0) = p.kappa * b.n_c;
    d(2, 3) = p.gamma_m * (1.0 + b.n_m);
    d(3, 2) = p.gamma_m * b.n_m;
    d(4, 5) = p.gamma_d * (1.0 + b.n_d);
    d(5, 4) = p.gamma_d * b.n_d;
    return d;
}

struct NoiseSpectrumSample {
    double omega;
    cx g_keldysh;      // G^k(omega); -i G^k is real and positive
    double ratio;      // -i G^k / A
    double t_eff;      // effective temperature (hbar = k_B = 1); NaN when undefined
    bool t_eff_defined;
};

// Keldysh Green's function assembled in frequency domain from chi D chi^T,
// exact for the linear Markovian model, plus the effective temperature
// T_eff(omega) = omega / (2 coth^-1(-i G^k / A)).
inline NoiseSpectrumSample keldysh_and_teff(const SystemParams& p, const BathOccupations& b,
                                            double omega) {
    if (!eigen_stability(p).stable)
        throw std::domain_error("keldysh_and_teff: system is unstable");
    const Eigen::Matrix<double, 6, 6> d = noise_covariance(b, p);
    const Matrix6 chi_p = susceptibility_numeric(p, omega).entries;
    const Matrix6 chi_m = susceptibility_numeric(p, -omega).entries;

    // FT of <a(t+tau) a+(t)> and of <a+(t) a(t+tau)>
    const cx s_aad = (chi_p * d * chi_m.transpose())(0, 1);
    const cx s_ada = (chi_m * d * chi_p.transpose())(1, 0);

    NoiseSpectrumSample s;
    s.omega = omega;
    const cx minus_i_gk = s_aad + s_ada;
    s.g_keldysh = cx(0.0, 1.0) * minus_i_gk;

    const double a = greens(p, omega).cpsf;
    s.t_eff = std::numeric_limits<double>::quiet_NaN();
    s.t_eff_defined = false;
    if (std::abs(a) < 1e-12) {
        s.ratio = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    s.ratio = minus_i_gk.real() / a;
    if (std::abs(std::abs(s.ratio) - 1.0) < 1e-12) {
        // vacuum limit: coth^-1(1) diverges, T_eff -> 0
        s.t_eff = 0.0;
        s.t_eff_defined = true;
    } else if (std::abs(s.ratio) > 1.0) {
        s.t_eff = omega / (2.0 * std::atanh(1.0 / s.ratio));
        s.t_eff_defined = true;
    }
    return s;
}

struct ScatteringSample {
    double omega;
    Matrix2 s_matrix;    // I - kappa * cavity susceptibility block
    double reflectivity; // R(omega) = 1 - kappa' A(omega)
    bool kappa_probe_warning;  // kappa' > 0.01 kappa
};

inline ScatteringSample scattering_and_reflectivity(const SystemParams& p, double kappa_probe,
                                                    double omega) {
    if (!(kappa_probe > 0.0))
        throw std::invalid_argument("scattering_and_reflectivity: kappa_probe must be positive");
    const ChiElements ep = chi_elements(p, omega);
    const ChiElements em = chi_elements(p, -omega);

    ScatteringSample s;
    s.omega = omega;
    // row 2 of the cavity block by conjugation symmetry of the drift structure
    Matrix2 chi_cav;
    chi_cav(0, 0) = ep.aa;
    chi_cav(0, 1) = ep.aad;
    chi_cav(1, 0) = std::conj(em.aad);
    chi_cav(1, 1) = std::conj(em.aa);
    s.s_matrix = Matrix2::Identity() - p.kappa * chi_cav;
    s.reflectivity = 1.0 - kappa_probe * (2.0 * ep.aa.real());
    s.kappa_probe_warning = kappa_probe > 0.01 * p.kappa;
    return s;
}

// Thermal occupation of a bath mode at frequency omega and temperature t
// (hbar = k_B = 1).
inline double thermal_occupation(double omega, double t) {
    if (!(t > 0.0) || !(omega > 0.0)) return 0.0;
    return 1.0 / std::expm1(omega / t);
}

// Steady-state qubit population inversion from the effective temperature at
// the qubit splitting: <sigma_z> = -tanh(omega / (2 T_eff)).
inline double qubit_inversion(double omega, double t_eff) {
    return -std::tanh(omega / (2.0 * t_eff));
}

}  // namespace cpsf
