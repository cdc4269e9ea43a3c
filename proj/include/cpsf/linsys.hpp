#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <stdexcept>

#include "cpsf/params.hpp"

namespace cpsf {

using Matrix6 = Eigen::Matrix<cx, 6, 6>;
using Matrix2 = Eigen::Matrix<cx, 2, 2>;

// Basis order is fixed as (da, da+, db, db+, dd, dd+).
inline Matrix6 build_drift(const SystemParams& p) {
    p.validate();
    const cx I(0.0, 1.0);
    const cx lm = p.lambda_m_c();
    const cx ld = p.lambda_d_c();
    Matrix6 m = Matrix6::Zero();
    m(0, 0) = -p.kappa / 2.0;
    m(0, 2) = I * p.g;
    m(0, 4) = I * p.G;
    m(1, 1) = -p.kappa / 2.0;
    m(1, 3) = -I * p.g;
    m(1, 5) = -I * p.G;
    m(2, 0) = I * p.g;
    m(2, 2) = -p.gamma_m / 2.0;
    m(2, 3) = lm;
    m(3, 1) = -I * p.g;
    m(3, 2) = std::conj(lm);
    m(3, 3) = -p.gamma_m / 2.0;
    m(4, 0) = I * p.G;
    m(4, 4) = -p.gamma_d / 2.0;
    m(4, 5) = ld;
    m(5, 1) = -I * p.G;
    m(5, 4) = std::conj(ld);
    m(5, 5) = -p.gamma_d / 2.0;
    return m;
}

struct SusceptibilityMatrix {
    double omega;
    Matrix6 entries;
};

// chi(omega) = (-i omega I - chi0)^-1, solved directly per frequency.
// Throws when the 1-norm condition estimate exceeds 1e12 (at or past the
// stability boundary).
inline SusceptibilityMatrix susceptibility_numeric(const SystemParams& p, double omega) {
    const Matrix6 drift = build_drift(p);
    const cx I(0.0, 1.0);
    Matrix6 a = -I * omega * Matrix6::Identity() - drift;
    Eigen::PartialPivLU<Matrix6> lu(a);
    Matrix6 inv = lu.solve(Matrix6::Identity());
    const double cond = a.cwiseAbs().colwise().sum().maxCoeff() *
                        inv.cwiseAbs().colwise().sum().maxCoeff();
    if (!(cond < 1e12))
        throw std::domain_error("susceptibility_numeric: near-singular system (condition estimate >= 1e12)");
    return {omega, inv};
}

struct StabilityVerdict {
    bool stable;
    bool boundary;  // |max Re| < 1e-9
    double max_real_part;
};

inline StabilityVerdict eigen_stability(const SystemParams& p) {
    const Matrix6 drift = build_drift(p);
    Eigen::ComplexEigenSolver<Matrix6> es(drift, /*computeEigenvectors=*/false);
    const double max_re = es.eigenvalues().real().maxCoeff();
    StabilityVerdict v;
    v.max_real_part = max_re;
    v.boundary = std::abs(max_re) < 1e-9;
    v.stable = max_re < 0.0;
    return v;
}

}  // namespace cpsf
