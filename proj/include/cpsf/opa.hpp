#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "cpsf/params.hpp"

namespace cpsf {

using Matrix2 = Eigen::Matrix<cx, 2, 2>;

// Detuned-OPA reference model. xi_k = 2 lambda / kappa, Delta_k = delta_p / kappa.
struct OpaParams {
    double kappa = 1.0;
    double lambda = 0.0;   // pump amplitude, real by convention
    double delta_p = 0.0;  // pump detuning

    bool stable() const {
        return lambda * lambda < kappa * kappa / 4.0 + delta_p * delta_p;
    }

    void validate() const {
        if (!(kappa > 0.0))
            throw std::invalid_argument("OpaParams: kappa must be positive");
    }
};

inline Matrix2 opa_susceptibility(const OpaParams& o, double omega, cx lambda_c) {
    o.validate();
    const cx I(0.0, 1.0);
    const double wp = omega + o.delta_p;
    const double wm = omega - o.delta_p;
    const cx det = (o.kappa / 2.0 - I * wp) * (o.kappa / 2.0 - I * wm) -
                   std::norm(lambda_c);
    if (std::abs(det) < 1e-300)
        throw std::domain_error("opa_susceptibility: pole on the real axis");
    Matrix2 m;
    m(0, 0) = o.kappa / 2.0 - I * wm;
    m(0, 1) = lambda_c;
    m(1, 0) = std::conj(lambda_c);
    m(1, 1) = o.kappa / 2.0 - I * wp;
    return m / det;
}

inline Matrix2 opa_susceptibility(const OpaParams& o, double omega) {
    return opa_susceptibility(o, omega, cx(o.lambda, 0.0));
}

struct OpaCpsfSample {
    double a;  // A^OPA(omega)
    double f;  // F(omega) = omega^2 - 2 delta_p omega + S; negative inside the window
};

// Closed-form OPA spectral function. S = kappa^2/4 + delta_p^2 - lambda^2.
inline OpaCpsfSample opa_cpsf(const OpaParams& o, double omega) {
    o.validate();
    const double s = o.kappa * o.kappa / 4.0 + o.delta_p * o.delta_p - o.lambda * o.lambda;
    const double f = omega * omega - 2.0 * o.delta_p * omega + s;
    const double core = o.kappa * o.kappa / 4.0 - o.lambda * o.lambda -
                        (omega * omega - o.delta_p * o.delta_p);
    const double denom = core * core + omega * omega * o.kappa * o.kappa;
    if (denom < 1e-300) {
        // only the critical nondetuned point (lambda = kappa/2, delta_p = 0,
        // omega = 0) is removable: a -> kappa/(omega^2 + kappa^2) there
        if (o.delta_p == 0.0 && std::abs(f) < 1e-300)
            return {1.0 / o.kappa, f};
        throw std::domain_error("opa_cpsf: pole on the real axis");
    }
    return {o.kappa * f / denom, f};
}

// Negativity window [delta_p - dw, delta_p + dw]; empty unless
// kappa^2/4 < lambda^2 < kappa^2/4 + delta_p^2.
struct OpaWindow {
    bool exists;
    double lo;
    double hi;
};

inline OpaWindow opa_negativity_window(const OpaParams& o) {
    const double disc = o.lambda * o.lambda - o.kappa * o.kappa / 4.0;
    if (disc <= 0.0 || !o.stable()) return {false, 0.0, 0.0};
    const double dw = std::sqrt(disc);
    return {true, o.delta_p - dw, o.delta_p + dw};
}

// Frequency-independent, purely off-diagonal: Sigma = i (0, lambda; lambda*, 0).
inline Matrix2 opa_self_energy(const OpaParams& o) {
    o.validate();
    const cx I(0.0, 1.0);
    Matrix2 m = Matrix2::Zero();
    m(0, 1) = I * o.lambda;
    m(1, 0) = I * o.lambda;
    return m;
}

}  // namespace cpsf
