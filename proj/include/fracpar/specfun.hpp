#pragma once

#include "fracpar/common.hpp"

namespace fracpar::specfun {

// Gamma function on the real line, poles at nonpositive integers rejected.
double gamma_fn(double x);

// exp(z) - 1 without cancellation for small |z|.
Complex expm1c(Complex z);

// (i*rho + lambda)^s on the principal branch, arg in (-pi/2, pi/2].
Complex complex_power(const SpectralPoint& p, const FracOrder& s);

struct OracleResult {
    Complex value;
    double error_estimate = 0.0;
};

// Evaluates (i*rho+lambda)^s through the subordination integral
//   1/Gamma(-s) * int_0^inf (e^{-tau(i rho+lambda)} - 1) dtau/tau^{1+s},
// split at q.split_point/|i rho+lambda|. Independent cross-check route for
// complex_power.
OracleResult gamma_power_oracle(const SpectralPoint& p, const FracOrder& s,
                                const QuadratureSpec& q = {});

struct BesselResult {
    Complex value;
    bool underflow = false;
};

// Modified Bessel K_nu(z), nu in (0,1), |arg z| < pi/4.
BesselResult bessel_k(double nu, Complex z);

enum class IsRepresentation { bessel, laplace_in_t, laplace_in_r, multiplier };

// The extension kernel I_s(y,lambda), Re(lambda) > 0, in any of its four
// equivalent representations. All representations agree to quadrature
// tolerance; they differ in prefactor algebra and integration path, which is
// what the cross-checks exercise.
Complex i_s(double y, Complex lam, const FracOrder& s,
            IsRepresentation rep = IsRepresentation::bessel);

// d/dy I_s(y,lam) through the order-reflection identity
//   -y^{1-2s} dI_s/dy = Gamma(1-s)/(4^{s-1/2} Gamma(s)) * lam^s * I_{1-s}(y,lam).
Complex i_s_y_derivative(double y, Complex lam, const FracOrder& s);

// Gamma(1-s)/(4^{s-1/2} Gamma(s)), the Neumann trace constant.
double neumann_trace_constant(const FracOrder& s);

// Gamma(-s)/(4^s Gamma(s)), the quotient trace constant (negative).
double quotient_trace_constant(const FracOrder& s);

// Self-test of the normalization y^{2s}/(4^s Gamma(s)) int e^{-y^2/(4 tau)}
// dtau/tau^{1+s} = 1, returned as |value - 1|.
double normalization_residual(double y, const FracOrder& s);

}  // namespace fracpar::specfun
