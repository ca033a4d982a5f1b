#pragma once

#include "fracpar/field.hpp"

namespace fracpar {

// H^s u by the spectral multiplier (i rho_m + lambda_k)^s. Throws if the
// field carries mass on the (rho,lambda) = (0,0) mode, where the fractional
// power is undefined; drop the constant mode (Neumann convention) first.
SpectralField apply_fractional(const SpectralField& u, const FracOrder& s);
SpaceTimeField apply_fractional(const SpaceTimeField& u, const FracOrder& s);

// e^{-tau H} u: multiplier e^{-tau(i rho + lambda)}, i.e. the spatial heat
// semigroup composed with the backward time shift u(t - tau, .).
SpectralField apply_semigroup(const SpectralField& u, double tau);
SpaceTimeField apply_semigroup(const SpaceTimeField& u, double tau);

// Squared parabolic norm drho * sum |i rho + lambda|^s |coef|^2 (note: the
// symbol modulus enters at power s, so pass 2*s for the H^s energy).
double hs_norm_sq(const SpectralField& u, double s);

struct RouteResult {
    SpectralField value;
    double error_estimate = 0.0;
};

// H^s u through the subordination formula
//   H^s u = 1/Gamma(-s) int_0^inf (e^{-tau H} u - u) dtau / tau^{1+s},
// evaluated with adaptive matrix-valued quadrature. Independent of the
// multiplier route. Requires every excited mode to have lambda_k > 0 (the
// integrand is otherwise undamped and the tail quadrature ill-posed).
RouteResult fractional_via_semigroup(const SpectralField& u, const FracOrder& s,
                                     const QuadratureSpec& q = {});

struct MasterFormResult {
    Complex value;         // <H^s u, v>
    Complex term_head;     // singular head: all three terms over (0, tau_0]
    Complex term_kernel;   // double-difference kernel term over (tau_0, inf)
    Complex term_mass;     // (1 - e^{-tau L}1) u v term over (tau_0, inf)
    Complex term_history;  // -e^{-tau L}1 (u(t-tau) - u(t)) v term, (tau_0, inf)
    double error_estimate = 0.0;
};

// The bilinear form <H^s u, v> through the three-term master decomposition
//   int_0^inf [ sum_{x,z} K_s(tau,x,z)(u(t-tau,x)-u(t-tau,z))(v(t,x)-v(t,z))
//             + sum_x (1 - e^{-tau L}1)/( |Gamma(-s)| tau^{1+s}) u v
//             - sum_x e^{-tau L}1 (u(t-tau,x)-u(t,x))/(|Gamma(-s)| tau^{1+s}) v ]
// with K_s = W_tau(x,z) / (2 |Gamma(-s)| tau^{1+s}), all time integrals taken
// over the periodic window. Requires a Dirichlet-type operator: e^{-tau L}1
// must decay, or the history term has an undamped oscillatory tail.
//
// On a spectrally truncated system e^{-tau L}1 tends to the *projection* of 1
// as tau -> 0, so the kernel and mass terms individually diverge like
// tau^{-1-s} near the origin; only their sum stays integrable. The singular
// head (0, tau_0] is therefore evaluated in the algebraically equivalent
// cancellation-free form <u - e^{-tau H}u, v> / (|Gamma(-s)| tau^{1+s}),
// while the tail reports the three terms separately.
MasterFormResult master_form(const SpaceTimeField& u, const SpaceTimeField& v,
                             const FracOrder& s, const QuadratureSpec& q = {});

struct MasterApplyResult {
    SpaceTimeField value;
    double error_estimate = 0.0;
};

// H^s u pointwise through the master (subordination) route. The singular head
// over (0, tau_0] is evaluated spectrally in the cancellation-free expm1
// form; the tail is integrated entirely in physical space: the spatial
// semigroup acts by the heat-kernel matrix W_tau against the quadrature
// weights, and the backward time shift u(t - tau, .) by the exact periodic
// Fourier phase on the sample rows, never through the eigenfunction transform
// of the shifted field. The input is first projected onto the resolved joint
// span, where the discrete H^s is defined. Requires lambda > 0 on excited
// modes, like the other quadrature routes.
MasterApplyResult fractional_via_master(const SpaceTimeField& u, const FracOrder& s,
                                        const QuadratureSpec& q = {});

// The purely-in-time Marchaud fractional derivative
//   D_t^s u = 1/|Gamma(-s)| int_0^inf (u(t,x) - u(t-tau,x)) dtau / tau^{1+s}
// with periodic time shifts, evaluated by singular quadrature plus a rotated
// contour for the oscillatory tail. Equals the multiplier (i rho)^s in time.
SpectralField marchaud_derivative(const SpectralField& u, const FracOrder& s,
                                  const QuadratureSpec& q = {});

}  // namespace fracpar
