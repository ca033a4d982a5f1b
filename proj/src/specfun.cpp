#include "fracpar/specfun.hpp"

#include <cmath>

#include "fracpar/quadrature.hpp"

namespace fracpar::specfun {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kBesselAsymptoticCutoff = 30.0;  // |z| above which the series is used
constexpr double kExpUnderflow = 705.0;           // e^{-x} underflows past this

}  // namespace

Complex expm1c(Complex z) {
    if (std::abs(z) > 0.5) return std::exp(z) - 1.0;
    Complex term = z, sum = z;
    for (int k = 2; k < 24; ++k) {
        term *= z / static_cast<double>(k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

namespace {
Complex cexpm1(Complex z) { return expm1c(z); }
}  // namespace

double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_fn: pole at x = " + std::to_string(x));
    return std::tgamma(x);
}

Complex complex_power(const SpectralPoint& p, const FracOrder& s) {
    if (p.is_origin())
        throw std::domain_error("complex_power: (rho,lambda) = (0,0) has no fractional power");
    return std::pow(p.symbol(), s.value());
}

OracleResult gamma_power_oracle(const SpectralPoint& p, const FracOrder& s,
                                const QuadratureSpec& q) {
    q.validate();
    if (p.is_origin())
        throw std::domain_error("gamma_power_oracle: (rho,lambda) = (0,0)");
    const Complex w = p.symbol();
    const double s_ = s.value();
    const double absw = std::abs(w);
    const double a = q.split_point / absw;

    GKOptions opt;
    opt.rel_tol = q.relative_tolerance;

    // Inner piece on (0,a]: tau = v^{1/(1-s)} removes the tau^{-s} endpoint.
    const double one_ms = 1.0 - s_;
    auto inner_f = [&](double v) -> Complex {
        if (v <= 0.0) return -w / one_ms;
        const double tau = std::pow(v, 1.0 / one_ms);
        return cexpm1(-tau * w) / tau / one_ms;
    };
    opt.initial_panels = std::max(1, q.nodes_inner / 8);
    auto inner = adaptive_gk<Complex>(inner_f, 0.0, std::pow(a, one_ms), opt);

    // Outer piece: the -1 part integrates exactly to -a^{-s}/s; the e^{-tau w}
    // part is pushed onto the ray arg(tau) = -arg(w), where tau*w is real and
    // the integrand decays monotonically. Arc correction at |tau| = a.
    const double theta = -std::arg(w);
    const Complex i_unit(0.0, 1.0);
    auto arc_f = [&](double phi) -> Complex {
        return i_unit * std::pow(a, -s_) * std::exp(Complex(0.0, -s_ * phi)) *
               std::exp(-a * w * std::exp(Complex(0.0, phi)));
    };
    IntegralResult<Complex> arc;
    arc.value = Complex(0.0);
    if (theta != 0.0) arc = adaptive_gk<Complex>(arc_f, 0.0, theta, opt);

    auto ray_f = [&](double r) -> double {
        return std::exp(-(a + r) * absw) * std::pow(a + r, -1.0 - s_);
    };
    opt.initial_panels = std::max(1, q.nodes_outer / 8);
    auto ray = adaptive_gk<double>(ray_f, 0.0, 45.0 / absw, opt);
    const Complex ray_val =
        std::exp(Complex(0.0, -s_ * theta)) * ray.value;

    const double g = std::tgamma(-s_);
    OracleResult r;
    r.value = (inner.value + arc.value + ray_val - std::pow(a, -s_) / s_) / g;
    r.error_estimate = (inner.error + arc.error + ray.error) / std::abs(g);
    return r;
}

BesselResult bessel_k(double nu, Complex z) {
    if (!(nu > 0.0) || !(nu < 1.0))
        throw std::domain_error("bessel_k: nu must lie in (0,1)");
    const double absz = std::abs(z);
    if (!(absz > 0.0)) throw std::domain_error("bessel_k: z = 0");
    if (std::abs(std::arg(z)) >= kPi / 4.0)
        throw std::domain_error("bessel_k: |arg z| must be < pi/4");
    if (z.real() > kExpUnderflow) return {Complex(0.0), true};

    if (absz > kBesselAsymptoticCutoff) {
        // K_nu(z) ~ sqrt(pi/2z) e^{-z} sum_k a_k(nu)/z^k; terms shrink until
        // k ~ 2|z|, well past the accuracy needed here.
        const double mu = 4.0 * nu * nu;
        Complex term(1.0), sum(1.0);
        double prev = 1.0;
        for (int k = 1; k <= 24; ++k) {
            const double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
            term *= num / (8.0 * static_cast<double>(k)) / z;
            const double mag = std::abs(term);
            if (mag >= prev) break;  // divergent tail reached
            sum += term;
            prev = mag;
            if (mag < 1e-18) break;
        }
        return {std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum, false};
    }

    // K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt, Re z > 0.
    const double rez = z.real();
    const double upper = std::acosh(1.0 + 50.0 / rez) + 1.0;
    auto f = [&](double t) -> Complex {
        return std::exp(-z * std::cosh(t)) * std::cosh(nu * t);
    };
    GKOptions opt;
    opt.rel_tol = 1e-13;
    opt.initial_panels = std::max(4, static_cast<int>(upper));
    auto r = adaptive_gk<Complex>(f, 0.0, upper, opt);
    return {r.value, false};
}

namespace {

// Common core of the rotated-path representations:
//   int e^{-A e^{i theta} (e^v + e^{-v})} e^{sgn * s * v} dv
// with A = y sqrt|lam| / 2 and theta = arg(lam)/2.
Complex cosh_path_integral(double A, double theta, double s, double sgn) {
    const double ct = A * std::cos(theta);
    const double V = std::max(5.0, std::log(80.0 / ct));
    const Complex rate = A * std::exp(Complex(0.0, theta));
    auto f = [&](double v) -> Complex {
        return std::exp(-rate * (std::exp(v) + std::exp(-v)) + sgn * s * v);
    };
    GKOptions opt;
    opt.rel_tol = 1e-12;
    opt.initial_panels = std::max(8, static_cast<int>(V));
    return adaptive_gk<Complex>(f, -V, V, opt).value;
}

}  // namespace

Complex i_s(double y, Complex lam, const FracOrder& s, IsRepresentation rep) {
    if (!(y > 0.0)) throw std::domain_error("i_s: y must be positive");
    if (!(lam.real() > 0.0)) throw std::domain_error("i_s: Re(lambda) must be positive");
    const double s_ = s.value();
    const double theta = std::arg(lam) / 2.0;
    const double A = y * std::sqrt(std::abs(lam)) / 2.0;
    const double gs = std::tgamma(s_);

    switch (rep) {
        case IsRepresentation::bessel: {
            const Complex z = y * std::sqrt(lam);
            auto K = bessel_k(s_, z);
            if (K.underflow) return Complex(0.0);
            return std::pow(2.0, 1.0 - s_) / gs * std::pow(z, s_) * K.value;
        }
        case IsRepresentation::laplace_in_t: {
            // 1/Gamma(s) int e^{-t} e^{-y^2 lam/(4t)} t^{s-1} dt.
            const Complex b = y * y * lam / 4.0;
            // Digits lost to oscillatory cancellation along the real axis;
            // rotate the path only when the straight evaluation is unsound.
            const double c2t = std::cos(2.0 * theta);
            const double lost =
                2.0 * A * (std::cos(theta) - std::sqrt(std::max(c2t, 0.0))) / std::log(10.0);
            if (lost < 6.0) {
                const double rb = std::max(b.real(), 1e-280);
                // Keep everything within ~50 nepers of the saddle at t = sqrt(rb).
                const double ulo =
                    std::max(std::log(rb / (2.0 * std::sqrt(rb) + 50.0)), -50.0 / s_);
                const double uhi = std::log(2.0 * std::sqrt(rb) + 60.0) + 1.0;
                auto f = [&](double u) -> Complex {
                    const double t = std::exp(u);
                    return std::exp(-t - b / t + s_ * u);
                };
                GKOptions opt;
                opt.rel_tol = 1e-12;
                opt.initial_panels = std::max(8, static_cast<int>((uhi - ulo) / 2.0));
                return adaptive_gk<Complex>(f, ulo, uhi, opt).value / gs;
            }
            return std::pow(A, s_) * std::exp(Complex(0.0, s_ * theta)) / gs *
                   cosh_path_integral(A, theta, s_, +1.0);
        }
        case IsRepresentation::laplace_in_r: {
            // y^{2s}/(4^s Gamma(s)) int e^{-y^2/(4r)} e^{-r lam} r^{-1-s} dr,
            // path rotated to arg(r) = -arg(lam)/2.
            const double r0 = y / (2.0 * std::sqrt(std::abs(lam)));
            const Complex pref = std::pow(y, 2.0 * s_) / (std::pow(4.0, s_) * gs) *
                                 std::pow(r0, -s_) * std::exp(Complex(0.0, s_ * theta));
            return pref * cosh_path_integral(A, theta, s_, -1.0);
        }
        case IsRepresentation::multiplier: {
            // lam^s/Gamma(s) int e^{-y^2/(4 tau)} e^{-tau lam} tau^{s-1} dtau;
            // the lam^s branch factor enters explicitly here.
            const double r0 = y / (2.0 * std::sqrt(std::abs(lam)));
            const Complex pref = std::pow(lam, s_) * std::pow(r0, s_) *
                                 std::exp(Complex(0.0, -s_ * theta)) / gs;
            return pref * cosh_path_integral(A, theta, s_, +1.0);
        }
    }
    throw std::logic_error("i_s: unknown representation");
}

Complex i_s_y_derivative(double y, Complex lam, const FracOrder& s) {
    const double s_ = s.value();
    const FracOrder dual(1.0 - s_);
    return -neumann_trace_constant(s) * std::pow(y, 2.0 * s_ - 1.0) *
           std::pow(lam, s_) * i_s(y, lam, dual, IsRepresentation::bessel);
}

double neumann_trace_constant(const FracOrder& s) {
    const double s_ = s.value();
    return std::tgamma(1.0 - s_) / (std::pow(4.0, s_ - 0.5) * std::tgamma(s_));
}

double quotient_trace_constant(const FracOrder& s) {
    const double s_ = s.value();
    return std::tgamma(-s_) / (std::pow(4.0, s_) * std::tgamma(s_));
}

double normalization_residual(double y, const FracOrder& s) {
    const double s_ = s.value();
    const double c = y * y / 4.0;
    const double ulo = std::log(c / 180.0);
    const double uhi = std::log(c) + 50.0 / s_;
    auto f = [&](double u) -> double { return std::exp(-c * std::exp(-u) - s_ * u); };
    GKOptions opt;
    opt.rel_tol = 1e-13;
    opt.initial_panels = std::max(8, static_cast<int>((uhi - ulo) / 2.0));
    const double val = adaptive_gk<double>(f, ulo, uhi, opt).value;
    return std::abs(std::pow(y, 2.0 * s_) / std::pow(4.0, s_) / std::tgamma(s_) * val - 1.0);
}

}  // namespace fracpar::specfun
