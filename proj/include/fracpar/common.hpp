#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fracpar {

using Complex = std::complex<double>;

// Quadrature failed to reach the requested tolerance. Carries the achieved
// error estimate so callers can decide whether the result is still usable.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

// Fractional order s, strictly inside (0,1). The endpoint operators are
// classical and the Gamma factors degenerate there, so construction rejects
// s = 0 and s = 1.
class FracOrder {
public:
    explicit FracOrder(double s) : s_(s) {
        if (!(s > 0.0) || !(s < 1.0))
            throw std::domain_error("FracOrder: s must lie strictly in (0,1), got " +
                                    std::to_string(s));
    }
    double value() const { return s_; }

private:
    double s_;
};

// One point (rho, lambda) of the joint time-frequency / spatial spectrum.
// The complex point i*rho + lambda always has nonnegative real part.
struct SpectralPoint {
    double rho;
    double lambda;

    SpectralPoint(double rho_, double lambda_) : rho(rho_), lambda(lambda_) {
        if (lambda < 0.0)
            throw std::domain_error("SpectralPoint: lambda must be >= 0");
    }
    Complex symbol() const { return Complex(lambda, rho); }
    bool is_origin() const { return rho == 0.0 && lambda == 0.0; }
};

// Controls the singular dtau/tau^{1+s} quadratures.
struct QuadratureSpec {
    double split_point = 1.0;
    int nodes_inner = 16;
    int nodes_outer = 16;
    double relative_tolerance = 1e-10;

    void validate() const {
        if (!(split_point > 0.0))
            throw std::domain_error("QuadratureSpec: split_point must be positive");
        if (nodes_inner < 8 || nodes_outer < 8)
            throw std::domain_error("QuadratureSpec: node counts must be >= 8");
        if (!(relative_tolerance > 0.0) || relative_tolerance > 1e-2)
            throw std::domain_error("QuadratureSpec: tolerance must be in (0, 1e-2]");
    }
};

}  // namespace fracpar
