#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracpar/specfun.hpp"

using namespace fracpar;
using namespace fracpar::specfun;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double rel_diff(Complex a, Complex b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-280});
    return std::abs(a - b) / scale;
}

// The spec lattice: s x y x lambda, origin-free, Re(lam) > 0.
const std::vector<double> kSValues = {0.1, 0.25, 0.5, 0.75, 0.9};
const std::vector<double> kLambdaRe = {0.1, 1.0, 10.0};
const std::vector<double> kRho = {-20.0, -1.0, 0.0, 1.0, 20.0};

std::vector<double> geometric_y(int n) {
    std::vector<double> y(n);
    const double lo = 1e-3, hi = 50.0;
    for (int i = 0; i < n; ++i) y[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return y;
}

}  // namespace

TEST_CASE("gamma_fn classical values") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(kPi)).epsilon(1e-12));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
}

TEST_CASE("gamma reflection |Gamma(-s)| = Gamma(1-s)/s") {
    for (double s = 0.05; s < 1.0; s += 0.05) {
        const double lhs = std::abs(gamma_fn(-s));
        const double rhs = gamma_fn(1.0 - s) / s;
        CHECK(std::abs(lhs - rhs) / rhs < 1e-12);
    }
}

TEST_CASE("complex_power principal branch") {
    FracOrder half(0.5);
    CHECK(rel_diff(complex_power({0.0, 1.0}, half), Complex(1.0, 0.0)) < 1e-14);
    const Complex root_i = complex_power({1.0, 0.0}, half);
    CHECK(rel_diff(root_i, Complex(std::sqrt(0.5), std::sqrt(0.5))) < 1e-14);
    CHECK_THROWS_AS(complex_power({0.0, 0.0}, half), std::domain_error);
}

TEST_CASE("FracOrder rejects endpoints") {
    CHECK_THROWS_AS(FracOrder(0.0), std::domain_error);
    CHECK_THROWS_AS(FracOrder(1.0), std::domain_error);
    CHECK_NOTHROW(FracOrder(0.5));
}

TEST_CASE("gamma_power_oracle trivial values") {
    FracOrder half(0.5);
    auto r = gamma_power_oracle({0.0, 4.0}, half);
    CHECK(std::abs(r.value - Complex(2.0)) < 1e-8);
    for (double s : kSValues)
        CHECK(std::abs(gamma_power_oracle({0.0, 1.0}, FracOrder(s)).value - Complex(1.0)) <
              1e-9);
}

TEST_CASE("complex_power agrees with gamma_power_oracle on the lattice") {
    for (double s : kSValues) {
        FracOrder fs(s);
        for (double lam : kLambdaRe)
            for (double rho : kRho) {
                SpectralPoint p(rho, lam);
                auto o = gamma_power_oracle(p, fs);
                CHECK(rel_diff(o.value, complex_power(p, fs)) < 1e-8);
            }
    }
    // the spec's pinned example
    CHECK(rel_diff(gamma_power_oracle({3.0, 2.0}, FracOrder(0.7)).value,
                   complex_power({3.0, 2.0}, FracOrder(0.7))) < 1e-8);
}

TEST_CASE("bessel_k closed form and asymptotics") {
    // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
    auto k = bessel_k(0.5, Complex(1.0));
    CHECK(rel_diff(k.value, Complex(std::sqrt(kPi / 2.0) * std::exp(-1.0))) < 1e-12);
    for (double x : {0.1, 2.5, 20.0, 40.0}) {
        auto kv = bessel_k(0.5, Complex(x));
        CHECK(rel_diff(kv.value, Complex(std::sqrt(kPi / (2.0 * x)) * std::exp(-x))) < 1e-10);
    }

    // small-z divergence like z^{-nu}
    const double r1 = std::abs(bessel_k(0.3, Complex(1e-3)).value);
    const double r2 = std::abs(bessel_k(0.3, Complex(1e-4)).value);
    CHECK(r2 / r1 == doctest::Approx(std::pow(10.0, 0.3)).epsilon(1e-2));

    // leading exponential regime
    auto k10 = bessel_k(0.7, Complex(10.0));
    const double lead = std::sqrt(kPi / 20.0) * std::exp(-10.0);
    CHECK(std::abs(std::abs(k10.value) - lead) / lead < 0.1);

    CHECK_THROWS_AS(bessel_k(0.5, Complex(0.0, 1.0)), std::domain_error);
    CHECK_THROWS_AS(bessel_k(1.5, Complex(1.0)), std::domain_error);
    auto uf = bessel_k(0.5, Complex(800.0));
    CHECK(uf.underflow);
    CHECK(uf.value == Complex(0.0));
}

TEST_CASE("i_s closed form at s = 1/2 and boundary limit") {
    FracOrder half(0.5);
    for (auto rep : {IsRepresentation::bessel, IsRepresentation::laplace_in_t,
                     IsRepresentation::laplace_in_r, IsRepresentation::multiplier}) {
        CHECK(rel_diff(i_s(1.0, Complex(1.0), half, rep), Complex(std::exp(-1.0))) < 1e-9);
        CHECK(rel_diff(i_s(2.0, Complex(4.0), half, rep), Complex(std::exp(-4.0))) < 1e-9);
    }
    // lim_{y->0} I_s = 1, with (I_s - 1)/y^{2s} -> Gamma(-s)/(4^s Gamma(s)) lam^s
    for (double s : {0.2, 0.5, 0.8}) {
        FracOrder fs(s);
        const Complex lam(1.0, 0.5);
        const double y = 1e-6;
        const Complex lead = (i_s(y, lam, fs) - Complex(1.0)) / std::pow(y, 2.0 * s);
        const Complex expect = quotient_trace_constant(fs) * std::pow(lam, s);
        CHECK(rel_diff(lead, expect) < 1e-2);
    }
    // |I_s| <= 1
    CHECK(std::abs(i_s(2.0, Complex(1.0, 1.0), FracOrder(0.3))) <= 1.0 + 1e-12);
    CHECK_THROWS_AS(i_s(1.0, Complex(-1.0, 0.5), FracOrder(0.3)), std::domain_error);
    CHECK_THROWS_AS(i_s(0.0, Complex(1.0), FracOrder(0.3)), std::domain_error);
}

TEST_CASE("four representations agree pairwise on a lattice slice") {
    const auto ys = geometric_y(7);
    for (double s : {0.1, 0.5, 0.9}) {
        FracOrder fs(s);
        for (double y : ys)
            for (double lr : kLambdaRe)
                for (double rho : {-20.0, 0.0, 1.0}) {
                    const Complex lam(lr, rho);
                    const Complex a = i_s(y, lam, fs, IsRepresentation::bessel);
                    const Complex b = i_s(y, lam, fs, IsRepresentation::laplace_in_t);
                    const Complex c = i_s(y, lam, fs, IsRepresentation::laplace_in_r);
                    const Complex d = i_s(y, lam, fs, IsRepresentation::multiplier);
                    CAPTURE(s); CAPTURE(y); CAPTURE(lr); CAPTURE(rho);
                    CHECK(rel_diff(a, b) < 1e-8);
                    CHECK(rel_diff(a, c) < 1e-8);
                    CHECK(rel_diff(a, d) < 1e-8);
                    CHECK(rel_diff(b, c) < 1e-8);
                    CHECK(std::abs(a) <= 1.0 + 1e-12);
                }
    }
}

TEST_CASE("derivative identity: closed form vs finite differences") {
    FracOrder half(0.5);
    // at s=1/2, I = e^{-y sqrt(lam)} so -dI/dy = e^{-1} at y=1, lam=1
    CHECK(rel_diff(-i_s_y_derivative(1.0, Complex(1.0), half), Complex(std::exp(-1.0))) <
          1e-9);

    for (double s : {0.25, 0.5, 0.8}) {
        FracOrder fs(s);
        for (double y : {0.3, 1.0, 4.0})
            for (Complex lam : {Complex(1.0), Complex(2.0, 3.0), Complex(0.5, -1.0)}) {
                const double h = 1e-5;
                const Complex fd =
                    (i_s(y + h, lam, fs) - i_s(y - h, lam, fs)) / (2.0 * h);
                CAPTURE(s); CAPTURE(y);
                CHECK(rel_diff(fd, i_s_y_derivative(y, lam, fs)) < 1e-6);
            }
    }

    // y -> 0: y^{1-2s} dI/dy tends to -Gamma(1-s)/(4^{s-1/2}Gamma(s)) lam^s
    for (double s : {0.3, 0.6}) {
        FracOrder fs(s);
        const Complex lam(2.0, 1.0);
        const double y = 1e-6;
        const Complex lim = std::pow(y, 1.0 - 2.0 * s) * i_s_y_derivative(y, lam, fs);
        const Complex expect = -neumann_trace_constant(fs) * std::pow(lam, s);
        CHECK(rel_diff(lim, expect) < 1e-4);
    }
}

TEST_CASE("ODE residual with finite-difference second derivative") {
    for (double s : {0.25, 0.5, 0.75}) {
        FracOrder fs(s);
        for (double y : {0.5, 1.0, 5.0})
            for (Complex lam : {Complex(1.0), Complex(10.0), Complex(1.0, 5.0)}) {
                const double h = std::min(0.02 / std::sqrt(std::abs(lam)), y / 5.0);
                auto f = [&](double yy) { return i_s(yy, lam, fs); };
                auto stencil = [&](double hh) {
                    return (-f(y - 2 * hh) + 16.0 * f(y - hh) - 30.0 * f(y) +
                            16.0 * f(y + hh) - f(y + 2 * hh)) /
                           (12.0 * hh * hh);
                };
                // Richardson step kills the h^4 term, which the singular y^{2s}
                // component of I_s makes dominant near y = 0.
                const Complex d2 = (16.0 * stencil(h / 2) - stencil(h)) / 15.0;
                const Complex d1 = i_s_y_derivative(y, lam, fs);
                const Complex resid = lam * f(y) - (1.0 - 2.0 * s) / y * d1 - d2;
                CAPTURE(s); CAPTURE(y);
                CHECK(std::abs(resid) < 1e-8 * std::abs(lam));
            }
    }
}

TEST_CASE("normalization self-test") {
    for (double s : {0.1, 0.5, 0.9})
        for (double y : {1e-3, 0.1, 1.0, 10.0, 50.0})
            CHECK(normalization_residual(y, FracOrder(s)) < 1e-10);
}

TEST_CASE("decay estimate (5.b) has a finite fitted constant") {
    // |I_s| <= C (y |lam|^{1/2})^{s-1/2} e^{-cos(arg lam / 2) y |lam|^{1/2}}
    for (double s : {0.25, 0.75}) {
        FracOrder fs(s);
        double worst = 0.0;
        for (Complex lam : {Complex(1.0), Complex(1.0, 1.0), Complex(0.1, 2.0)}) {
            const double sq = std::sqrt(std::abs(lam));
            for (double z = 10.0; z <= 50.0; z *= 1.5) {
                const double y = z / sq;
                const double bound = std::pow(z, s - 0.5) *
                                     std::exp(-std::cos(std::arg(lam) / 2.0) * z);
                worst = std::max(worst, std::abs(i_s(y, lam, fs)) / bound);
            }
        }
        CHECK(worst < 10.0);  // finite, modest constant
    }
}

TEST_CASE("growth estimate (5.c) lam * I_s bounded by |lam|^s / y^{2-2s}") {
    for (double s : {0.1, 0.5, 0.9}) {
        FracOrder fs(s);
        double worst = 0.0;
        for (double y : geometric_y(8))
            for (double lr : kLambdaRe)
                for (double rho : {0.0, 1.0, 20.0}) {
                    const Complex lam(lr, rho);
                    const double bound = std::pow(std::abs(lam), s) / std::pow(y, 2.0 - 2.0 * s);
                    worst = std::max(worst, std::abs(lam * i_s(y, lam, fs)) / bound);
                }
        CHECK(worst < 50.0);
    }
}
