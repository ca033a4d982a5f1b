#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "fracpar/fracop.hpp"
#include "fracpar/specfun.hpp"

using namespace fracpar;

namespace {

std::shared_ptr<const EigenSystem> make_space(OperatorKind kind, int K, int N) {
    OperatorSpec spec;
    spec.kind = kind;
    return std::make_shared<const EigenSystem>(build_eigensystem(spec, K, N));
}

// A field concentrated on the single joint mode (rho_{m}, lambda_k).
SpaceTimeField single_mode(const TimeGrid& tg, std::shared_ptr<const EigenSystem> es,
                           int m, int k) {
    SpectralField c(tg, es);
    c.coef(m, k) = 1.0;
    return synthesize(c);
}

double rel_err(Complex a, Complex b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-280});
}

}  // namespace

TEST_CASE("time grid conventions and validation") {
    TimeGrid tg(32, 4.0);
    CHECK(tg.dt() == doctest::Approx(0.125));
    CHECK(tg.rho(tg.origin_index()) == 0.0);
    CHECK(tg.rho(tg.origin_index() + 1) == doctest::Approx(2.0 * 3.14159265358979 / 4.0));
    CHECK(tg.rho(0) == doctest::Approx(-16.0 * tg.drho()));
    CHECK_THROWS_AS(TimeGrid(15, 1.0), std::domain_error);
    CHECK_THROWS_AS(TimeGrid(14, 1.0), std::domain_error);
    CHECK_THROWS_AS(TimeGrid(16, 0.0), std::domain_error);
}

TEST_CASE("analyze/synthesize: unitary round trips and Parseval") {
    TimeGrid tg(32, 4.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 8, 64);

    // synthesize then analyze recovers arbitrary coefficients
    std::mt19937 rng(11);
    std::normal_distribution<double> gauss;
    SpectralField c(tg, es);
    for (int m = 0; m < tg.M; ++m)
        for (int k = 0; k < 8; ++k) c.coef(m, k) = Complex(gauss(rng), gauss(rng));
    SpectralField back = analyze(synthesize(c));
    CHECK((back.coef - c.coef).cwiseAbs().maxCoeff() < 1e-12 * c.coef.cwiseAbs().maxCoeff());

    // analyze then synthesize is the identity on band-limited real fields
    SpaceTimeField f = random_band_limited_field(tg, es, rng);
    SpaceTimeField f2 = synthesize(analyze(f));
    CHECK((f2.values - f.values).cwiseAbs().maxCoeff() <
          1e-12 * f.values.cwiseAbs().maxCoeff());
    CHECK(f.max_imag() == 0.0);

    // Parseval: grid inner product equals drho * sum |coef|^2
    SpectralField fc = analyze(f);
    const double spec_norm = tg.drho() * fc.coef.cwiseAbs2().sum();
    CHECK(std::abs(field_inner(f, f).real() - spec_norm) < 1e-12 * spec_norm);
}

TEST_CASE("multiplier route on a single joint mode") {
    TimeGrid tg(16, 2.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 6, 32);
    const int m = 11, k = 3;  // rho = 3 drho, lambda = 16
    SpaceTimeField f = single_mode(tg, es, m, k);
    for (double sv : {0.1, 0.5, 0.9}) {
        SpectralField out = apply_fractional(analyze(f), FracOrder(sv));
        const Complex expect =
            specfun::complex_power(SpectralPoint(tg.rho(m), es->lambda(k)), FracOrder(sv));
        CHECK(rel_err(out.coef(m, k), expect) < 1e-13);
        // all other coefficients stay (numerically) zero
        Eigen::MatrixXcd rest = out.coef;
        rest(m, k) = 0.0;
        CHECK(rest.cwiseAbs().maxCoeff() < 1e-12 * std::abs(expect));
    }
}

TEST_CASE("multiplier route: additivity, duality, realness") {
    TimeGrid tg(32, 4.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 8, 64);
    std::mt19937 rng(23);
    SpaceTimeField u = random_band_limited_field(tg, es, rng);
    SpaceTimeField v = random_band_limited_field(tg, es, rng);
    SpectralField uh = analyze(u), vh = analyze(v);

    // H^{s1} H^{s2} = H^{s1+s2}
    SpectralField two = apply_fractional(apply_fractional(uh, FracOrder(0.3)), FracOrder(0.45));
    SpectralField one = apply_fractional(uh, FracOrder(0.75));
    CHECK((two.coef - one.coef).cwiseAbs().maxCoeff() <
          1e-9 * one.coef.cwiseAbs().maxCoeff());
    CHECK(two.s_applied.size() == 2);

    // duality against the time-reversed operator: <H^s u, v> = <u, (H^*)^s v>
    const FracOrder s(0.6);
    SpectralField hu = apply_fractional(uh, s);
    SpectralField hv_star(tg, es);
    for (int m = 0; m < tg.M; ++m)
        for (int k = 0; k < 8; ++k) {
            const Complex sym(es->lambda(k), tg.rho(m));
            hv_star.coef(m, k) =
                sym == Complex(0.0) ? Complex(0.0)
                                    : std::conj(std::pow(sym, s.value())) * vh.coef(m, k);
        }
    const Complex lhs = field_inner(synthesize(hu), v);
    const Complex rhs = field_inner(u, synthesize(hv_star));
    CHECK(rel_err(lhs, rhs) < 1e-12);

    // conjugate symmetry of the multiplier preserves real fields
    SpaceTimeField hu_phys = apply_fractional(u, s);
    CHECK(hu_phys.max_imag() < 1e-12 * hu_phys.values.cwiseAbs().maxCoeff());
}

TEST_CASE("apply_fractional rejects mass at the spectral origin") {
    TimeGrid tg(16, 2.0);
    OperatorSpec spec;
    spec.kind = OperatorKind::hermite_shifted;  // lambda_0 = 0
    auto es = std::make_shared<const EigenSystem>(build_eigensystem(spec, 4, 64));
    SpectralField c(tg, es);
    c.coef(tg.origin_index(), 0) = 1.0;  // (rho, lambda) = (0, 0)
    CHECK_THROWS_AS(apply_fractional(c, FracOrder(0.5)), std::domain_error);
    // mass at (rho != 0, lambda = 0) is fine for the multiplier route
    c.coef(tg.origin_index(), 0) = 0.0;
    c.coef(tg.origin_index() + 2, 0) = 1.0;
    CHECK_NOTHROW(apply_fractional(c, FracOrder(0.5)));
    // ... but not for the semigroup route (undamped tail)
    CHECK_THROWS_AS(fractional_via_semigroup(c, FracOrder(0.5)), std::domain_error);
}

TEST_CASE("semigroup: multiplier value and the semigroup property") {
    TimeGrid tg(16, 2.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 6, 32);
    const int m = 10, k = 2;
    SpectralField c(tg, es);
    c.coef(m, k) = 1.0;
    const double tau = 0.37;
    SpectralField out = apply_semigroup(c, tau);
    const Complex expect = std::exp(-tau * Complex(es->lambda(k), tg.rho(m)));
    CHECK(rel_err(out.coef(m, k), expect) < 1e-14);

    std::mt19937 rng(5);
    SpectralField r = analyze(random_band_limited_field(tg, es, rng));
    SpectralField ab = apply_semigroup(apply_semigroup(r, 0.2), 0.5);
    SpectralField once = apply_semigroup(r, 0.7);
    CHECK((ab.coef - once.coef).cwiseAbs().maxCoeff() <
          1e-12 * once.coef.cwiseAbs().maxCoeff());
    CHECK_THROWS_AS(apply_semigroup(r, -0.1), std::domain_error);
}

TEST_CASE("hs_norm_sq: closed form and the half-power identity") {
    TimeGrid tg(16, 2.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 6, 32);
    const int m = 12, k = 1;
    SpectralField c(tg, es);
    c.coef(m, k) = 2.0;
    const double a = std::abs(Complex(es->lambda(k), tg.rho(m)));
    CHECK(hs_norm_sq(c, 0.8) ==
          doctest::Approx(tg.drho() * std::pow(a, 0.8) * 4.0).epsilon(1e-13));

    std::mt19937 rng(9);
    SpectralField r = analyze(random_band_limited_field(tg, es, rng));
    const double via_half = hs_norm_sq(apply_fractional(r, FracOrder(0.35)), 0.0);
    const double direct = hs_norm_sq(r, 0.7);
    CHECK(std::abs(via_half - direct) < 1e-12 * direct);
    CHECK_THROWS_AS(hs_norm_sq(r, -0.5), std::domain_error);
}

TEST_CASE("semigroup subordination route agrees with the multiplier route") {
    TimeGrid tg(16, 4.0);
    for (auto kind : {OperatorKind::interval_dirichlet, OperatorKind::interval_neumann,
                      OperatorKind::hermite}) {
        auto es = make_space(kind, 8, 64);
        std::mt19937 rng(31);
        SpectralField r = analyze(random_band_limited_field(tg, es, rng));
        for (double sv : {0.1, 0.5, 0.9}) {
            SpectralField direct = apply_fractional(r, FracOrder(sv));
            RouteResult via = fractional_via_semigroup(r, FracOrder(sv));
            const double scale = direct.coef.norm();
            CHECK((via.value.coef - direct.coef).norm() < 1e-6 * scale);
            CHECK((via.value.coef - direct.coef).norm() <
                  std::max(10.0 * via.error_estimate, 1e-12 * scale));
        }
    }
}

TEST_CASE("pointwise master route agrees with the multiplier route") {
    TimeGrid tg(16, 4.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 8, 64);
    std::mt19937 rng(37);
    SpaceTimeField u = random_band_limited_field(tg, es, rng);
    for (double sv : {0.25, 0.5, 0.75}) {
        SpaceTimeField direct = apply_fractional(u, FracOrder(sv));
        MasterApplyResult via = fractional_via_master(u, FracOrder(sv));
        const double scale = direct.values.norm();
        CHECK((via.value.values - direct.values).norm() < 1e-6 * scale);
        CHECK((via.value.values - direct.values).norm() <
              std::max(10.0 * via.error_estimate, 1e-12 * scale));
    }
}

TEST_CASE("master form matches the spectral bilinear form with a valid error bound") {
    TimeGrid tg(32, 4.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 16, 64);
    std::mt19937 rng(47);
    SpaceTimeField u = random_band_limited_field(tg, es, rng);
    SpaceTimeField v = random_band_limited_field(tg, es, rng);
    SpectralField uh = analyze(u), vh = analyze(v);

    QuadratureSpec q;
    q.relative_tolerance = 1e-8;

    for (double sv : {0.3, 0.7}) {
        Complex spectral = 0.0;
        for (int m = 0; m < tg.M; ++m)
            for (int k = 0; k < 16; ++k) {
                const Complex sym(es->lambda(k), tg.rho(m));
                spectral += std::pow(sym, sv) * uh.coef(m, k) * std::conj(vh.coef(m, k));
            }
        spectral *= tg.drho();

        MasterFormResult r = master_form(u, v, FracOrder(sv), q);
        const double scale = std::abs(spectral);
        CHECK(std::abs(r.value - spectral) < 1e-3 * scale);
        CHECK(std::abs(r.value - spectral) <
              std::max(10.0 * r.error_estimate, 1e-10 * scale));
        // the reported pieces really decompose the total
        CHECK(rel_err(r.term_head + r.term_kernel + r.term_mass + r.term_history,
                      r.value) < 1e-12);
    }

    // the quadratic form Re <H^s u, u> is positive (symbol args stay in
    // (-s pi/2, s pi/2))
    MasterFormResult diag = master_form(u, u, FracOrder(0.5), q);
    CHECK(diag.value.real() > 0.0);

    // guard rails
    OperatorSpec nspec;
    nspec.kind = OperatorKind::interval_neumann;
    auto en = std::make_shared<const EigenSystem>(build_eigensystem(nspec, 8, 64));
    std::mt19937 rng2(3);
    SpaceTimeField un = random_band_limited_field(tg, en, rng2);
    CHECK_THROWS_AS(master_form(un, un, FracOrder(0.5), q), std::domain_error);
}

TEST_CASE("Marchaud derivative equals the (i rho)^s time multiplier") {
    TimeGrid tg(16, 2.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 4, 32);
    std::mt19937 rng(77);
    SpectralField r = analyze(random_band_limited_field(tg, es, rng));
    for (double sv : {0.2, 0.5, 0.8}) {
        SpectralField out = marchaud_derivative(r, FracOrder(sv));
        double worst = 0.0;
        for (int m = 0; m < tg.M; ++m) {
            const double rho = tg.rho(m);
            const Complex mu =
                rho == 0.0 ? Complex(0.0) : std::pow(Complex(0.0, rho), sv);
            for (int k = 0; k < 4; ++k)
                worst = std::max(worst,
                                 std::abs(out.coef(m, k) - mu * r.coef(m, k)));
        }
        CHECK(worst < 1e-6 * r.coef.cwiseAbs().maxCoeff());
    }
}
