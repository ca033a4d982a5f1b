#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "fracpar/extension.hpp"
#include "fracpar/fracop.hpp"
#include "fracpar/specfun.hpp"

using namespace fracpar;

namespace {

std::shared_ptr<const EigenSystem> dirichlet_space(int K, int N) {
    OperatorSpec spec;
    spec.kind = OperatorKind::interval_dirichlet;
    return std::make_shared<const EigenSystem>(build_eigensystem(spec, K, N));
}

double rel_err(Complex a, Complex b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-280});
}

}  // namespace

TEST_CASE("y-grid construction") {
    YGrid g;
    Eigen::VectorXd y = g.nodes();
    CHECK(y(0) == doctest::Approx(1e-3));
    CHECK(y(1) / y(0) == doctest::Approx(1.25));
    CHECK(y(y.size() - 1) <= 50.0 * (1 + 1e-12));
    CHECK(y(y.size() - 1) * 1.25 > 50.0);

    YGrid bad;
    bad.growth = 1.0;
    CHECK_THROWS_AS(bad.nodes(), std::domain_error);
    bad = YGrid{};
    bad.y_min = 0.0;
    CHECK_THROWS_AS(bad.nodes(), std::domain_error);
}

TEST_CASE("spectral extension: kernel values, contraction, decay") {
    TimeGrid tg(16, 4.0);
    auto es = dirichlet_space(6, 32);
    std::mt19937 rng(13);
    SpectralField u = analyze(random_band_limited_field(tg, es, rng));
    const FracOrder s(0.4);
    YGrid g;
    g.y_max = 20.0;
    ExtensionField ext = extend(u, s, g);

    // levels are I_s * u_hat by construction; spot check against specfun
    const int l = 7, m = 10, k = 2;
    const Complex sym(es->lambda(k), tg.rho(m));
    CHECK(rel_err(ext.levels[l](m, k), specfun::i_s(ext.y(l), sym, s) * u.coef(m, k)) <
          1e-13);

    // |I_s| <= 1: the extension contracts every mode at every height
    for (const auto& lvl : ext.levels)
        CHECK(((lvl.cwiseAbs() - ext.base.cwiseAbs()).maxCoeff()) < 1e-12);

    // deep evanescent decay at the top of the grid
    CHECK(ext.levels.back().cwiseAbs().maxCoeff() <
          1e-6 * ext.base.cwiseAbs().maxCoeff());
}

TEST_CASE("Poisson-integral route agrees with the spectral route") {
    TimeGrid tg(16, 4.0);
    auto es = dirichlet_space(6, 32);
    std::mt19937 rng(29);
    SpectralField u = analyze(random_band_limited_field(tg, es, rng));
    const FracOrder s(0.6);
    YGrid g;
    g.y_max = 5.0;
    ExtensionField a = extend(u, s, g);
    ExtensionField b = extend_quadrature(u, s, g);
    const double scale = u.coef.norm();
    for (std::size_t l = 0; l < a.levels.size(); ++l)
        CHECK((a.levels[l] - b.levels[l]).norm() < 1e-6 * scale);
}

TEST_CASE("trace constants recovered from empirical y->0 limits over 50 modes") {
    auto es = dirichlet_space(50, 256);
    for (double sv : {0.25, 0.5, 0.75}) {
        const FracOrder s(sv);
        const double cq = specfun::quotient_trace_constant(s);
        const double cn = specfun::neumann_trace_constant(s);
        const double rho = 1.7;  // exercise genuinely complex symbols too
        for (int k = 0; k < 50; ++k) {
            for (double r : {0.0, rho}) {
                const Complex sym(es->lambda(k), r);
                const TraceLimits t = trace_limits(s, sym);
                const Complex syms = std::pow(sym, sv);
                CHECK(rel_err(t.quotient, cq * syms) < 1e-6);
                CHECK(rel_err(t.neumann, cn * syms) < 1e-6);
            }
        }
    }
    CHECK_THROWS_AS(trace_limits(FracOrder(0.5), Complex(0.0)), std::domain_error);
}

TEST_CASE("trace constant closed forms: cross identity and s = 1/2") {
    for (double sv : {0.05, 0.2, 0.5, 0.8, 0.95}) {
        const FracOrder s(sv);
        const double cn = specfun::neumann_trace_constant(s);
        const double cq = specfun::quotient_trace_constant(s);
        CHECK(std::abs(cn + 2.0 * sv * cq) < 1e-10 * std::abs(cn));
    }
    CHECK(std::abs(specfun::neumann_trace_constant(FracOrder(0.5)) - 1.0) < 1e-8);
}

TEST_CASE("trace fields recover H^s u through both limits") {
    TimeGrid tg(16, 4.0);
    auto es = dirichlet_space(6, 32);
    std::mt19937 rng(41);
    SpectralField u = analyze(random_band_limited_field(tg, es, rng));
    const FracOrder s(0.35);
    ExtensionField ext = extend(u, s);
    SpectralField hs = apply_fractional(u, s);

    const double cn = specfun::neumann_trace_constant(s);
    const double cq = specfun::quotient_trace_constant(s);
    SpectralField nt = neumann_trace(ext);
    SpectralField qt = quotient_trace(ext);
    const double scale = hs.coef.norm();
    CHECK((nt.coef / cn - hs.coef).norm() < 1e-6 * scale);
    CHECK((qt.coef / cq - hs.coef).norm() < 1e-6 * scale);
}

TEST_CASE("extension PDE residual") {
    TimeGrid tg(16, 4.0);
    auto es = dirichlet_space(6, 32);
    std::mt19937 rng(53);
    SpectralField u = analyze(random_band_limited_field(tg, es, rng));
    for (double sv : {0.2, 0.5, 0.8}) {
        ExtensionField ext = extend(u, FracOrder(sv));
        PdeResidual r = pde_residual(ext);
        CHECK(r.max_scaled < 1e-8);
        // the FD variant is informational: finite, nonzero, and honest about
        // its truncation error
        CHECK(r.fd_max_scaled > 0.0);
        CHECK(r.fd_max_scaled < 1.0);
    }
}

TEST_CASE("extension energy ratio is stable under y-grid refinement") {
    TimeGrid tg(16, 4.0);
    auto es = dirichlet_space(6, 32);
    std::mt19937 rng(67);
    SpectralField u = analyze(random_band_limited_field(tg, es, rng));
    for (double sv : {0.3, 0.7}) {
        const FracOrder s(sv);
        YGrid coarse;
        YGrid fine;
        fine.y_min = 5e-4;
        fine.growth = std::sqrt(1.25);
        const double r1 = energy_norm(extend(u, s, coarse)) / hs_norm_sq(u, sv);
        const double r2 = energy_norm(extend(u, s, fine)) / hs_norm_sq(u, sv);
        CHECK(std::abs(r1 - r2) < 0.01 * std::abs(r1));
    }
}

TEST_CASE("even reflection across y = 0") {
    TimeGrid tg(16, 4.0);
    auto es = dirichlet_space(4, 32);
    std::mt19937 rng(71);
    SpectralField u = analyze(random_band_limited_field(tg, es, rng));
    ExtensionField ext = extend(u, FracOrder(0.5));
    ReflectedExtension r = reflect(ext, 1.0);

    const int mid = (static_cast<int>(r.y.size()) - 1) / 2;
    CHECK(r.y(mid) == 0.0);
    CHECK((r.levels[mid] - ext.base).cwiseAbs().maxCoeff() == 0.0);
    for (int l = 1; l <= mid; ++l) {
        CHECK(r.y(mid + l) == doctest::Approx(-r.y(mid - l)));
        CHECK((r.levels[mid + l] - r.levels[mid - l]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(r.weight_note.find("A2") != std::string::npos);
    CHECK_THROWS_AS(reflect(ext, 100.0), std::domain_error);
}
