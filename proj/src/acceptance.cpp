#include "fracpar/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fracpar/extension.hpp"
#include "fracpar/fracop.hpp"
#include "fracpar/harness.hpp"
#include "fracpar/specfun.hpp"
#include "fracpar/transference.hpp"

namespace fracpar {

namespace {

using nlohmann::json;
using namespace fracpar::specfun;

constexpr double kPi = 3.141592653589793238462643383279502884;

double rel_diff(Complex a, Complex b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-280});
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::shared_ptr<const EigenSystem> make_space(OperatorKind kind, int K, int N) {
    OperatorSpec spec;
    spec.kind = kind;
    return std::make_shared<const EigenSystem>(build_eigensystem(spec, K, N));
}

// ---- criterion 1: principal branch vs subordination oracle -----------------

CriterionResult crit_branch() {
    CriterionResult c{1, "branch consistency: complex_power vs gamma oracle", false, ""};
    double worst = 0.0;
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const FracOrder fs(s);
        for (int i = 0; i < 15; ++i) {
            const double lam = 0.1 * std::pow(256.0 / 0.1, i / 14.0);
            for (double rho : {-20.0, -1.0, 0.0, 1.0, 20.0}) {
                const SpectralPoint p(rho, lam);
                worst = std::max(
                    worst, rel_diff(gamma_power_oracle(p, fs).value, complex_power(p, fs)));
            }
        }
    }
    c.passed = worst < 1e-8;
    c.detail = "75 points x 5 s, max rel err " + fmt(worst) + " (tol 1e-8)";
    return c;
}

// ---- criterion 2: extension-kernel (I_s) identity suite --------------------

CriterionResult crit_kernel_suite() {
    CriterionResult c{2, "extension kernel suite: representations/ODE/derivative",
                      false, ""};
    double worst_spread = 0.0, worst_mod = 0.0, worst_ode = 0.0, worst_deriv = 0.0,
           worst_norm = 0.0;
    for (double s : {0.1, 0.5, 0.9}) {
        const FracOrder fs(s);
        for (int iy = 0; iy < 7; ++iy) {
            const double y = 1e-3 * std::pow(50.0 / 1e-3, iy / 6.0);
            for (double lr : {0.1, 1.0, 10.0})
                for (double rho : {-20.0, 0.0, 1.0}) {
                    const Complex lam(lr, rho);
                    const Complex a = i_s(y, lam, fs, IsRepresentation::bessel);
                    const Complex b = i_s(y, lam, fs, IsRepresentation::laplace_in_t);
                    const Complex d = i_s(y, lam, fs, IsRepresentation::laplace_in_r);
                    const Complex e = i_s(y, lam, fs, IsRepresentation::multiplier);
                    worst_spread = std::max(
                        {worst_spread, rel_diff(a, b), rel_diff(a, d), rel_diff(a, e)});
                    worst_mod = std::max(worst_mod, std::abs(a) - 1.0);
                }
        }
        for (double y : {1e-3, 0.1, 1.0, 10.0, 50.0})
            worst_norm = std::max(worst_norm, normalization_residual(y, fs));
    }
    for (double s : {0.25, 0.5, 0.75}) {
        const FracOrder fs(s);
        for (double y : {0.5, 1.0, 5.0})
            for (Complex lam : {Complex(1.0), Complex(10.0), Complex(1.0, 5.0)}) {
                const double h = std::min(0.02 / std::sqrt(std::abs(lam)), y / 5.0);
                auto f = [&](double yy) { return i_s(yy, lam, fs); };
                auto stencil = [&](double hh) {
                    return (-f(y - 2 * hh) + 16.0 * f(y - hh) - 30.0 * f(y) +
                            16.0 * f(y + hh) - f(y + 2 * hh)) /
                           (12.0 * hh * hh);
                };
                const Complex d2 = (16.0 * stencil(h / 2) - stencil(h)) / 15.0;
                const Complex d1 = i_s_y_derivative(y, lam, fs);
                const Complex resid = lam * f(y) - (1.0 - 2.0 * s) / y * d1 - d2;
                worst_ode = std::max(worst_ode, std::abs(resid) / std::abs(lam));
            }
        for (double y : {0.3, 1.0, 4.0})
            for (Complex lam : {Complex(1.0), Complex(2.0, 3.0), Complex(0.5, -1.0)}) {
                const double h = 1e-5;
                const Complex fd = (i_s(y + h, lam, fs) - i_s(y - h, lam, fs)) / (2.0 * h);
                worst_deriv =
                    std::max(worst_deriv, rel_diff(fd, i_s_y_derivative(y, lam, fs)));
            }
    }
    c.passed = worst_spread < 1e-8 && worst_mod < 1e-12 && worst_ode < 1e-8 &&
               worst_deriv < 1e-6 && worst_norm < 1e-10;
    c.detail = "spread " + fmt(worst_spread) + ", |I|-1 " + fmt(worst_mod) + ", ode " +
               fmt(worst_ode) + ", deriv " + fmt(worst_deriv) + ", norm " +
               fmt(worst_norm);
    return c;
}

// ---- criterion 3: multiplier vs semigroup subordination --------------------

CriterionResult crit_routes(unsigned seed) {
    CriterionResult c{3, "route agreement: multiplier vs semigroup quadrature", false,
                      ""};
    double worst = 0.0;
    TimeGrid tg(16, 4.0);
    for (auto kind : {OperatorKind::interval_dirichlet, OperatorKind::interval_neumann,
                      OperatorKind::hermite}) {
        auto es = make_space(kind, 8, 64);
        std::mt19937 rng(seed + 11u);
        for (int trial = 0; trial < 20; ++trial) {
            SpectralField r = analyze(random_band_limited_field(tg, es, rng));
            for (double sv : {0.1, 0.5, 0.9}) {
                const SpectralField direct = apply_fractional(r, FracOrder(sv));
                const RouteResult via = fractional_via_semigroup(r, FracOrder(sv));
                worst = std::max(worst, (via.value.coef - direct.coef).norm() /
                                            direct.coef.norm());
            }
        }
    }
    c.passed = worst < 1e-6;
    c.detail = "20 fields x 3 operators x 3 s, max rel err " + fmt(worst) +
               " (tol 1e-6)";
    return c;
}

// ---- criterion 4: master-equation equivalence ------------------------------

CriterionResult crit_master(unsigned seed) {
    CriterionResult c{4, "master form equals the spectral bilinear form", false, ""};
    TimeGrid tg(32, 4.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 16, 64);
    std::mt19937 rng(seed + 47u);
    const SpaceTimeField u = random_band_limited_field(tg, es, rng);
    const SpaceTimeField v = random_band_limited_field(tg, es, rng);
    const SpectralField uh = analyze(u), vh = analyze(v);
    QuadratureSpec q;
    q.relative_tolerance = 1e-8;

    double worst = 0.0;
    bool bound_ok = true;
    for (double sv : {0.3, 0.7}) {
        Complex spectral = 0.0;
        for (int m = 0; m < tg.M; ++m)
            for (int k = 0; k < 16; ++k) {
                const Complex sym(es->lambda(k), tg.rho(m));
                spectral +=
                    std::pow(sym, sv) * uh.coef(m, k) * std::conj(vh.coef(m, k));
            }
        spectral *= tg.drho();
        const MasterFormResult r = master_form(u, v, FracOrder(sv), q);
        const double err = std::abs(r.value - spectral) / std::abs(spectral);
        worst = std::max(worst, err);
        if (std::abs(r.value - spectral) >
            std::max(10.0 * r.error_estimate, 1e-10 * std::abs(spectral)))
            bound_ok = false;
    }
    c.passed = worst < 1e-3 && bound_ok;
    c.detail = "K=16 M=32 interval_dirichlet, max rel err " + fmt(worst) +
               " (tol 1e-3), error bound " + (bound_ok ? "covers" : "VIOLATED");
    return c;
}

// ---- criterion 5: extension trace constants --------------------------------

CriterionResult crit_traces() {
    CriterionResult c{5, "trace constants from empirical y->0 limits", false, ""};
    auto es = make_space(OperatorKind::interval_dirichlet, 50, 256);
    double worst = 0.0;
    for (double sv : {0.25, 0.5, 0.75}) {
        const FracOrder s(sv);
        const double cq = quotient_trace_constant(s);
        const double cn = neumann_trace_constant(s);
        for (int k = 0; k < 50; ++k)
            for (double rho : {0.0, 1.7}) {
                const Complex sym(es->lambda(k), rho);
                const TraceLimits t = trace_limits(s, sym);
                const Complex syms = std::pow(sym, sv);
                worst = std::max({worst, rel_diff(t.quotient, cq * syms),
                                  rel_diff(t.neumann, cn * syms)});
            }
    }
    double worst_cross = 0.0;
    for (double sv : {0.05, 0.2, 0.5, 0.8, 0.95}) {
        const FracOrder s(sv);
        // |Gamma(-s)| = Gamma(1-s)/s, expressed through the two constants:
        // C_n = -2s C_q
        worst_cross = std::max(
            worst_cross,
            std::abs(neumann_trace_constant(s) + 2.0 * sv * quotient_trace_constant(s)) /
                std::abs(neumann_trace_constant(s)));
    }
    const double half_err =
        std::abs(neumann_trace_constant(FracOrder(0.5)) - 1.0);
    c.passed = worst < 1e-6 && worst_cross < 1e-10 && half_err < 1e-8;
    c.detail = "50 modes x 3 s x 2 rho, max rel err " + fmt(worst) +
               " (tol 1e-6); cross identity " + fmt(worst_cross) + "; s=1/2 " +
               fmt(half_err);
    return c;
}

// ---- criterion 6: extension PDE residual, contraction, energy --------------

CriterionResult crit_extension(unsigned seed) {
    CriterionResult c{6, "extension PDE residual, contraction, energy stability",
                      false, ""};
    TimeGrid tg(16, 4.0);
    auto es = make_space(OperatorKind::interval_dirichlet, 6, 32);
    std::mt19937 rng(seed + 53u);
    const SpectralField u = analyze(random_band_limited_field(tg, es, rng));
    const double base_norm = u.coef.norm();

    double worst_pde = 0.0, worst_contract = 0.0, worst_energy = 0.0;
    for (double sv : {0.2, 0.5, 0.8}) {
        const FracOrder s(sv);
        const ExtensionField ext = extend(u, s);
        worst_pde = std::max(worst_pde, pde_residual(ext).max_scaled);
        for (const auto& level : ext.levels)
            worst_contract = std::max(worst_contract, level.norm() - base_norm);
    }
    for (double sv : {0.3, 0.7}) {
        const FracOrder s(sv);
        YGrid fine;
        fine.y_min = 5e-4;
        fine.growth = std::sqrt(1.25);
        const double r1 = energy_norm(extend(u, s)) / hs_norm_sq(u, sv);
        const double r2 = energy_norm(extend(u, s, fine)) / hs_norm_sq(u, sv);
        worst_energy = std::max(worst_energy, std::abs(r1 - r2) / std::abs(r1));
    }
    c.passed = worst_pde < 1e-8 && worst_contract < 1e-12 && worst_energy < 0.01;
    c.detail = "pde " + fmt(worst_pde) + " (tol 1e-8); contraction excess " +
               fmt(worst_contract) + "; energy drift " + fmt(worst_energy) +
               " (tol 1e-2)";
    return c;
}

// ---- criterion 7: transference intertwining and independent spectra --------

CriterionResult crit_transference(unsigned seed) {
    CriterionResult c{7, "transference: intertwining + independent spectra", false, ""};
    TimeGrid tg(16, 4.0);
    double worst = 0.0;
    const auto maps = builtin_maps();
    for (const auto& map : maps) {
        const int N = map.source.kind == OperatorKind::hermite_shifted ? 400 : 256;
        auto src = std::make_shared<const EigenSystem>(build_eigensystem(map.source, 8, N));
        std::mt19937 rng(seed + 101u);
        for (double sv : {0.1, 0.5, 0.9})
            worst = std::max(worst, verify_intertwine(src, map, FracOrder(sv), tg, rng));
    }

    double worst_spec = 0.0;
    {
        const auto& map = find_map(maps, "hermite_to_ou");
        auto src =
            std::make_shared<const EigenSystem>(build_eigensystem(map.source, 16, 400));
        const EigenSystem tgt = transferred_eigensystem(*src, map);
        OperatorSpec ou;
        ou.kind = OperatorKind::generic_divergence;
        ou.x_lo = -10.0;
        ou.x_hi = 10.0;
        ou.a = [](double) { return 1.0; };
        ou.c = [](double) { return 0.0; };
        ou.eta = [](double x) { return std::exp(-x * x) / std::sqrt(kPi); };
        ou.ellipticity = 1.0;
        const EigenSystem indep = build_eigensystem(ou, 16, 256);
        for (int k = 0; k < 4; ++k)
            worst_spec = std::max(worst_spec, std::abs(indep.lambda(k) - tgt.lambda(k)));
    }
    {
        const auto& map = find_map(maps, "bessel_to_divergence");
        auto src =
            std::make_shared<const EigenSystem>(build_eigensystem(map.source, 16, 256));
        const EigenSystem tgt = transferred_eigensystem(*src, map);
        OperatorSpec div;
        div.kind = OperatorKind::generic_divergence;
        div.x_lo = 0.0;
        div.x_hi = src->spec.x_hi == 0.0 ? 20.0 : src->spec.x_hi;
        div.a = [](double) { return 1.0; };
        div.c = [](double) { return 0.0; };
        div.eta = [](double x) { return std::pow(x, 6.0); };
        div.ellipticity = 1.0;
        const EigenSystem indep = build_eigensystem(div, 16, 256);
        for (int k = 0; k < 4; ++k)
            worst_spec = std::max(worst_spec, std::abs(indep.lambda(k) - tgt.lambda(k)));
    }
    c.passed = worst < 1e-9 && worst_spec < 1e-6;
    c.detail = "7 maps x 3 s, max intertwine " + fmt(worst) +
               " (tol 1e-9); spectra dev " + fmt(worst_spec) + " (tol 1e-6)";
    return c;
}

// ---- criterion 8: Harnack ensembles ----------------------------------------

struct EnsembleRun {
    std::string name;
    EnsembleSummary base, refined;
    const EnsembleSummary* transferred = nullptr;  // optional, hermite only
};

void append_trial_rows(std::string& csv, const std::string& experiment,
                       unsigned seed, double s, const std::string& op,
                       const std::vector<HarnackReport>& trials) {
    char buf[512];
    for (size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        std::snprintf(buf, sizeof buf,
                      "%s,%zu,%u,%.12e,%s,%.12e,%.12e,%.12e,%.12e,%.12e\n",
                      experiment.c_str(), i, seed, s, op.c_str(), t.ratio,
                      t.min_interior, t.holder_alpha, t.holder_seminorm, t.residual);
        csv += buf;
    }
}

void append_boundary_rows(std::string& csv, const std::string& experiment,
                          unsigned seed, double s, const std::string& op,
                          const std::vector<BoundaryReport>& trials) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    char buf[512];
    for (size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        std::snprintf(buf, sizeof buf,
                      "%s,%zu,%u,%.12e,%s,%.12e,%.12e,%.12e,%.12e,%.12e\n",
                      experiment.c_str(), i, seed, s, op.c_str(), t.ratio, nan, nan,
                      nan, t.residual);
        csv += buf;
    }
}

struct HarnackSuite {
    std::string csv;
    double worst_band = 1.0;          // most extreme base/refined ratio quotient
    int infinite_trials = 0;          // non-degenerate trials without finite ratio
    int smooth_violations = 0;
    double transfer_dev = 0.0;        // max |base - transferred| per-trial ratio
    double max_residual = 0.0;
    json manifest_runs = json::array();
};

void track_band(HarnackSuite& s, double band) {
    if (std::max(band, 1.0 / band) > std::max(s.worst_band, 1.0 / s.worst_band))
        s.worst_band = band;
}

void track_summary(HarnackSuite& s, const EnsembleSummary& e) {
    for (const auto& t : e.trials)
        if (!t.degenerate && !std::isfinite(t.ratio)) ++s.infinite_trials;
    s.smooth_violations += e.smooth_violation_trials;
    s.max_residual = std::max(s.max_residual, e.max_residual);
}

HarnackSuite run_harnack_suite(unsigned seed) {
    HarnackSuite suite;
    suite.csv =
        "experiment,trial,seed,s,operator,ratio,min_interior,alpha_fit,seminorm,"
        "residual\n";

    for (double s : {0.25, 0.5, 0.75}) {
        EnsembleConfig cfg;
        cfg.op.kind = OperatorKind::interval_dirichlet;
        cfg.K = 16;
        cfg.N = 64;
        cfg.M = 32;
        cfg.s = s;
        cfg.center = kPi / 2.0;
        cfg.r = 0.35;
        cfg.trials = 100;
        cfg.seed = seed;
        const EnsembleSummary base = harnack_experiment(cfg);
        EnsembleConfig fine = cfg;
        fine.K = 32;
        fine.N = 128;
        fine.M = 64;
        const EnsembleSummary refined = harnack_experiment(fine);

        char name[64];
        std::snprintf(name, sizeof name, "harnack_interval_s%.2f", s);
        append_trial_rows(suite.csv, std::string(name) + "_base", seed, s,
                          "interval_dirichlet", base.trials);
        append_trial_rows(suite.csv, std::string(name) + "_refined", seed, s,
                          "interval_dirichlet", refined.trials);
        track_summary(suite, base);
        track_summary(suite, refined);
        track_band(suite, base.max_ratio / refined.max_ratio);
        suite.manifest_runs.push_back(
            {{"experiment", name},
             {"operator", "interval_dirichlet"},
             {"s", s},
             {"base", {{"K", 16}, {"N", 64}, {"M", 32}, {"max_ratio", base.max_ratio}}},
             {"refined",
              {{"K", 32}, {"N", 128}, {"M", 64}, {"max_ratio", refined.max_ratio}}},
             {"trials", 100}});
    }

    {
        EnsembleConfig cfg;
        cfg.op.kind = OperatorKind::hermite_shifted;
        cfg.K = 16;
        cfg.N = 64;
        cfg.M = 32;
        cfg.s = 0.5;
        cfg.center = 0.0;
        cfg.r = 1.2;
        cfg.trials = 100;
        cfg.seed = seed;
        const EnsembleSummary base = harnack_experiment(cfg);
        EnsembleConfig fine = cfg;
        fine.K = 32;
        fine.N = 128;
        fine.M = 64;
        const EnsembleSummary refined = harnack_experiment(fine);
        EnsembleConfig tr = cfg;
        tr.transfer = find_map(builtin_maps(), "hermite_to_ou");
        const EnsembleSummary transferred = harnack_experiment(tr);

        append_trial_rows(suite.csv, "harnack_hermite_base", seed, 0.5,
                          "hermite_shifted", base.trials);
        append_trial_rows(suite.csv, "harnack_hermite_refined", seed, 0.5,
                          "hermite_shifted", refined.trials);
        append_trial_rows(suite.csv, "harnack_hermite_to_ou", seed, 0.5,
                          "ornstein_uhlenbeck", transferred.trials);
        track_summary(suite, base);
        track_summary(suite, refined);
        track_summary(suite, transferred);
        track_band(suite, base.max_ratio / refined.max_ratio);
        for (size_t i = 0; i < base.trials.size(); ++i) {
            const double a = base.trials[i].ratio, b = transferred.trials[i].ratio;
            if (std::isfinite(a) && std::isfinite(b))
                suite.transfer_dev = std::max(
                    suite.transfer_dev, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
        suite.manifest_runs.push_back(
            {{"experiment", "harnack_hermite"},
             {"operator", "hermite_shifted"},
             {"s", 0.5},
             {"base", {{"K", 16}, {"N", 64}, {"M", 32}, {"max_ratio", base.max_ratio}}},
             {"refined",
              {{"K", 32}, {"N", 128}, {"M", 64}, {"max_ratio", refined.max_ratio}}},
             {"transfer", "hermite_to_ou"},
             {"transfer_ratio_dev", suite.transfer_dev},
             {"trials", 100}});
    }

    {
        BoundaryConfig cfg;
        cfg.op.kind = OperatorKind::interval_dirichlet;
        cfg.K = 16;
        cfg.N = 64;
        cfg.M = 64;
        cfg.T = 8.0;
        cfg.s = 0.5;
        cfg.x_tilde = 1.0;
        cfg.r = 0.3;
        cfg.t0 = 1.5;
        cfg.trials = 100;
        cfg.seed = seed + 7u;
        const BoundarySummary base = boundary_harnack_experiment(cfg);
        BoundaryConfig fine = cfg;  // spatial refinement; M capped by the budget
        fine.K = 32;
        fine.N = 128;
        fine.data_K = cfg.K;  // same continuum data at both resolutions
        const BoundarySummary refined = boundary_harnack_experiment(fine);

        append_boundary_rows(suite.csv, "boundary_harnack_base", cfg.seed, 0.5,
                             "interval_dirichlet", base.trials);
        append_boundary_rows(suite.csv, "boundary_harnack_refined", cfg.seed, 0.5,
                             "interval_dirichlet", refined.trials);
        for (const auto& ens : {base, refined}) {
            for (const auto& t : ens.trials)
                if (!t.degenerate && !std::isfinite(t.ratio)) ++suite.infinite_trials;
            suite.max_residual = std::max(suite.max_residual, ens.max_residual);
        }
        track_band(suite, base.max_ratio / refined.max_ratio);
        json trend = json::array();
        for (const auto& [t0, r] : base.t0_trend)
            trend.push_back({{"t0", t0}, {"max_ratio", r}});
        suite.manifest_runs.push_back(
            {{"experiment", "boundary_harnack"},
             {"operator", "interval_dirichlet"},
             {"s", 0.5},
             {"base", {{"K", 16}, {"N", 64}, {"M", 64}, {"max_ratio", base.max_ratio}}},
             {"refined",
              {{"K", 32}, {"N", 128}, {"M", 64}, {"max_ratio", refined.max_ratio}}},
             {"t0_trend", trend},
             {"trials", 100}});
    }
    return suite;
}

}  // namespace

AcceptanceReport run_acceptance(unsigned seed) {
    AcceptanceReport rep;
    rep.criteria.push_back(crit_branch());
    rep.criteria.push_back(crit_kernel_suite());
    rep.criteria.push_back(crit_routes(seed));
    rep.criteria.push_back(crit_master(seed));
    rep.criteria.push_back(crit_traces());
    rep.criteria.push_back(crit_extension(seed));
    rep.criteria.push_back(crit_transference(seed));

    const HarnackSuite suite = run_harnack_suite(seed);
    {
        CriterionResult c{8, "Harnack ensembles: finite, refinement-stable, positive",
                          false, ""};
        const double band = std::max(suite.worst_band, 1.0 / suite.worst_band);
        c.passed = suite.infinite_trials == 0 && band < 2.0 &&
                   suite.smooth_violations == 0 && suite.transfer_dev < 1e-8;
        c.detail = "non-finite ratios " + std::to_string(suite.infinite_trials) +
                   "; worst refinement band " + fmt(band) +
                   " (tol 2); smooth violations " +
                   std::to_string(suite.smooth_violations) + "; transfer dev " +
                   fmt(suite.transfer_dev) + " (tol 1e-8)";
        rep.criteria.push_back(c);
    }

    {
        CriterionResult c{9, "reproducibility: byte-identical trial CSV", false, ""};
        const HarnackSuite second = run_harnack_suite(seed);
        c.passed = suite.csv == second.csv;
        c.detail = c.passed ? "two in-process runs agree byte-for-byte"
                            : "CSV renderings differ";
        rep.criteria.push_back(c);
    }
    rep.results_csv = suite.csv;

    json manifest;
    manifest["schema"] = "fracpar-acceptance/1";
    manifest["seed"] = seed;
    manifest["criteria"] = json::array();
    for (const auto& c : rep.criteria)
        manifest["criteria"].push_back({{"id", c.id},
                                        {"name", c.name},
                                        {"passed", c.passed},
                                        {"detail", c.detail}});
    manifest["ensembles"] = suite.manifest_runs;
    manifest["max_residual"] = suite.max_residual;
    manifest["all_passed"] = rep.all_passed();
    rep.manifest_json = manifest.dump(2) + "\n";
    return rep;
}

}  // namespace fracpar
