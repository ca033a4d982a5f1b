#include "fracpar/fracop.hpp"

#include <cmath>

#include "fracpar/quadrature.hpp"
#include "fracpar/specfun.hpp"

namespace fracpar {

namespace {

// Modes with lambda below this are treated as a genuine zero eigenvalue.
constexpr double kLambdaZero = 1e-12;

void check_origin_mass(const SpectralField& u) {
    const double cmax = u.coef.cwiseAbs().maxCoeff();
    const int m0 = u.time.origin_index();
    for (int k = 0; k < u.space->modes(); ++k)
        if (u.space->lambda(k) <= kLambdaZero &&
            std::abs(u.coef(m0, k)) > 1e-12 * std::max(cmax, 1e-300))
            throw std::domain_error(
                "apply_fractional: field carries mass on the (rho,lambda)=(0,0) mode; "
                "project it out first (zero-mean convention)");
}

}  // namespace

SpectralField apply_fractional(const SpectralField& u, const FracOrder& s) {
    check_origin_mass(u);
    SpectralField out(u.time, u.space);
    out.s_applied = u.s_applied;
    out.s_applied.push_back(s.value());
    for (int m = 0; m < u.time.M; ++m) {
        const double rho = u.time.rho(m);
        for (int k = 0; k < u.space->modes(); ++k) {
            const Complex sym(u.space->lambda(k), rho);
            out.coef(m, k) =
                sym == Complex(0.0) ? Complex(0.0) : std::pow(sym, s.value()) * u.coef(m, k);
        }
    }
    return out;
}

SpaceTimeField apply_fractional(const SpaceTimeField& u, const FracOrder& s) {
    return synthesize(apply_fractional(analyze(u), s));
}

SpectralField apply_semigroup(const SpectralField& u, double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("apply_semigroup: tau must be >= 0");
    SpectralField out(u.time, u.space);
    out.s_applied = u.s_applied;
    for (int m = 0; m < u.time.M; ++m) {
        const double rho = u.time.rho(m);
        for (int k = 0; k < u.space->modes(); ++k)
            out.coef(m, k) =
                std::exp(-tau * Complex(u.space->lambda(k), rho)) * u.coef(m, k);
    }
    return out;
}

SpaceTimeField apply_semigroup(const SpaceTimeField& u, double tau) {
    return synthesize(apply_semigroup(analyze(u), tau));
}

double hs_norm_sq(const SpectralField& u, double s) {
    if (s < 0.0) throw std::domain_error("hs_norm_sq: s must be >= 0");
    double sum = 0.0;
    for (int m = 0; m < u.time.M; ++m) {
        const double rho = u.time.rho(m);
        for (int k = 0; k < u.space->modes(); ++k) {
            const double a = std::abs(Complex(u.space->lambda(k), rho));
            if (a == 0.0 && s > 0.0) continue;
            sum += std::pow(a, s) * std::norm(u.coef(m, k));
        }
    }
    return u.time.drho() * sum;
}

RouteResult fractional_via_semigroup(const SpectralField& u, const FracOrder& s,
                                     const QuadratureSpec& q) {
    q.validate();
    const int M = u.time.M;
    const int K = u.space->modes();
    const double sv = s.value();
    const double oms = 1.0 - sv;
    const double gamma = specfun::gamma_fn(-sv);  // negative

    RouteResult r{SpectralField(u.time, u.space), 0.0};
    r.value.s_applied = u.s_applied;
    r.value.s_applied.push_back(sv);

    const double cmax = u.coef.cwiseAbs().maxCoeff();
    if (cmax == 0.0) return r;

    double lmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        if (u.coef.col(k).cwiseAbs().maxCoeff() <= 1e-14 * cmax) continue;
        if (u.space->lambda(k) <= kLambdaZero)
            throw std::domain_error(
                "fractional_via_semigroup: excited mode with lambda = 0; the tail "
                "integrand is undamped, use the multiplier route or drop the mode");
        lmin = std::min(lmin, u.space->lambda(k));
    }

    Eigen::MatrixXcd sym(M, K);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
            sym(m, k) = Complex(u.space->lambda(k), u.time.rho(m));

    const double tau0 = q.split_point / lmin;

    GKOptions opt;
    opt.rel_tol = q.relative_tolerance;
    opt.initial_panels = std::max(2, q.nodes_inner / 8);
    // tau = v^{1/(1-s)} removes the tau^{-1-s} singularity exactly.
    auto inner_f = [&](double v) -> Eigen::MatrixXcd {
        const double tau = std::pow(v, 1.0 / oms);
        Eigen::MatrixXcd G(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                G(m, k) = specfun::expm1c(-tau * sym(m, k)) * u.coef(m, k);
        return G / (tau * oms);
    };
    auto inner = adaptive_gk<Eigen::MatrixXcd>(inner_f, 0.0, std::pow(tau0, oms), opt);

    // Beyond tau0 the "-u" part integrates in closed form; only the damped
    // semigroup part needs quadrature, and it is dead past 50/lambda_min.
    Eigen::MatrixXcd analytic = -u.coef * std::pow(tau0, -sv) / sv;

    GKOptions opt2 = opt;
    opt2.initial_panels = std::max(2, q.nodes_outer / 4);
    auto outer_f = [&](double t) -> Eigen::MatrixXcd {
        const double tau = std::exp(t);
        Eigen::MatrixXcd G(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                G(m, k) = std::exp(-tau * sym(m, k)) * u.coef(m, k);
        return G * std::pow(tau, -sv);
    };
    const double tau_max = std::max(1.5 * tau0, 50.0 / lmin);
    auto outer =
        adaptive_gk<Eigen::MatrixXcd>(outer_f, std::log(tau0), std::log(tau_max), opt2);

    r.value.coef = (inner.value + outer.value + analytic) / gamma;
    r.error_estimate = (inner.error + outer.error) / std::abs(gamma);
    return r;
}

MasterFormResult master_form(const SpaceTimeField& u, const SpaceTimeField& v,
                             const FracOrder& s, const QuadratureSpec& q) {
    q.validate();
    if (!(u.time == v.time) || u.space != v.space)
        throw std::domain_error("master_form: fields must share the discretization");
    const auto& es = *u.space;
    if (es.zero_mean_mode)
        throw std::domain_error(
            "master_form: requires decaying semigroup mass (Dirichlet-type operator); "
            "the history term is otherwise undamped");
    if (es.lambda(0) <= kLambdaZero)
        throw std::domain_error("master_form: lambda_min must be positive");
    const double scale = u.values.cwiseAbs().maxCoeff() + v.values.cwiseAbs().maxCoeff();
    if (u.max_imag() + v.max_imag() > 1e-10 * std::max(scale, 1e-300))
        throw std::domain_error("master_form: real-valued fields required");

    const int M = u.time.M;
    const int N = es.grid_size();
    const int K = es.modes();
    const double dt = u.time.dt();
    const double drho = u.time.drho();
    const double sv = s.value();
    const double oms = 1.0 - sv;
    const double g = std::abs(specfun::gamma_fn(-sv));

    const Eigen::MatrixXd U = u.real_values();
    const Eigen::MatrixXd V = v.real_values();
    const SpectralField uh = analyze(u);
    const SpectralField vh = analyze(v);
    const Eigen::VectorXd massk = es.phi.transpose() * es.w;  // <phi_k, 1>

    double uv_inner = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) uv_inner += dt * es.w(j) * U(i, j) * V(i, j);

    // The three integrand terms at fixed tau. Expanding the double difference
    // against the symmetric kernel W_tau reduces everything to the semigroup
    // mass m1 = e^{-tau L}1, the shifted field u_tau and the pairing
    // B = <e^{-tau L} u_tau, v>:
    //   kernel term  = (A1 - B) / (g tau^{1+s})       A1 = <m1 u_tau, v>
    //   mass term    = (<u,v> - A2) / (g tau^{1+s})   A2 = <m1 u, v>
    //   history term = -(A1 - A2) / (g tau^{1+s})
    // Used on the tail (tau > tau0) only, where each term converges; the
    // undamped <u,v> piece of the mass term is integrated there in closed
    // form (hence include_uv = false).
    auto terms_at = [&](double tau, bool include_uv) -> Eigen::Vector3d {
        SpectralField shifted(u.time, u.space);
        for (int m = 0; m < M; ++m) {
            const Complex phase = std::exp(Complex(0.0, -u.time.rho(m) * tau));
            for (int k = 0; k < K; ++k) shifted.coef(m, k) = phase * uh.coef(m, k);
        }
        const Eigen::VectorXd dk = (-tau * es.lambda.array()).exp();
        double B = 0.0;
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                B += dk(k) * (shifted.coef(m, k) * std::conj(vh.coef(m, k))).real();
        B *= drho;
        const Eigen::MatrixXd Ut = synthesize(shifted).values.real();
        const Eigen::VectorXd m1 = es.phi * (dk.array() * massk.array()).matrix();
        double A1 = 0.0, A2 = 0.0;
        for (int j = 0; j < N; ++j) {
            const double wj = dt * es.w(j) * m1(j);
            for (int i = 0; i < M; ++i) {
                A1 += wj * Ut(i, j) * V(i, j);
                A2 += wj * U(i, j) * V(i, j);
            }
        }
        const double pref = 1.0 / (g * std::pow(tau, 1.0 + sv));
        const double mass = ((include_uv ? uv_inner : 0.0) - A2) * pref;
        return Eigen::Vector3d((A1 - B) * pref, mass, -(A1 - A2) * pref);
    };

    const double tau0 = q.split_point / es.lambda(0);

    GKOptions opt;
    opt.rel_tol = q.relative_tolerance;
    opt.initial_panels = std::max(2, q.nodes_inner / 8);
    // Singular head: the summed integrand <u - e^{-tau H}u, v>/(g tau^{1+s}),
    // cancellation-free via expm1 of the joint symbol, with the usual
    // tau = v^{1/(1-s)} substitution.
    auto head_f = [&](double vv) -> double {
        const double tau = std::pow(vv, 1.0 / oms);
        Complex sum = 0.0;
        for (int m = 0; m < M; ++m) {
            const Complex sym_t(0.0, u.time.rho(m));
            for (int k = 0; k < K; ++k)
                sum -= specfun::expm1c(-tau * (sym_t + es.lambda(k))) * uh.coef(m, k) *
                       std::conj(vh.coef(m, k));
        }
        return drho * sum.real() / (g * tau * oms);
    };
    auto inner = adaptive_gk<double>(head_f, 0.0, std::pow(tau0, oms), opt);

    GKOptions opt2 = opt;
    opt2.initial_panels = std::max(2, q.nodes_outer / 4);
    auto outer_f = [&](double t) -> Eigen::Vector3d {
        const double tau = std::exp(t);
        return terms_at(tau, false) * tau;
    };
    const double tau_max = std::max(1.5 * tau0, 50.0 / es.lambda(0));
    auto outer =
        adaptive_gk<Eigen::Vector3d>(outer_f, std::log(tau0), std::log(tau_max), opt2);

    Eigen::Vector3d tail = outer.value;
    tail(1) += uv_inner * std::pow(tau0, -sv) / (sv * g);

    MasterFormResult r;
    r.term_head = inner.value;
    r.term_kernel = tail(0);
    r.term_mass = tail(1);
    r.term_history = tail(2);
    r.value = inner.value + tail.sum();
    r.error_estimate = inner.error + outer.error;
    return r;
}

MasterApplyResult fractional_via_master(const SpaceTimeField& u, const FracOrder& s,
                                        const QuadratureSpec& q) {
    q.validate();
    const auto& es = *u.space;
    const int M = u.time.M;
    const int K = es.modes();
    const double sv = s.value();
    const double oms = 1.0 - sv;
    const double gamma = specfun::gamma_fn(-sv);  // negative

    const SpectralField uh = analyze(u);
    const SpaceTimeField pu = synthesize(uh);  // resolved-span projection

    MasterApplyResult r{SpaceTimeField(u.time, u.space), 0.0};
    const double cmax = uh.coef.cwiseAbs().maxCoeff();
    if (cmax == 0.0) return r;

    double lmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        if (uh.coef.col(k).cwiseAbs().maxCoeff() <= 1e-14 * cmax) continue;
        if (es.lambda(k) <= kLambdaZero)
            throw std::domain_error(
                "fractional_via_master: excited mode with lambda = 0; the tail "
                "integrand is undamped, use the multiplier route or drop the mode");
        lmin = std::min(lmin, es.lambda(k));
    }

    const double tau0 = q.split_point / lmin;

    // Singular head, spectral and cancellation-free (tau = v^{1/(1-s)}).
    GKOptions opt;
    opt.rel_tol = q.relative_tolerance;
    opt.initial_panels = std::max(2, q.nodes_inner / 8);
    auto inner_f = [&](double v) -> Eigen::MatrixXcd {
        const double tau = std::pow(v, 1.0 / oms);
        Eigen::MatrixXcd G(M, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                G(m, k) = specfun::expm1c(-tau * Complex(es.lambda(k), u.time.rho(m))) *
                          uh.coef(m, k);
        return G / (tau * oms);
    };
    auto inner = adaptive_gk<Eigen::MatrixXcd>(inner_f, 0.0, std::pow(tau0, oms), opt);
    SpectralField head_c(u.time, u.space);
    head_c.coef = inner.value;
    const Eigen::MatrixXcd head = synthesize(head_c).values;

    // Physical tail: That holds the time-DFT of the sample rows; the backward
    // shift is a pure phase there, and e^{-tau L} acts by W_tau against the
    // spatial quadrature weights.
    Eigen::MatrixXcd Ft(M, M);
    for (int m = 0; m < M; ++m)
        for (int i = 0; i < M; ++i)
            Ft(m, i) = std::exp(Complex(0.0, -u.time.rho(m) * u.time.t(i)));
    const Eigen::MatrixXcd That = Ft * pu.values;

    GKOptions opt2 = opt;
    opt2.initial_panels = std::max(2, q.nodes_outer / 4);
    auto tail_f = [&](double t) -> Eigen::MatrixXcd {
        const double tau = std::exp(t);
        Eigen::VectorXcd phase(M);
        for (int m = 0; m < M; ++m)
            phase(m) = std::exp(Complex(0.0, -u.time.rho(m) * tau));
        const Eigen::MatrixXcd shifted =
            Ft.adjoint() * (phase.asDiagonal() * That) / double(M);
        const Eigen::MatrixXd W = heat_kernel(es, tau);
        return shifted * (es.w.asDiagonal() * W) * std::pow(tau, -sv);
    };
    const double tau_max = std::max(1.5 * tau0, 50.0 / lmin);
    auto outer =
        adaptive_gk<Eigen::MatrixXcd>(tail_f, std::log(tau0), std::log(tau_max), opt2);

    // Beyond tau0 the "-u" part integrates in closed form on the projection.
    const Eigen::MatrixXcd analytic = -pu.values * std::pow(tau0, -sv) / sv;

    r.value.values = (head + outer.value + analytic) / gamma;
    r.error_estimate = (inner.error + outer.error) / std::abs(gamma);
    return r;
}

SpectralField marchaud_derivative(const SpectralField& u, const FracOrder& s,
                                  const QuadratureSpec& q) {
    q.validate();
    const double sv = s.value();
    const double oms = 1.0 - sv;
    const double g = std::abs(specfun::gamma_fn(-sv));

    SpectralField out(u.time, u.space);
    out.s_applied = u.s_applied;

    GKOptions opt;
    opt.rel_tol = q.relative_tolerance;
    opt.initial_panels = std::max(2, q.nodes_inner / 8);

    for (int m = 0; m < u.time.M; ++m) {
        const double rho = u.time.rho(m);
        Complex mu = 0.0;
        if (rho != 0.0) {
            const double ar = std::abs(rho);
            const double tau0 = q.split_point / ar;
            // singular head, tau = v^{1/(1-s)}
            auto inner_f = [&](double vv) -> Complex {
                const double tau = std::pow(vv, 1.0 / oms);
                return -specfun::expm1c(Complex(0.0, -rho * tau)) / (tau * oms);
            };
            auto inner = adaptive_gk<Complex>(inner_f, 0.0, std::pow(tau0, oms), opt);
            // oscillatory tail int_{tau0}^inf e^{-i rho tau} tau^{-1-s} dtau,
            // rotated onto the descending contour tau = tau0 - i sign(rho) r
            const double sig = rho > 0.0 ? 1.0 : -1.0;
            const Complex pre =
                -Complex(0.0, sig) * std::exp(Complex(0.0, -rho * tau0));
            auto tail_f = [&](double r) -> Complex {
                return std::exp(-ar * r) *
                       std::pow(Complex(tau0, -sig * r), -1.0 - sv);
            };
            auto tail = adaptive_gk<Complex>(tail_f, 0.0, 50.0 / ar, opt);
            mu = (inner.value + std::pow(tau0, -sv) / sv - pre * tail.value) / g;
        }
        out.coef.row(m) = u.coef.row(m) * mu;
    }
    return out;
}

}  // namespace fracpar
