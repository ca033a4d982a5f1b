#include "fracpar/extension.hpp"

#include <cmath>

#include "fracpar/quadrature.hpp"
#include "fracpar/specfun.hpp"

namespace fracpar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLambdaZero = 1e-12;

double min_excited_lambda(const SpectralField& u, const char* who) {
    const double cmax = u.coef.cwiseAbs().maxCoeff();
    double lmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < u.space->modes(); ++k) {
        if (cmax > 0.0 && u.coef.col(k).cwiseAbs().maxCoeff() <= 1e-14 * cmax) continue;
        if (u.space->lambda(k) <= kLambdaZero)
            throw std::domain_error(std::string(who) +
                                    ": excited mode with lambda = 0; tail undamped");
        lmin = std::min(lmin, u.space->lambda(k));
    }
    return lmin;
}

// Cancellation-free small-y evaluation of the trace quotients via the
// ascending series of K_s. With z^2 = y^2 sym and
//   I_s = A(z^2) + (y^2 sym)^s B(z^2),   A, B analytic, A(0) = 1,
// both q = (I_s - 1)/y^{2s} and n = -y^{1-2s} dI_s/dy follow termwise
// without ever forming I_s - 1 by subtraction.
struct SeriesQuotients {
    Complex q;
    Complex n;
};

SeriesQuotients series_quotients(double y, Complex sym, double s) {
    const double P =
        std::pow(2.0, 1.0 - s) * kPi / (2.0 * std::sin(kPi * s) * std::tgamma(s));
    const Complex z2 = y * y * sym;
    const Complex syms = std::pow(sym, s);

    // B(z^2) and B'(z^2)
    Complex B = 0.0, Bp = 0.0;
    {
        const double c0 = -P * std::pow(2.0, -s);
        Complex pw = 1.0;  // (z2/4)^j
        double fact = 1.0;
        for (int j = 0; j < 48; ++j) {
            const Complex bj = c0 * pw / (fact * std::tgamma(j + 1.0 + s));
            B += bj;
            if (std::abs(bj) < 1e-18 * std::abs(B)) break;
            pw *= z2 / 4.0;
            fact *= j + 1.0;
        }
    }
    {
        // B' = sum_{j>=1} c0 (1/4)(z2/4)^{j-1} / ((j-1)! Gamma(j+1+s))
        const double c0 = -P * std::pow(2.0, -s);
        Complex pw = 1.0;   // (z2/4)^{j-1}
        double fact = 1.0;  // (j-1)!
        for (int j = 1; j < 48; ++j) {
            const Complex t = c0 * 0.25 * pw / (fact * std::tgamma(j + 1.0 + s));
            Bp += t;
            if (std::abs(t) < 1e-18 * std::max(std::abs(Bp), 1e-280)) break;
            pw *= z2 / 4.0;
            fact *= j;
        }
    }

    // analytic-part sums: sum_{j>=1} P 2^s (sym/4)^j y^{2j-2s} / (j! G(j+1-s))
    Complex qa = 0.0, na = 0.0;
    {
        const double c0 = P * std::pow(2.0, s);
        Complex symp = sym / 4.0;  // (sym/4)^j
        double fact = 1.0;
        for (int j = 1; j < 48; ++j) {
            fact *= j;
            const Complex t =
                c0 * symp * std::pow(y, 2.0 * j - 2.0 * s) / (fact * std::tgamma(j + 1.0 - s));
            qa += t;
            na += 2.0 * j * t;
            if (std::abs(t) < 1e-18 * std::max(std::abs(qa), 1e-280)) break;
            symp *= sym / 4.0;
        }
    }

    SeriesQuotients r;
    r.q = qa + syms * B;
    r.n = -(na + syms * (2.0 * s * B + 2.0 * y * y * sym * Bp));
    return r;
}

// Richardson elimination of a known exponent ladder from samples at
// y_i = y0 / r^i.
template <class F>
Complex richardson_limit(F&& f, double y0, double r, const std::vector<double>& exps) {
    std::vector<Complex> T(exps.size() + 1);
    double y = y0;
    for (auto& t : T) {
        t = f(y);
        y /= r;
    }
    for (double e : exps) {
        const double rho = std::pow(r, -e);
        for (std::size_t i = 0; i + 1 < T.size(); ++i) T[i] = (T[i + 1] - rho * T[i]) / (1.0 - rho);
        T.pop_back();
    }
    return T[0];
}

Eigen::MatrixXcd symbol_matrix(const TimeGrid& tg, const EigenSystem& es) {
    Eigen::MatrixXcd sym(tg.M, es.modes());
    for (int m = 0; m < tg.M; ++m)
        for (int k = 0; k < es.modes(); ++k) sym(m, k) = Complex(es.lambda(k), tg.rho(m));
    return sym;
}

}  // namespace

Eigen::VectorXd YGrid::nodes() const {
    validate();
    std::vector<double> v;
    for (double y = y_min; y <= y_max * (1.0 + 1e-12); y *= growth) v.push_back(y);
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<int>(v.size()));
}

ExtensionField extend(const SpectralField& u, const FracOrder& s, const YGrid& grid) {
    ExtensionField ext(u.time, u.space, s);
    ext.y = grid.nodes();
    ext.base = u.coef;
    const Eigen::MatrixXcd sym = symbol_matrix(u.time, *u.space);
    ext.levels.reserve(ext.y.size());
    for (int l = 0; l < ext.y.size(); ++l) {
        Eigen::MatrixXcd lvl(u.time.M, u.space->modes());
        for (int m = 0; m < u.time.M; ++m)
            for (int k = 0; k < u.space->modes(); ++k)
                lvl(m, k) = u.coef(m, k) == Complex(0.0)
                                ? Complex(0.0)
                                : specfun::i_s(ext.y(l), sym(m, k), s) * u.coef(m, k);
        ext.levels.push_back(std::move(lvl));
    }
    return ext;
}

ExtensionField extend_quadrature(const SpectralField& u, const FracOrder& s,
                                 const YGrid& grid, const QuadratureSpec& q) {
    q.validate();
    const double lmin = min_excited_lambda(u, "extend_quadrature");
    const double sv = s.value();
    const int M = u.time.M;
    const int K = u.space->modes();
    const Eigen::MatrixXcd sym = symbol_matrix(u.time, *u.space);

    ExtensionField ext(u.time, u.space, s);
    ext.y = grid.nodes();
    ext.base = u.coef;
    ext.levels.reserve(ext.y.size());

    GKOptions opt;
    opt.rel_tol = q.relative_tolerance;
    opt.initial_panels = std::max(4, q.nodes_outer / 4);

    const double pref_den = std::pow(4.0, sv) * specfun::gamma_fn(sv);
    for (int l = 0; l < ext.y.size(); ++l) {
        const double y = ext.y(l);
        const double tau_a = y * y / 240.0;  // e^{-y^2/(4 tau)} < e^{-60} below
        const double tau_b = 50.0 / (std::isfinite(lmin) ? lmin : 1.0);
        Eigen::MatrixXcd lvl = Eigen::MatrixXcd::Zero(M, K);
        if (tau_a < tau_b && u.coef.cwiseAbs().maxCoeff() > 0.0) {
            auto f = [&](double t) -> Eigen::MatrixXcd {
                const double tau = std::exp(t);
                const double gauss = std::exp(-y * y / (4.0 * tau));
                Eigen::MatrixXcd G(M, K);
                for (int m = 0; m < M; ++m)
                    for (int k = 0; k < K; ++k)
                        G(m, k) = gauss * std::exp(-tau * sym(m, k)) * u.coef(m, k);
                return G * std::pow(tau, -sv);
            };
            auto r = adaptive_gk<Eigen::MatrixXcd>(f, std::log(tau_a), std::log(tau_b), opt);
            lvl = r.value * (std::pow(y, 2.0 * sv) / pref_den);
        }
        ext.levels.push_back(std::move(lvl));
    }
    return ext;
}

TraceLimits trace_limits(const FracOrder& s, Complex sym) {
    if (sym == Complex(0.0))
        throw std::domain_error("trace_limits: symbol must be nonzero");
    const double sv = s.value();
    const double y0 = std::sqrt(1e-2 / std::abs(sym));
    const double r = 4.0;
    const std::vector<double> exps = {2.0 - 2.0 * sv, 2.0, 4.0 - 2.0 * sv, 4.0,
                                      6.0 - 2.0 * sv};
    TraceLimits t;
    t.quotient = richardson_limit(
        [&](double y) { return series_quotients(y, sym, sv).q; }, y0, r, exps);
    t.neumann = richardson_limit(
        [&](double y) { return series_quotients(y, sym, sv).n; }, y0, r, exps);
    return t;
}

namespace {

SpectralField trace_field(const ExtensionField& ext, bool neumann) {
    SpectralField out(ext.time, ext.space);
    const double cmax = ext.base.cwiseAbs().maxCoeff();
    for (int m = 0; m < ext.time.M; ++m)
        for (int k = 0; k < ext.space->modes(); ++k) {
            const Complex c = ext.base(m, k);
            if (std::abs(c) <= 1e-300 * std::max(cmax, 1.0)) continue;
            const Complex sym(ext.space->lambda(k), ext.time.rho(m));
            const TraceLimits t = trace_limits(ext.s, sym);
            out.coef(m, k) = (neumann ? t.neumann : t.quotient) * c;
        }
    return out;
}

}  // namespace

SpectralField neumann_trace(const ExtensionField& ext) { return trace_field(ext, true); }
SpectralField quotient_trace(const ExtensionField& ext) { return trace_field(ext, false); }

PdeResidual pde_residual(const ExtensionField& ext) {
    const double sv = ext.s.value();
    const FracOrder refl(1.0 - sv);
    const double cn = specfun::neumann_trace_constant(ext.s);
    const double cn_r = specfun::neumann_trace_constant(refl);
    PdeResidual r;
    for (int l = 0; l < ext.y.size(); ++l) {
        const double y = ext.y(l);
        for (int m = 0; m < ext.time.M; ++m)
            for (int k = 0; k < ext.space->modes(); ++k) {
                const Complex sym(ext.space->lambda(k), ext.time.rho(m));
                if (sym == Complex(0.0)) continue;
                const Complex I = specfun::i_s(y, sym, ext.s);
                if (std::abs(I) < 1e-250) continue;  // evanescent underflow
                const Complex J = specfun::i_s(y, sym, refl);
                const Complex syms = std::pow(sym, sv);
                const Complex Ip = -std::pow(y, 2.0 * sv - 1.0) * cn * syms * J;
                const Complex Ipp = -(2.0 * sv - 1.0) * std::pow(y, 2.0 * sv - 2.0) *
                                        cn * syms * J +
                                    cn * cn_r * sym * I;
                const Complex res = Ipp + (1.0 - 2.0 * sv) / y * Ip - sym * I;
                r.max_scaled =
                    std::max(r.max_scaled, std::abs(res) / std::abs(sym * I));

                const double h = 1e-3 * y;
                const Complex Iph = specfun::i_s(y + h, sym, ext.s);
                const Complex Imh = specfun::i_s(y - h, sym, ext.s);
                const Complex fd2 = (Iph - 2.0 * I + Imh) / (h * h);
                const Complex fd1 = (Iph - Imh) / (2.0 * h);
                const Complex resfd = fd2 + (1.0 - 2.0 * sv) / y * fd1 - sym * I;
                r.fd_max_scaled =
                    std::max(r.fd_max_scaled, std::abs(resfd) / std::abs(sym * I));
            }
    }
    return r;
}

double energy_norm(const ExtensionField& ext) {
    const double sv = ext.s.value();
    const int L = static_cast<int>(ext.y.size());
    auto density = [&](const Eigen::MatrixXcd& lvl) {
        double S = 0.0;
        for (int m = 0; m < ext.time.M; ++m)
            for (int k = 0; k < ext.space->modes(); ++k)
                S += std::abs(Complex(ext.space->lambda(k), ext.time.rho(m))) *
                     std::norm(lvl(m, k));
        return S;
    };
    double E = 0.0;
    for (int l = 0; l < L; ++l) {
        const double lo = l == 0 ? ext.y(0) : 0.5 * (ext.y(l - 1) + ext.y(l));
        const double hi = l + 1 == L ? ext.y(L - 1) : 0.5 * (ext.y(l) + ext.y(l + 1));
        E += (hi - lo) * std::pow(ext.y(l), 1.0 - 2.0 * sv) * density(ext.levels[l]);
    }
    // analytic head on (0, y_min): the density is continuous at y = 0
    E += density(ext.base) * std::pow(ext.y(0), 2.0 - 2.0 * sv) / (2.0 - 2.0 * sv);
    return ext.time.drho() * E;
}

ReflectedExtension reflect(const ExtensionField& ext, double Y0) {
    if (!(Y0 > 0.0) || Y0 > ext.y(ext.y.size() - 1) * (1.0 + 1e-12))
        throw std::domain_error("reflect: Y0 must lie inside the stored y-grid");
    int L0 = 0;
    while (L0 < ext.y.size() && ext.y(L0) <= Y0 * (1.0 + 1e-12)) ++L0;

    ReflectedExtension r;
    r.y.resize(2 * L0 + 1);
    r.levels.resize(2 * L0 + 1);
    r.y(L0) = 0.0;
    r.levels[L0] = ext.base;
    for (int l = 0; l < L0; ++l) {
        r.y(L0 + 1 + l) = ext.y(l);
        r.levels[L0 + 1 + l] = ext.levels[l];
        r.y(L0 - 1 - l) = -ext.y(l);
        r.levels[L0 - 1 - l] = ext.levels[l];
    }
    r.weight_note =
        "even in y; natural measure |y|^{1-2s} dy, a Muckenhoupt A2 weight for "
        "s in (0,1)";
    return r;
}

}  // namespace fracpar
