#include "fracpar/eigensystem.hpp"

#include <cmath>
#include <stdexcept>

#include "fracpar/kernels.hpp"

namespace fracpar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Gauss-Legendre 5-point rule on [-1,1].
constexpr double kGL5Nodes[5] = {-0.906179845938663992797626878299393,
                                 -0.538469310105683091036314420700208, 0.0,
                                 0.538469310105683091036314420700208,
                                 0.906179845938663992797626878299393};
constexpr double kGL5Weights[5] = {0.236926885056189087514264040719917,
                                   0.478628670499366468041291514835638,
                                   0.568888888888888888888888888888889,
                                   0.478628670499366468041291514835638,
                                   0.236926885056189087514264040719917};

struct Domain {
    double lo, hi;
};

Domain default_domain(const OperatorSpec& spec, int K) {
    switch (spec.kind) {
        case OperatorKind::interval_dirichlet:
        case OperatorKind::interval_neumann:
        case OperatorKind::ultraspherical:
            return {0.0, kPi};
        case OperatorKind::hermite:
        case OperatorKind::hermite_shifted: {
            const double r = std::max(12.0, std::sqrt(2.0 * K + 1.0) + 4.0);
            return {-r, r};
        }
        case OperatorKind::laguerre: {
            const double r =
                std::max(14.0, std::sqrt(4.0 * K + 2.0 * spec.alpha + 2.0) + 4.0);
            return {0.0, r};
        }
        case OperatorKind::bessel:
            return {0.0, 20.0};
        case OperatorKind::generic_divergence:
            throw std::domain_error("build_eigensystem: generic_divergence needs a domain");
    }
    throw std::logic_error("default_domain: unknown kind");
}

Eigen::VectorXd half_offset_grid(double lo, double hi, int N) {
    Eigen::VectorXd x(N);
    const double dx = (hi - lo) / N;
    for (int j = 0; j < N; ++j) x(j) = lo + (j + 0.5) * dx;
    return x;
}

// Deterministic sign convention: the entry of largest magnitude is positive.
void fix_signs(Eigen::MatrixXd& phi) {
    for (Eigen::Index k = 0; k < phi.cols(); ++k) {
        Eigen::Index imax = 0;
        phi.col(k).cwiseAbs().maxCoeff(&imax);
        if (phi(imax, k) < 0.0) phi.col(k) = -phi.col(k);
    }
}

// Symmetric re-orthonormalization in the discrete w-inner product. The
// Galerkin quadrature and the trapezoidal grid weights differ at the 1e-8
// level near interval endpoints; this polish restores orthonormality to
// round-off without touching the eigenvalues.
void lowdin_polish(Eigen::MatrixXd& phi, const Eigen::VectorXd& w) {
    Eigen::MatrixXd G = phi.transpose() * w.asDiagonal() * phi;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(G);
    if (eg.info() != Eigen::Success || eg.eigenvalues().minCoeff() <= 0.0)
        throw std::runtime_error("build_eigensystem: Gram matrix not positive definite");
    const Eigen::VectorXd inv_sqrt = eg.eigenvalues().cwiseSqrt().cwiseInverse();
    phi = phi * (eg.eigenvectors() * inv_sqrt.asDiagonal() * eg.eigenvectors().transpose());
}

// Orthonormal polynomials of the quadrature measure sum qw_i delta_{q_i},
// generated by the Stieltjes procedure; evaluation anywhere via the
// three-term recurrence, with derivatives.
struct OrthoPolyBasis {
    Eigen::VectorXd alpha, beta;  // beta(0) = sqrt(total mass)
    int size = 0;

    static OrthoPolyBasis build(const Eigen::VectorXd& q, const Eigen::VectorXd& qw,
                                int nb) {
        OrthoPolyBasis b;
        b.size = nb;
        b.alpha.resize(nb);
        b.beta.resize(nb + 1);
        const double mass = qw.sum();
        b.beta(0) = std::sqrt(mass);
        Eigen::VectorXd prev = Eigen::VectorXd::Zero(q.size());
        Eigen::VectorXd cur = Eigen::VectorXd::Constant(q.size(), 1.0 / b.beta(0));
        for (int m = 0; m < nb; ++m) {
            b.alpha(m) = (qw.array() * q.array() * cur.array().square()).sum();
            Eigen::VectorXd r =
                (q.array() - b.alpha(m)) * cur.array() -
                (m > 0 ? b.beta(m) : 0.0) * prev.array();
            const double nrm = std::sqrt((qw.array() * r.array().square()).sum());
            if (!(nrm > 0.0))
                throw std::runtime_error("OrthoPolyBasis: measure supports too few polynomials");
            b.beta(m + 1) = nrm;
            prev = cur;
            cur = r / nrm;
        }
        return b;
    }

    void eval(double x, Eigen::VectorXd& p, Eigen::VectorXd& dp) const {
        p.resize(size);
        dp.resize(size);
        double pm1 = 0.0, dm1 = 0.0;
        double pm = 1.0 / beta(0), dm = 0.0;
        for (int m = 0; m < size; ++m) {
            p(m) = pm;
            dp(m) = dm;
            const double pn =
                ((x - alpha(m)) * pm - (m > 0 ? beta(m) : 0.0) * pm1) / beta(m + 1);
            const double dn =
                ((x - alpha(m)) * dm + pm - (m > 0 ? beta(m) : 0.0) * dm1) / beta(m + 1);
            pm1 = pm;
            dm1 = dm;
            pm = pn;
            dm = dn;
        }
    }
};

struct FormFunctions {
    std::function<double(double)> a, c, eta;
};

FormFunctions resolve_form(const OperatorSpec& spec) {
    switch (spec.kind) {
        case OperatorKind::hermite:
            return {[](double) { return 1.0; }, [](double x) { return x * x; },
                    [](double) { return 1.0; }};
        case OperatorKind::hermite_shifted:
            return {[](double) { return 1.0; }, [](double x) { return x * x - 1.0; },
                    [](double) { return 1.0; }};
        case OperatorKind::laguerre: {
            const double al = spec.alpha;
            return {[](double) { return 0.25; },
                    [al](double x) {
                        return 0.25 * (x * x + (al * al - 0.25) / (x * x));
                    },
                    [](double) { return 1.0; }};
        }
        case OperatorKind::ultraspherical: {
            const double lp = spec.lambda_param;
            return {[](double) { return 1.0; },
                    [lp](double x) {
                        const double s = std::sin(x);
                        return lp * (lp - 1.0) / (s * s);
                    },
                    [](double) { return 1.0; }};
        }
        case OperatorKind::bessel: {
            const double lp = spec.lambda_param;
            return {[](double) { return 1.0; },
                    [lp](double x) { return (lp * lp - lp) / (x * x); },
                    [](double) { return 1.0; }};
        }
        case OperatorKind::generic_divergence: {
            auto one = [](double) { return 1.0; };
            return {spec.a ? spec.a : std::function<double(double)>(one),
                    spec.c ? spec.c : std::function<double(double)>([](double) { return 0.0; }),
                    spec.eta ? spec.eta : std::function<double(double)>(one)};
        }
        default:
            throw std::logic_error("resolve_form: analytic kind");
    }
}

EigenSystem build_analytic(const OperatorSpec& spec, int K, int N, const Domain& dom) {
    EigenSystem es;
    es.spec = spec;
    es.x = half_offset_grid(dom.lo, dom.hi, N);
    const double dx = (dom.hi - dom.lo) / N;
    es.w = Eigen::VectorXd::Constant(N, dx);
    es.lambda.resize(K);
    es.phi.resize(N, K);

    switch (spec.kind) {
        case OperatorKind::interval_dirichlet: {
            const double amp = std::sqrt(2.0 / kPi);
            for (int k = 0; k < K; ++k) {
                const double m = k + 1.0;
                es.lambda(k) = m * m;
                for (int j = 0; j < N; ++j) es.phi(j, k) = amp * std::sin(m * es.x(j));
            }
            break;
        }
        case OperatorKind::interval_neumann: {
            const double amp = std::sqrt(2.0 / kPi);
            es.zero_mean_mode = true;  // constant mode dropped per convention
            for (int k = 0; k < K; ++k) {
                const double m = k + 1.0;
                es.lambda(k) = m * m;
                for (int j = 0; j < N; ++j) es.phi(j, k) = amp * std::cos(m * es.x(j));
            }
            break;
        }
        case OperatorKind::hermite:
        case OperatorKind::hermite_shifted: {
            const double shift = spec.kind == OperatorKind::hermite_shifted ? 1.0 : 0.0;
            for (int k = 0; k < K; ++k) es.lambda(k) = 2.0 * k + 1.0 - shift;
            // Hermite functions by the stable normalized recurrence.
            for (int j = 0; j < N; ++j) {
                const double xx = es.x(j);
                double pm1 = 0.0;
                double pm = std::pow(kPi, -0.25) * std::exp(-0.5 * xx * xx);
                for (int k = 0; k < K; ++k) {
                    es.phi(j, k) = pm;
                    const double pn = std::sqrt(2.0 / (k + 1.0)) * xx * pm -
                                      std::sqrt(k / (k + 1.0)) * pm1;
                    pm1 = pm;
                    pm = pn;
                }
            }
            es.note = "truncated to [" + std::to_string(dom.lo) + "," +
                      std::to_string(dom.hi) + "] from R";
            break;
        }
        default:
            throw std::logic_error("build_analytic: not an analytic kind");
    }
    lowdin_polish(es.phi, es.w);
    fix_signs(es.phi);
    return es;
}

EigenSystem build_galerkin(const OperatorSpec& spec, int K, int N, const Domain& dom) {
    const auto form = resolve_form(spec);
    const double dx = (dom.hi - dom.lo) / N;

    // Composite GL5 quadrature for the Galerkin integrals.
    const int Q = 5 * N;
    Eigen::VectorXd q(Q), qw(Q);
    for (int cell = 0; cell < N; ++cell) {
        const double c0 = dom.lo + cell * dx, c1 = c0 + dx;
        for (int g = 0; g < 5; ++g) {
            q(5 * cell + g) = 0.5 * (c0 + c1) + 0.5 * dx * kGL5Nodes[g];
            qw(5 * cell + g) = 0.5 * dx * kGL5Weights[g];
        }
    }
    Eigen::VectorXd a_q(Q), c_q(Q), eta_q(Q);
    for (int i = 0; i < Q; ++i) {
        a_q(i) = form.a(q(i));
        c_q(i) = form.c(q(i));
        eta_q(i) = form.eta(q(i));
    }
    if (spec.kind == OperatorKind::generic_divergence) {
        if (!(spec.ellipticity >= 1.0))
            throw std::domain_error("generic_divergence: ellipticity constant required");
        const double L = spec.ellipticity;
        if (a_q.minCoeff() < 1.0 / L - 1e-14 || a_q.maxCoeff() > L + 1e-14)
            throw std::domain_error("generic_divergence: a(x) violates ellipticity bounds");
        if (c_q.minCoeff() < -1e-14)
            throw std::domain_error("generic_divergence: c(x) must be nonnegative");
    }
    if ((eta_q.array() <= 0.0).any())
        throw std::domain_error("build_eigensystem: measure density must be positive");

    // Lebesgue-measure problems use the Dirichlet sine basis; weighted
    // measures use orthogonal polynomials of the discretized measure (a sine
    // mass matrix against a decaying weight is numerically singular).
    const bool weighted =
        (eta_q.maxCoeff() - eta_q.minCoeff()) > 1e-12 * eta_q.maxCoeff();

    Eigen::MatrixXd E0, E1;  // basis values / derivatives at quadrature nodes
    int nb;
    if (!weighted) {
        nb = std::min(N / 2, std::max(6 * K, 160));
        E0.resize(Q, nb);
        E1.resize(Q, nb);
        const double len = dom.hi - dom.lo;
        const double amp = std::sqrt(2.0 / len);
        for (int m = 0; m < nb; ++m) {
            const double km = (m + 1) * kPi / len;
            for (int i = 0; i < Q; ++i) {
                const double z = q(i) - dom.lo;
                E0(i, m) = amp * std::sin(km * z);
                E1(i, m) = amp * km * std::cos(km * z);
            }
        }
    } else {
        nb = std::min(N / 4, std::max(3 * K, 60));
        auto poly = OrthoPolyBasis::build(q, qw.cwiseProduct(eta_q), nb);
        // Dirichlet factors only where the measure does not already vanish.
        const double eta_lo = form.eta(dom.lo), eta_hi = form.eta(dom.hi);
        const double eta_max = eta_q.maxCoeff();
        const bool dir_lo = eta_lo > 1e-12 * eta_max;
        const bool dir_hi = eta_hi > 1e-12 * eta_max;
        E0.resize(Q, nb);
        E1.resize(Q, nb);
        Eigen::VectorXd p, dp;
        for (int i = 0; i < Q; ++i) {
            poly.eval(q(i), p, dp);
            double d = 1.0, dd = 0.0;
            if (dir_lo) {
                dd = dd * (q(i) - dom.lo) + d;
                d *= q(i) - dom.lo;
            }
            if (dir_hi) {
                dd = dd * (dom.hi - q(i)) - d;
                d *= dom.hi - q(i);
            }
            for (int m = 0; m < nb; ++m) {
                E0(i, m) = d * p(m);
                E1(i, m) = d * dp(m) + dd * p(m);
            }
        }
    }

    const Eigen::VectorXd wa = qw.cwiseProduct(eta_q).cwiseProduct(a_q);
    const Eigen::VectorXd wc = qw.cwiseProduct(eta_q).cwiseProduct(c_q);
    const Eigen::VectorXd wm = qw.cwiseProduct(eta_q);
    Eigen::MatrixXd S = E1.transpose() * wa.asDiagonal() * E1 +
                        E0.transpose() * wc.asDiagonal() * E0;
    Eigen::MatrixXd B = E0.transpose() * wm.asDiagonal() * E0;
    S = 0.5 * (S + S.transpose()).eval();
    B = 0.5 * (B + B.transpose()).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, B);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("build_eigensystem: generalized eigensolve failed");

    EigenSystem es;
    es.spec = spec;
    es.x = half_offset_grid(dom.lo, dom.hi, N);
    es.w.resize(N);
    for (int j = 0; j < N; ++j) es.w(j) = dx * form.eta(es.x(j));
    es.lambda = solver.eigenvalues().head(K).cwiseMax(0.0);
    // Sample the Galerkin eigenfunctions on the grid.
    Eigen::MatrixXd basis_at_x(N, nb);
    if (!weighted) {
        const double len = dom.hi - dom.lo;
        const double amp = std::sqrt(2.0 / len);
        for (int m = 0; m < nb; ++m)
            for (int j = 0; j < N; ++j)
                basis_at_x(j, m) = amp * std::sin((m + 1) * kPi * (es.x(j) - dom.lo) / len);
    } else {
        auto poly = OrthoPolyBasis::build(q, qw.cwiseProduct(eta_q), nb);
        const double eta_max = eta_q.maxCoeff();
        const bool dir_lo = form.eta(dom.lo) > 1e-12 * eta_max;
        const bool dir_hi = form.eta(dom.hi) > 1e-12 * eta_max;
        Eigen::VectorXd p, dp;
        for (int j = 0; j < N; ++j) {
            poly.eval(es.x(j), p, dp);
            double d = 1.0;
            if (dir_lo) d *= es.x(j) - dom.lo;
            if (dir_hi) d *= dom.hi - es.x(j);
            basis_at_x.row(j) = d * p.transpose();
        }
    }
    es.phi = basis_at_x * solver.eigenvectors().leftCols(K);
    lowdin_polish(es.phi, es.w);
    fix_signs(es.phi);

    if (spec.kind == OperatorKind::laguerre)
        es.note = "classical (unverified): lambda_k = k + (alpha+1)/2";
    else if (spec.kind == OperatorKind::ultraspherical)
        es.note = "classical (unverified): lambda_k = (k+1+lambda-1)^2-ish; discretized only";
    else if (spec.kind == OperatorKind::bessel)
        es.note = "continuous spectrum truncated to (0," + std::to_string(dom.hi) + ")";
    return es;
}

}  // namespace

const char* kind_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::interval_dirichlet: return "interval_dirichlet";
        case OperatorKind::interval_neumann: return "interval_neumann";
        case OperatorKind::hermite: return "hermite";
        case OperatorKind::hermite_shifted: return "hermite_shifted";
        case OperatorKind::laguerre: return "laguerre";
        case OperatorKind::ultraspherical: return "ultraspherical";
        case OperatorKind::bessel: return "bessel";
        case OperatorKind::generic_divergence: return "generic_divergence";
    }
    return "unknown";
}

OperatorKind kind_from_name(const std::string& name) {
    for (auto k : {OperatorKind::interval_dirichlet, OperatorKind::interval_neumann,
                   OperatorKind::hermite, OperatorKind::hermite_shifted,
                   OperatorKind::laguerre, OperatorKind::ultraspherical,
                   OperatorKind::bessel, OperatorKind::generic_divergence})
        if (name == kind_name(k)) return k;
    throw std::domain_error("unknown operator kind: " + name);
}

void OperatorSpec::validate() const {
    if (kind == OperatorKind::laguerre && !(alpha > -1.0))
        throw std::domain_error("laguerre: alpha must be > -1");
    if ((kind == OperatorKind::ultraspherical || kind == OperatorKind::bessel) &&
        !(lambda_param > 0.0))
        throw std::domain_error("lambda parameter must be > 0");
    if (x_hi != 0.0 || x_lo != 0.0) {
        if (!(x_hi > x_lo)) throw std::domain_error("domain must satisfy x_hi > x_lo");
    }
}

EigenSystem build_eigensystem(const OperatorSpec& spec, int K, int N) {
    spec.validate();
    if (K < 1 || N < 8) throw std::domain_error("build_eigensystem: K >= 1, N >= 8 required");
    if (K > N / 4)
        throw std::domain_error("build_eigensystem: K <= N/4 required for spectral margin");
    Domain dom{spec.x_lo, spec.x_hi};
    if (dom.lo == 0.0 && dom.hi == 0.0) dom = default_domain(spec, K);

    switch (spec.kind) {
        case OperatorKind::interval_dirichlet:
        case OperatorKind::interval_neumann:
        case OperatorKind::hermite:
        case OperatorKind::hermite_shifted:
            return build_analytic(spec, K, N, dom);
        default:
            return build_galerkin(spec, K, N, dom);
    }
}

Eigen::MatrixXd heat_kernel(const EigenSystem& es, double tau, double* tail_bound) {
    if (!(tau > 0.0)) throw std::domain_error("heat_kernel: tau must be positive");
    const int K = es.modes();
    Eigen::VectorXd damp(K);
    for (int k = 0; k < K; ++k) damp(k) = std::exp(-tau * es.lambda(k));
    if (tail_bound) *tail_bound = std::exp(-tau * es.lambda(K - 1)) * K;
    Eigen::MatrixXd W = kernels::weighted_product(es.phi, damp, es.phi.transpose());
    // exact symmetry despite floating-point accumulation order
    for (Eigen::Index i = 0; i < W.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) W(i, j) = W(j, i);
    return W;
}

Eigen::VectorXd expand(const EigenSystem& es, const Eigen::VectorXd& f,
                       double* projected_mean) {
    if (f.size() != es.x.size())
        throw std::domain_error("expand: sample vector does not conform to grid");
    Eigen::VectorXd g = f;
    double mean = 0.0;
    if (es.zero_mean_mode) {
        const double mass = es.w.sum();
        mean = es.w.dot(f) / mass;
        g.array() -= mean;
    }
    if (projected_mean) *projected_mean = mean;
    return es.phi.transpose() * es.w.cwiseProduct(g);
}

Eigen::VectorXd synthesize(const EigenSystem& es, const Eigen::VectorXd& coef) {
    if (coef.size() != es.lambda.size())
        throw std::domain_error("synthesize: coefficient count mismatch");
    return es.phi * coef;
}

Eigen::VectorXd semigroup_mass(const EigenSystem& es, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("semigroup_mass: tau must be positive");
    const int K = es.modes();
    Eigen::VectorXd mode_mass = es.phi.transpose() * es.w;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(es.x.size());
    for (int k = 0; k < K; ++k)
        out += std::exp(-tau * es.lambda(k)) * mode_mass(k) * es.phi.col(k);
    // The dropped constant mode contributes its full, undamped mass.
    if (es.zero_mean_mode) out.array() += 1.0;
    return out;
}

}  // namespace fracpar
