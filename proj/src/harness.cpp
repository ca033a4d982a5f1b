#include "fracpar/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracpar/fracop.hpp"

namespace fracpar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kDenseBudget = 8192;
constexpr double kLambdaZero = 1e-12;

// Forward/inverse time-Fourier matrices under the module normalization;
// Fi * F is exactly the identity.
Eigen::MatrixXcd forward_dft(const TimeGrid& tg) {
    Eigen::MatrixXcd F(tg.M, tg.M);
    const double a = tg.dt() / std::sqrt(2.0 * kPi);
    for (int m = 0; m < tg.M; ++m)
        for (int i = 0; i < tg.M; ++i)
            F(m, i) = a * std::exp(Complex(0.0, -tg.rho(m) * tg.t(i)));
    return F;
}

Eigen::MatrixXcd inverse_dft(const TimeGrid& tg) {
    Eigen::MatrixXcd Fi(tg.M, tg.M);
    const double a = tg.drho() / std::sqrt(2.0 * kPi);
    for (int i = 0; i < tg.M; ++i)
        for (int m = 0; m < tg.M; ++m)
            Fi(i, m) = a * std::exp(Complex(0.0, tg.rho(m) * tg.t(i)));
    return Fi;
}

void check_budget(const EigenSystem& es, const TimeGrid& tg) {
    if (static_cast<long>(tg.M) * es.grid_size() > kDenseBudget)
        throw std::length_error(
            "harness: lattice " + std::to_string(tg.M) + "x" +
            std::to_string(es.grid_size()) + " exceeds the dense budget of " +
            std::to_string(kDenseBudget) + " unknowns");
}

// Per-mode real time blocks G_k = Re(Fi diag((i rho + lambda_k)^s) F). The
// Nyquist frequency (storage row 0) has no conjugate partner, so its
// multiplier is set to zero: this keeps the real matrix exactly additive in s
// and treats the row as unresolved (the lattice projection excludes it too).
// The origin symbol (rho, lambda) = (0, 0) takes the value origin_weight (0
// for the plain operator matrix, gamma for the solver's penalized variant).
std::vector<Eigen::MatrixXd> time_blocks(const EigenSystem& es, const TimeGrid& tg,
                                         double s, double origin_weight) {
    const Eigen::MatrixXcd F = forward_dft(tg);
    const Eigen::MatrixXcd Fi = inverse_dft(tg);
    std::vector<Eigen::MatrixXd> G(es.modes());
    Eigen::VectorXcd mu(tg.M);
    for (int k = 0; k < es.modes(); ++k) {
        for (int m = 0; m < tg.M; ++m) {
            const Complex sym(es.lambda(k), tg.rho(m));
            mu(m) = m == 0 ? Complex(0.0)
                    : std::abs(sym) <= kLambdaZero ? Complex(origin_weight)
                                                   : std::pow(sym, s);
        }
        G[k] = (Fi * mu.asDiagonal() * F).real();
    }
    return G;
}

Eigen::MatrixXd spatial_projection(const EigenSystem& es) {
    return es.phi * (es.phi.transpose() * es.w.asDiagonal());
}

// Time factor of the resolved-span projection: the identity minus the Nyquist
// frequency mode, whose sample vector is v_i = (-1)^i / sqrt(M).
Eigen::MatrixXd time_projection(const TimeGrid& tg) {
    Eigen::VectorXd v(tg.M);
    for (int i = 0; i < tg.M; ++i) v(i) = (i % 2 == 0) ? 1.0 : -1.0;
    return Eigen::MatrixXd::Identity(tg.M, tg.M) - v * v.transpose() / tg.M;
}

std::vector<int> mask_indices(const LatticeMask& mask) {
    std::vector<int> idx;
    for (int i = 0; i < mask.rows(); ++i)
        for (int j = 0; j < mask.cols(); ++j)
            if (mask(i, j)) idx.push_back(i * static_cast<int>(mask.cols()) + j);
    return idx;
}

double mask_max(const Eigen::MatrixXd& v, const LatticeMask& mask) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < mask.rows(); ++i)
        for (int j = 0; j < mask.cols(); ++j)
            if (mask(i, j)) m = std::max(m, v(i, j));
    return m;
}

double mask_min(const Eigen::MatrixXd& v, const LatticeMask& mask) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < mask.rows(); ++i)
        for (int j = 0; j < mask.cols(); ++j)
            if (mask(i, j)) m = std::min(m, v(i, j));
    return m;
}

}  // namespace

CylinderGeometry make_cylinder(const TimeGrid& tg,
                               std::shared_ptr<const EigenSystem> es, double center,
                               double r) {
    if (!(r > 0.0)) throw std::domain_error("make_cylinder: r must be positive");
    CylinderGeometry g;
    g.time = tg;
    g.space = std::move(es);
    g.center = center;
    g.r = r;
    const int M = tg.M, N = g.space->grid_size();
    g.R = LatticeMask::Constant(M, N, false);
    g.R_minus = g.R;
    g.R_plus = g.R;
    g.past = g.R;

    // two-cell margin of B_2r inside the spatial domain
    int j_lo = N, j_hi = -1;
    for (int j = 0; j < N; ++j)
        if (std::abs(g.space->x(j) - center) < 2.0 * r) {
            j_lo = std::min(j_lo, j);
            j_hi = std::max(j_hi, j);
        }
    if (j_hi < 0) throw std::domain_error("make_cylinder: B_2r contains no grid nodes");
    if (j_lo < 2 || j_hi > N - 3)
        throw std::domain_error(
            "make_cylinder: B_2r needs two grid cells of margin inside the domain");

    for (int i = 0; i < M; ++i) {
        const double t = tg.t(i);
        for (int j = 0; j < N; ++j) {
            const double dx = std::abs(g.space->x(j) - center);
            g.R(i, j) = t > 0.0 && t < 1.0 && dx < 2.0 * r;
            g.R_minus(i, j) = t >= 0.25 && t <= 0.5 && dx < r;
            g.R_plus(i, j) = t >= 0.75 && t < 1.0 && dx < r;
            g.past(i, j) = !g.R(i, j);
        }
    }
    if (!g.R_minus.any() || !g.R_plus.any())
        throw std::domain_error("make_cylinder: R_minus or R_plus mask is empty");
    if ((g.R_minus && g.R_plus).any())
        throw std::logic_error("make_cylinder: R_minus and R_plus overlap");
    if ((g.R_minus && !g.R).any() || (g.R_plus && !g.R).any())
        throw std::logic_error("make_cylinder: Harnack windows leave R");
    g.interior = mask_indices(g.R);
    return g;
}

Eigen::MatrixXd assemble_hs_matrix(const EigenSystem& es, const TimeGrid& tg,
                                   const FracOrder& s) {
    check_budget(es, tg);
    const int M = tg.M, N = es.grid_size(), K = es.modes();
    const auto G = time_blocks(es, tg, s.value(), 0.0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M * N, M * N);
    for (int k = 0; k < K; ++k) {
        const Eigen::VectorXd col = es.phi.col(k);
        const Eigen::RowVectorXd row =
            (es.phi.col(k).array() * es.w.array()).transpose();
        const Eigen::MatrixXd Pk = col * row;  // N x N spatial factor
        for (int i = 0; i < M; ++i)
            for (int ip = 0; ip < M; ++ip)
                A.block(i * N, ip * N, N, N) += G[k](i, ip) * Pk;
    }
    return A;
}

Eigen::MatrixXd lattice_projection(const EigenSystem& es, const TimeGrid& tg) {
    check_budget(es, tg);
    const int M = tg.M, N = es.grid_size();
    const Eigen::MatrixXd Ps = spatial_projection(es);
    const Eigen::MatrixXd Pt = time_projection(tg);
    Eigen::MatrixXd P(M * N, M * N);
    for (int i = 0; i < M; ++i)
        for (int ip = 0; ip < M; ++ip) P.block(i * N, ip * N, N, N) = Pt(i, ip) * Ps;
    return P;
}

double dirichlet_penalty_scale(const EigenSystem& es, const TimeGrid& tg,
                               double s) {
    std::vector<double> mags;
    mags.reserve(static_cast<size_t>(tg.M) * es.modes());
    for (int m = 0; m < tg.M; ++m)
        for (int k = 0; k < es.modes(); ++k) {
            const double mag = std::abs(Complex(es.lambda(k), tg.rho(m)));
            if (mag > kLambdaZero) mags.push_back(std::pow(mag, s));
        }
    if (mags.empty()) return 1.0;
    const size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
    return mags[mid];
}

DirichletSystem build_dirichlet_system(std::shared_ptr<const EigenSystem> es,
                                       const TimeGrid& tg, const FracOrder& s,
                                       const std::vector<int>& interior,
                                       double gamma) {
    check_budget(*es, tg);
    if (interior.empty())
        throw std::domain_error("build_dirichlet_system: empty interior");
    if (gamma <= 0.0) gamma = dirichlet_penalty_scale(*es, tg, s.value());
    const int M = tg.M, N = es->grid_size(), K = es->modes();
    const int I = static_cast<int>(interior.size());
    const auto G = time_blocks(*es, tg, s.value(), 0.0);
    const Eigen::MatrixXd Ps = spatial_projection(*es);
    const Eigen::MatrixXd Pt = time_projection(tg);
    // scaled mode profiles q_k(j') = phi(j',k) w(j')
    const Eigen::MatrixXd Q = (es->phi.array().colwise() * es->w.array()).transpose();

    DirichletSystem sys;
    sys.time = tg;
    sys.space = es;
    sys.s = s.value();
    sys.gamma = gamma;
    sys.interior = interior;
    sys.rows.resize(I, M * N);

    Eigen::MatrixXd U(M, K), B(M, N);
    for (int p = 0; p < I; ++p) {
        if (interior[p] < 0 || interior[p] >= M * N)
            throw std::domain_error("build_dirichlet_system: index out of range");
        const int i = interior[p] / N, j = interior[p] % N;
        for (int k = 0; k < K; ++k)
            U.col(k) = es->phi(j, k) * G[k].row(i).transpose();
        B.noalias() = U * Q;
        for (int ip = 0; ip < M; ++ip)
            sys.rows.block(p, ip * N, 1, N) = B.row(ip);
    }

    sys.PII.resize(I, I);
    for (int p = 0; p < I; ++p) {
        const int i = interior[p] / N, j = interior[p] % N;
        for (int q = 0; q < I; ++q)
            sys.PII(p, q) =
                Pt(i, interior[q] / N) * Ps(j, interior[q] % N);
    }
    Eigen::MatrixXd AII(I, I);
    for (int q = 0; q < I; ++q) AII.col(q) = sys.rows.col(interior[q]);
    AII += gamma * (Eigen::MatrixXd::Identity(I, I) - sys.PII);
    sys.lu.compute(AII);
    sys.rcond = sys.lu.rcond();
    if (!(sys.rcond > 1e-12))
        throw std::runtime_error(
            "build_dirichlet_system: interior block numerically singular "
            "(reciprocal condition estimate " +
            std::to_string(sys.rcond) + ")");
    return sys;
}

DirichletSolution solve_dirichlet(const DirichletSystem& sys,
                                  const Eigen::MatrixXd& g) {
    const int M = sys.time.M, N = sys.space->grid_size();
    if (g.rows() != M || g.cols() != N)
        throw std::domain_error("solve_dirichlet: data has the wrong lattice shape");
    Eigen::VectorXd v(M * N);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) v(i * N + j) = g(i, j);
    for (int p : sys.interior) v(p) = 0.0;

    const Eigen::VectorXd rhs = -(sys.rows * v);
    const Eigen::VectorXd uI = sys.lu.solve(rhs);
    for (size_t p = 0; p < sys.interior.size(); ++p) v(sys.interior[p]) = uI(p);

    DirichletSolution out{SpaceTimeField(sys.time, sys.space), 0.0, 0.0};
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) out.u.values(i, j) = v(i * N + j);
    const Eigen::VectorXd r =
        sys.rows * v + sys.gamma * (uI - sys.PII * uI);
    out.residual = r.cwiseAbs().maxCoeff();
    out.min_interior = uI.size() ? uI.minCoeff() : 0.0;
    return out;
}

DirichletSolution solve_dirichlet(const Eigen::MatrixXd& mat,
                                  const CylinderGeometry& geom,
                                  const Eigen::MatrixXd& g, const FracOrder& s,
                                  double gamma) {
    if (gamma <= 0.0)
        gamma = dirichlet_penalty_scale(*geom.space, geom.time, s.value());
    const int M = geom.time.M, N = geom.space->grid_size();
    if (mat.rows() != M * N || mat.cols() != M * N)
        throw std::domain_error("solve_dirichlet: matrix does not match the lattice");
    const int I = static_cast<int>(geom.interior.size());

    DirichletSystem sys;
    sys.time = geom.time;
    sys.space = geom.space;
    sys.gamma = gamma;
    sys.interior = geom.interior;
    sys.rows.resize(I, M * N);
    for (int p = 0; p < I; ++p) sys.rows.row(p) = mat.row(geom.interior[p]);
    const Eigen::MatrixXd Ps = spatial_projection(*geom.space);
    const Eigen::MatrixXd Pt = time_projection(geom.time);
    sys.PII.resize(I, I);
    for (int p = 0; p < I; ++p) {
        const int i = geom.interior[p] / N, j = geom.interior[p] % N;
        for (int q = 0; q < I; ++q)
            sys.PII(p, q) =
                Pt(i, geom.interior[q] / N) * Ps(j, geom.interior[q] % N);
    }
    Eigen::MatrixXd AII(I, I);
    for (int q = 0; q < I; ++q) AII.col(q) = sys.rows.col(geom.interior[q]);
    AII += gamma * (Eigen::MatrixXd::Identity(I, I) - sys.PII);
    sys.lu.compute(AII);
    sys.rcond = sys.lu.rcond();
    if (!(sys.rcond > 1e-12))
        throw std::runtime_error(
            "solve_dirichlet: interior block numerically singular "
            "(reciprocal condition estimate " +
            std::to_string(sys.rcond) + ")");
    return solve_dirichlet(sys, g);
}

HolderFit holder_estimate(const SpaceTimeField& u, const LatticeMask& K_mask,
                          const CylinderGeometry& geom) {
    const int M = geom.time.M, N = geom.space->grid_size();
    if (K_mask.rows() != M || K_mask.cols() != N)
        throw std::domain_error("holder_estimate: mask has the wrong lattice shape");

    // strict interiority: the mask and its 4-neighborhood must stay inside R
    std::vector<std::pair<int, int>> pts;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) {
            if (!K_mask(i, j)) continue;
            if (!geom.R(i, j))
                throw std::domain_error("holder_estimate: mask leaves R");
            const bool edge = i == 0 || i == M - 1 || j == 0 || j == N - 1 ||
                              !geom.R(i - 1, j) || !geom.R(i + 1, j) ||
                              !geom.R(i, j - 1) || !geom.R(i, j + 1);
            if (edge)
                throw std::domain_error("holder_estimate: mask touches the boundary of R");
            pts.emplace_back(i, j);
        }
    if (pts.size() < 4)
        throw std::domain_error("holder_estimate: mask has too few points");

    const Eigen::MatrixXd v = u.real_values();
    const double umax = [&] {
        double m = 0.0;
        for (auto [i, j] : pts) m = std::max(m, std::abs(v(i, j)));
        return m;
    }();

    std::vector<double> dist, incr;
    double dmax = 0.0;
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b) {
            const auto [i1, j1] = pts[a];
            const auto [i2, j2] = pts[b];
            const double d =
                std::max(std::abs(geom.space->x(j1) - geom.space->x(j2)),
                         std::sqrt(std::abs(geom.time.t(i1) - geom.time.t(i2))));
            if (!(d > 0.0)) continue;
            dist.push_back(d);
            incr.push_back(std::abs(v(i1, j1) - v(i2, j2)));
            dmax = std::max(dmax, d);
        }

    HolderFit fit;
    const double l2 = std::sqrt(std::abs(field_inner(u, u)));
    if (umax == 0.0 ||
        *std::max_element(incr.begin(), incr.end()) <= 1e-13 * umax) {
        fit.seminorm = 0.0;  // constant on K: alpha stays the NaN sentinel
        return fit;
    }

    // dyadic scale maxima over d in (dmax/2^{q+1}, dmax/2^q]; each bin
    // contributes the point (distance achieving the max, max increment), so
    // the regression is against realized distances rather than bin midpoints
    // (the lattice quantizes the parabolic distance coarsely).
    std::vector<double> Qd, Qv;
    for (int q = 0;; ++q) {
        const double hi = dmax / std::pow(2.0, q), lo = hi / 2.0;
        double best = 0.0, best_d = 0.0;
        bool seen = false;
        for (size_t n = 0; n < dist.size(); ++n)
            if (dist[n] > lo && dist[n] <= hi) {
                seen = true;
                if (incr[n] > best) {
                    best = incr[n];
                    best_d = dist[n];
                }
            }
        if (!seen) break;
        if (best > 0.0) {
            Qd.push_back(best_d);
            Qv.push_back(best);
        }
    }
    if (Qd.size() >= 3) {  // drop the two smallest scales (grid noise)
        Qd.resize(Qd.size() - 2);
        Qv.resize(Qv.size() - 2);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n_used = static_cast<int>(Qd.size());
    for (int q = 0; q < n_used; ++q) {
        const double lx = std::log(Qd[q]), ly = std::log(Qv[q]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    if (n_used >= 2 && n_used * sxx - sx * sx > 0.0) {
        fit.alpha = (n_used * sxy - sx * sy) / (n_used * sxx - sx * sx);
        const double used_floor = *std::min_element(Qd.begin(), Qd.end());
        double semi = 0.0;
        for (size_t n = 0; n < dist.size(); ++n)
            if (dist[n] >= used_floor)
                semi = std::max(semi, incr[n] / std::pow(dist[n], fit.alpha));
        fit.seminorm = semi;
    } else {
        // one usable scale: report the raw quotient at alpha = 1
        fit.alpha = 1.0;
        fit.seminorm = Qd.empty() ? 0.0 : Qv[0] / Qd[0];
    }
    if (l2 > 0.0) fit.l2_ratio = fit.seminorm / l2;
    return fit;
}

namespace {

// Deterministic per-trial stream decoupled from the trial order.
std::mt19937 trial_rng(unsigned seed, int trial) {
    return std::mt19937(seed + 1000003u * static_cast<unsigned>(trial));
}

// Smooth positive space-time Gaussian bump with randomized location and
// shape. Widths are chosen so the bump is resolved by the retained modes
// (spectral tail below ~1e-5), has decayed below ~1e-8 at the edges of the
// solve slab, and carries negligible content on the time-Nyquist row (which
// the operator annihilates): otherwise the band-limited projection of the
// data rings and the discrete solution inherits signed Gibbs oscillations.
// On Dirichlet-type domains the Gaussian is multiplied by a wall window
// vanishing to fourth order at the endpoints; a bare Gaussian tail of ~1e-2
// at the wall is unrepresentable in the eigenbasis and its projection rings.
Eigen::MatrixXd smooth_bump(const TimeGrid& tg, const EigenSystem& es,
                            std::mt19937& rng, std::string* meta,
                            double tc_lo = 2.45, double tc_span = 0.15,
                            double st_lo = 0.20, double st_span = 0.04) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double a = 0.5 + 1.5 * uni(rng);
    const double tc = tc_lo + tc_span * uni(rng);
    const double st = st_lo + st_span * uni(rng);
    double xc, sx;
    if (es.spec.kind == OperatorKind::hermite ||
        es.spec.kind == OperatorKind::hermite_shifted) {
        // coherent-state widths: near-unit Gaussians expand efficiently in
        // the Hermite basis
        xc = -2.0 + 4.0 * uni(rng);
        sx = 0.9 + 0.2 * uni(rng);
    } else {
        const double L = es.x(es.grid_size() - 1) - es.x(0);
        xc = es.x(0) + (0.38 + 0.24 * uni(rng)) * L;
        sx = (0.095 + 0.05 * uni(rng)) * L;
    }
    const bool wall_window = es.spec.kind == OperatorKind::interval_dirichlet ||
                             es.spec.kind == OperatorKind::generic_divergence;
    Eigen::MatrixXd g(tg.M, es.grid_size());
    for (int i = 0; i < tg.M; ++i)
        for (int j = 0; j < es.grid_size(); ++j) {
            double bump_t = 0.0;  // periodized over the time window
            for (int im = -1; im <= 1; ++im) {
                const double dt = tg.t(i) - tc + im * tg.T;
                bump_t += std::exp(-0.5 * dt * dt / (st * st));
            }
            const double dx = es.x(j) - xc;
            double bump_x = std::exp(-0.5 * dx * dx / (sx * sx));
            if (wall_window) {
                const double L = es.x(es.grid_size() - 1) - es.x(0);
                const double u = (es.x(j) - es.x(0)) / L;
                const double win = 4.0 * u * (1.0 - u);
                bump_x *= win * win * win * win;
            }
            g(i, j) = a * bump_t * bump_x;
        }
    if (meta) {
        std::ostringstream os;
        os << "type=smooth;tc=" << tc << ";xc=" << xc;
        *meta = os.str();
    }
    return g;
}

// Random band-limited field, clipped at zero and re-smoothed. A single
// clip-then-project pass undershoots: the spectral projection of the clipping
// kink leaves negative lobes at a few 1e-3 of the amplitude, and clipping
// those again would push the data off the resolved span (the solver then sees
// signed ringing). Iterating clip -> semigroup shrinks the undershoot
// geometrically, so after three rounds the field is strictly nonnegative and
// spatially resolved. Clipping also excites time harmonics up to the Nyquist
// row, which the operator annihilates; a periodic-heat time mollifier (a
// positive kernel, so nonnegativity survives) damps them below ~1e-8. The
// localizing envelope is either a raised-cosine power cos^{2p}(pi (t-tc)/T)
// -- an exactly band-limited positive trig polynomial of p harmonics, so the
// enveloped product still avoids the Nyquist row -- or, when env_p = 0, a
// periodized Gaussian of width env_st for windows too long for a usable p.
Eigen::MatrixXd clipped_field(const TimeGrid& tg,
                              std::shared_ptr<const EigenSystem> es,
                              std::mt19937& rng, std::string* meta,
                              double env_tc = 2.5, double env_st = 0.22,
                              int env_p = 11) {
    SpaceTimeField f = random_band_limited_field(tg, es, rng);
    const int K = es->modes();
    const double lam_hi = es->lambda(std::min(K - 1, (3 * K) / 4));
    const double tau = lam_hi > 0.0 ? 14.0 / lam_hi : 0.3;
    for (int round = 0; round < 3; ++round) {
        f.values = f.values.real().cwiseMax(0.0).cast<Complex>();
        f = apply_semigroup(f, round == 0 ? tau : 0.5 * tau);
    }
    const double rho_nyq = tg.drho() * (tg.M / 2);
    const double theta = 18.0 / (rho_nyq * rho_nyq);
    Eigen::MatrixXcd hat = forward_dft(tg) * f.values;
    for (int m = 0; m < tg.M; ++m)
        hat.row(m) *= std::exp(-theta * tg.rho(m) * tg.rho(m));
    f.values = inverse_dft(tg) * hat;
    Eigen::MatrixXd g = f.real_values().cwiseMax(0.0);
    const double pi = 3.141592653589793238462643383279502884;
    for (int i = 0; i < tg.M; ++i) {
        double env;
        if (env_p > 0) {
            const double c = std::cos(pi * (tg.t(i) - env_tc) / tg.T);
            env = std::pow(c * c, env_p);
        } else {
            env = 0.0;
            for (int im = -1; im <= 1; ++im) {
                const double dt = tg.t(i) - env_tc + im * tg.T;
                env += std::exp(-0.5 * dt * dt / (env_st * env_st));
            }
        }
        g.row(i) *= env;
    }
    if (meta) *meta = "type=clipped";
    return g;
}

}  // namespace

EnsembleSummary harnack_experiment(const EnsembleConfig& cfg) {
    auto src = std::make_shared<const EigenSystem>(
        build_eigensystem(cfg.op, cfg.K, cfg.N));
    TimeGrid tg(cfg.M, cfg.T);
    CylinderGeometry geom = make_cylinder(tg, src, cfg.center, cfg.r);

    std::shared_ptr<const EigenSystem> solve_space = src;
    if (cfg.transfer)
        solve_space = std::make_shared<const EigenSystem>(
            transferred_eigensystem(*src, *cfg.transfer));
    DirichletSystem sys =
        build_dirichlet_system(solve_space, tg, FracOrder(cfg.s), geom.interior);

    // Hoelder window: [1/4, 3/4] x B_r, strictly interior to R
    LatticeMask K_mask = LatticeMask::Constant(tg.M, cfg.N, false);
    for (int i = 0; i < tg.M; ++i)
        for (int j = 0; j < cfg.N; ++j)
            K_mask(i, j) = tg.t(i) >= 0.25 && tg.t(i) <= 0.75 &&
                           std::abs(src->x(j) - cfg.center) < cfg.r;

    EnsembleSummary sum;
    sum.rcond = sys.rcond;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937 rng = trial_rng(cfg.seed, trial);
        std::string meta;
        const bool smooth = trial % 2 == 0;
        Eigen::MatrixXd g = smooth ? smooth_bump(tg, *src, rng, &meta)
                                   : clipped_field(tg, src, rng, &meta);
        for (int p : geom.interior) g(p / cfg.N, p % cfg.N) = 0.0;
        const double gmax = g.cwiseAbs().maxCoeff();

        Eigen::MatrixXd data = g;
        if (cfg.transfer)
            for (int j = 0; j < cfg.N; ++j)
                data.col(j) /= cfg.transfer->multiplier(src->x(j));
        DirichletSolution sol = solve_dirichlet(sys, data);
        Eigen::MatrixXd uv = sol.u.real_values();
        if (cfg.transfer)
            for (int j = 0; j < cfg.N; ++j)
                uv.col(j) *= cfg.transfer->multiplier(src->x(j));

        HarnackReport rep;
        rep.residual = sol.residual;
        rep.sup_Rminus = mask_max(uv, geom.R_minus);
        rep.inf_Rplus = mask_min(uv, geom.R_plus);
        rep.min_interior = mask_min(uv, geom.R);
        rep.nonneg_violation = rep.min_interior < -1e-6 * gmax;
        const double tiny = 1e-12 * std::max(gmax, 1.0);
        if (std::abs(rep.sup_Rminus) < tiny && std::abs(rep.inf_Rplus) < tiny) {
            rep.degenerate = true;
            rep.ratio = std::numeric_limits<double>::quiet_NaN();
        } else if (rep.inf_Rplus <= 0.0) {
            rep.ratio = std::numeric_limits<double>::infinity();
        } else {
            rep.ratio = rep.sup_Rminus / rep.inf_Rplus;
        }
        SpaceTimeField pulled(tg, src);
        pulled.values = uv.cast<Complex>();
        const HolderFit hf = holder_estimate(pulled, K_mask, geom);
        rep.holder_alpha = hf.alpha;
        rep.holder_seminorm = hf.seminorm;
        rep.trial_metadata = meta;

        if (rep.degenerate) {
            ++sum.degenerate_trials;
        } else {
            ++sum.finite_trials;
            if (std::isfinite(rep.ratio)) sum.max_ratio = std::max(sum.max_ratio, rep.ratio);
        }
        if (rep.nonneg_violation) {
            ++sum.violation_trials;
            if (smooth) ++sum.smooth_violation_trials;
        }
        sum.max_residual = std::max(sum.max_residual, rep.residual);
        sum.trials.push_back(std::move(rep));
    }
    return sum;
}

BoundarySummary boundary_harnack_experiment(const BoundaryConfig& cfg) {
    auto es = std::make_shared<const EigenSystem>(
        build_eigensystem(cfg.op, cfg.K, cfg.N));
    TimeGrid tg(cfg.M, cfg.T);
    const int N = es->grid_size();
    const double x_lo = es->x(0), x_hi = es->x(N - 1);
    if (!(cfg.x_tilde > x_lo && cfg.x_tilde + 2.0 * cfg.r < x_hi))
        throw std::domain_error(
            "boundary_harnack_experiment: Omega_0 endpoint not interior");

    // canonical slab (-2,2) mapped to (2,6) inside the periodic window
    const double slab_lo = 2.0, slab_hi = 6.0;
    LatticeMask D = LatticeMask::Constant(tg.M, N, false);   // solve region
    LatticeMask Z = D;                                       // forced zeros
    LatticeMask S = D;                                       // sup window
    for (int i = 0; i < tg.M; ++i) {
        const double t = tg.t(i);
        for (int j = 0; j < N; ++j) {
            const double x = es->x(j);
            const bool slab = t > slab_lo && t < slab_hi;
            D(i, j) = slab && x > cfg.x_tilde && x < cfg.x_tilde + 2.0 * cfg.r;
            Z(i, j) = slab && x <= cfg.x_tilde && x > cfg.x_tilde - 2.0 * cfg.r;
            S(i, j) = t >= slab_lo + 1.0 && t <= slab_hi - 1.0 &&
                      x > cfg.x_tilde && x < cfg.x_tilde + cfg.r;
        }
    }
    if (!D.any() || !Z.any() || !S.any())
        throw std::domain_error("boundary_harnack_experiment: empty mask");

    // reference value at (t0 + 4, x_tilde + 3r/2): the time is snapped to the
    // grid, the space coordinate is read as a mollified point value -- a
    // quadrature (node weights times a fixed C^1 bump of radius r/4 centered
    // at x0) applied to the solution row. A single snapped node sits close to
    // the forced-zero strip where the solution varies steeply, and the snap
    // offset changes with N, which destabilizes the ensemble max ratio under
    // refinement; the mollified value targets the same continuum functional
    // on every grid.
    auto nearest_time = [&](double t) {
        int best = 0;
        for (int i = 1; i < tg.M; ++i)
            if (std::abs(tg.t(i) - t) < std::abs(tg.t(best) - t)) best = i;
        return best;
    };
    // The reference sits in the outer half of D, a full r from the forced-zero
    // strip: close enough to feel the boundary decay, far enough that both the
    // coarse and refined spectral grids resolve it.
    const double x0 = cfg.x_tilde + 1.5 * cfg.r;
    int j0 = 0;
    for (int j = 1; j < N; ++j)
        if (std::abs(es->x(j) - x0) < std::abs(es->x(j0) - x0)) j0 = j;
    std::vector<int> ref_nodes;
    std::vector<double> ref_w;
    double ref_weight = 0.0;
    const double h_ref = cfg.r / 4.0;
    for (int j = 0; j < N; ++j) {
        const double u = (es->x(j) - x0) / h_ref;
        if (std::abs(u) < 1.0) {
            const double phi = (1.0 - u * u) * (1.0 - u * u);
            ref_nodes.push_back(j);
            ref_w.push_back(es->w(j) * phi);
            ref_weight += es->w(j) * phi;
        }
    }
    if (ref_nodes.empty()) {
        ref_nodes.push_back(j0);
        ref_w.push_back(es->w(j0));
        ref_weight = es->w(j0);
    }
    auto ref_value = [&](const Eigen::MatrixXd& uv, int i) {
        double acc = 0.0;
        for (size_t q = 0; q < ref_nodes.size(); ++q) acc += ref_w[q] * uv(i, ref_nodes[q]);
        return acc / ref_weight;
    };
    const int i0 = nearest_time(cfg.t0 + 4.0);
    if (!D(i0, j0))
        throw std::domain_error(
            "boundary_harnack_experiment: reference point outside the solve region");

    DirichletSystem sys = build_dirichlet_system(es, tg, FracOrder(cfg.s),
                                                 mask_indices(D));

    const std::vector<double> t0_grid = {1.25, 1.5, 1.75};
    BoundarySummary sum;
    for (double t0 : t0_grid) sum.t0_trend.emplace_back(t0, 0.0);

    // Random data is drawn in a fixed spectral band (data_K modes) on this
    // grid, so a refined solve with data_K pinned at the coarse K sees the
    // same continuum data rather than an independent random field.
    const int data_K = cfg.data_K > 0 ? cfg.data_K : cfg.K;
    auto es_data = data_K == cfg.K
                       ? es
                       : std::make_shared<const EigenSystem>(
                             build_eigensystem(cfg.op, data_K, cfg.N));

    for (int trial = 0; trial < cfg.trials; ++trial) {
        std::mt19937 rng = trial_rng(cfg.seed, trial);
        std::string meta;
        // data localized before the slab (canonical times around -3)
        Eigen::MatrixXd g =
            trial % 2 == 0 ? smooth_bump(tg, *es, rng, &meta, 0.70, 0.15, 0.18, 0.04)
                           : clipped_field(tg, es_data, rng, &meta, 0.85, 0.18, 0);
        for (int i = 0; i < tg.M; ++i)
            for (int j = 0; j < N; ++j)
                if (D(i, j) || Z(i, j)) g(i, j) = 0.0;  // vanishing on the masked slab
        const double gmax = g.cwiseAbs().maxCoeff();
        DirichletSolution sol = solve_dirichlet(sys, g);
        const Eigen::MatrixXd uv = sol.u.real_values();

        BoundaryReport rep;
        rep.residual = sol.residual;
        rep.sup_window = mask_max(uv, S);
        rep.u_ref = ref_value(uv, i0);
        if (rep.u_ref <= 1e-12 * std::max(gmax, 1.0)) {
            rep.degenerate = true;
            rep.ratio = std::numeric_limits<double>::quiet_NaN();
            ++sum.degenerate_trials;
        } else {
            rep.ratio = rep.sup_window / rep.u_ref;
            ++sum.finite_trials;
            sum.max_ratio = std::max(sum.max_ratio, rep.ratio);
            for (size_t q = 0; q < t0_grid.size(); ++q) {
                const double ur = ref_value(uv, nearest_time(t0_grid[q] + 4.0));
                if (ur > 1e-12 * std::max(gmax, 1.0))
                    sum.t0_trend[q].second =
                        std::max(sum.t0_trend[q].second, rep.sup_window / ur);
            }
        }
        sum.max_residual = std::max(sum.max_residual, rep.residual);
        sum.trials.push_back(rep);
    }
    return sum;
}

}  // namespace fracpar
