#include "fracpar/transference.hpp"

#include <cmath>

namespace fracpar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

OperatorSpec catalog_spec(OperatorKind kind, double alpha, double lambda_param) {
    OperatorSpec s;
    s.kind = kind;
    s.alpha = alpha;
    s.lambda_param = lambda_param;
    return s;
}

}  // namespace

std::vector<TransferMap> builtin_maps(double alpha, double lambda_param) {
    std::vector<TransferMap> maps;

    {
        TransferMap m;
        m.name = "hermite_to_ou";
        m.source = catalog_spec(OperatorKind::hermite_shifted, alpha, lambda_param);
        m.h = [](double x) { return x; };
        m.multiplier = [](double x) {
            return std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
        };
        m.target_measure = [](double x) { return std::exp(-x * x) / std::sqrt(kPi); };
        m.target_note = "Ornstein-Uhlenbeck operator, Gaussian measure";
        maps.push_back(std::move(m));
    }
    {
        TransferMap m;
        m.name = "laguerre_polynomial";
        m.source = catalog_spec(OperatorKind::laguerre, alpha, lambda_param);
        m.h = [](double x) { return x * x; };
        m.multiplier = [alpha](double x) {
            return std::sqrt(2.0) * std::pow(x, alpha + 0.5);
        };
        m.target_measure = [alpha](double x) { return std::pow(x, alpha); };
        m.target_note = "Laguerre expansion in x^2, measure x^alpha";
        maps.push_back(std::move(m));
    }
    {
        TransferMap m;
        m.name = "laguerre_halfline";
        m.source = catalog_spec(OperatorKind::laguerre, alpha, lambda_param);
        m.h = [](double x) { return x; };
        m.multiplier = [alpha](double x) { return std::pow(x, alpha + 0.5); };
        m.target_measure = [alpha](double x) { return std::pow(x, 2.0 * alpha + 1.0); };
        m.target_note = "half-line divergence form, measure x^{2 alpha + 1}";
        maps.push_back(std::move(m));
    }
    {
        TransferMap m;
        m.name = "laguerre_lebesgue";
        m.source = catalog_spec(OperatorKind::laguerre, alpha, lambda_param);
        m.h = [](double x) { return x * x; };
        m.multiplier = [](double x) { return std::sqrt(2.0) * std::sqrt(x); };
        m.target_measure = [](double) { return 1.0; };
        m.target_note = "square coordinate, Lebesgue measure";
        maps.push_back(std::move(m));
    }
    {
        TransferMap m;
        m.name = "laguerre_d";
        m.source = catalog_spec(OperatorKind::laguerre, alpha, lambda_param);
        m.h = [](double x) { return x * x; };
        m.multiplier = [alpha](double x) {
            return std::sqrt(2.0) * std::exp(-0.5 * x * x) * std::pow(x, alpha + 0.5);
        };
        m.eigen_shift = -(alpha + 1.0) / 2.0;
        m.target_measure = [alpha](double x) {
            return std::pow(x, alpha) * std::exp(-x);
        };
        m.target_note = "Laguerre differential operator, measure x^alpha e^{-x}";
        maps.push_back(std::move(m));
    }
    {
        TransferMap m;
        m.name = "ultraspherical_to_sine_weight";
        m.source = catalog_spec(OperatorKind::ultraspherical, alpha, lambda_param);
        m.h = [](double x) { return x; };
        m.multiplier = [lambda_param](double x) {
            return std::pow(std::sin(x), lambda_param);
        };
        m.target_measure = [lambda_param](double x) {
            return std::pow(std::sin(x), 2.0 * lambda_param);
        };
        m.target_note = "divergence form with weight sin^{2 lambda} x";
        maps.push_back(std::move(m));
    }
    {
        TransferMap m;
        m.name = "bessel_to_divergence";
        m.source = catalog_spec(OperatorKind::bessel, alpha, lambda_param);
        m.h = [](double x) { return x; };
        m.multiplier = [lambda_param](double x) { return std::pow(x, lambda_param); };
        m.target_measure = [lambda_param](double x) {
            return std::pow(x, 2.0 * lambda_param);
        };
        m.target_note = "divergence form with weight x^{2 lambda}";
        maps.push_back(std::move(m));
    }
    return maps;
}

const TransferMap& find_map(const std::vector<TransferMap>& maps,
                            const std::string& name) {
    for (const auto& m : maps)
        if (m.name == name) return m;
    throw std::invalid_argument("find_map: no transference pair named '" + name + "'");
}

EigenSystem transferred_eigensystem(const EigenSystem& src, const TransferMap& map) {
    const int N = src.grid_size();
    const int K = src.modes();
    EigenSystem t;
    t.spec.kind = OperatorKind::generic_divergence;
    t.spec.eta = map.target_measure;
    t.spec.a = [](double) { return 1.0; };
    t.spec.c = [](double) { return 0.0; };
    t.spec.ellipticity = 1.0;
    t.x.resize(N);
    t.w.resize(N);
    t.phi.resize(N, K);
    for (int j = 0; j < N; ++j) {
        t.x(j) = map.h(src.x(j));
        const double M = map.multiplier(src.x(j));
        if (!(std::isfinite(M)) || M == 0.0)
            throw std::domain_error("transferred_eigensystem: multiplier vanishes at a node");
        t.w(j) = M * M * src.w(j);
        for (int k = 0; k < K; ++k) t.phi(j, k) = src.phi(j, k) / M;
        if (j > 0 && !(t.x(j) > t.x(j - 1)))
            throw std::domain_error("transferred_eigensystem: h must be increasing");
    }
    t.lambda = src.lambda.array() + map.eigen_shift;
    t.zero_mean_mode = src.zero_mean_mode;
    t.eigen_shift = map.eigen_shift;
    t.spec.x_lo = t.x(0);
    t.spec.x_hi = t.x(N - 1);
    t.note = "transferred from " + std::string(kind_name(src.spec.kind)) + " via '" +
             map.name + "': " + map.target_note;
    return t;
}

Eigen::VectorXd push(const TransferMap& map, const EigenSystem& src,
                     const Eigen::VectorXd& f) {
    Eigen::VectorXd g(f.size());
    for (int j = 0; j < f.size(); ++j) g(j) = f(j) / map.multiplier(src.x(j));
    return g;
}

Eigen::VectorXd pull(const TransferMap& map, const EigenSystem& src,
                     const Eigen::VectorXd& g) {
    Eigen::VectorXd f(g.size());
    for (int j = 0; j < g.size(); ++j) f(j) = g(j) * map.multiplier(src.x(j));
    return f;
}

SpaceTimeField push(const TransferMap& map, const SpaceTimeField& u,
                    std::shared_ptr<const EigenSystem> target) {
    SpaceTimeField out(u.time, std::move(target));
    const EigenSystem& src = *u.space;
    for (int j = 0; j < src.grid_size(); ++j)
        out.values.col(j) = u.values.col(j) / map.multiplier(src.x(j));
    return out;
}

SpaceTimeField pull(const TransferMap& map, const SpaceTimeField& u,
                    std::shared_ptr<const EigenSystem> source) {
    SpaceTimeField out(u.time, source);
    for (int j = 0; j < source->grid_size(); ++j)
        out.values.col(j) = u.values.col(j) * map.multiplier(source->x(j));
    return out;
}

double verify_intertwine(std::shared_ptr<const EigenSystem> src,
                         const TransferMap& map, const FracOrder& s,
                         const TimeGrid& tg, std::mt19937& rng) {
    auto tgt = std::make_shared<const EigenSystem>(transferred_eigensystem(*src, map));
    const int K = src->modes();

    SpectralField uh = analyze(random_band_limited_field(tg, src, rng));
    // drop modes whose shifted symbol sits at the spectral origin
    for (int k = 0; k < K; ++k)
        if (std::abs(src->lambda(k) + map.eigen_shift) <= 1e-12)
            uh.coef(tg.origin_index(), k) = 0.0;
    SpaceTimeField u = synthesize(uh);
    uh = analyze(u);

    auto multiply = [&](SpectralField& c, const Eigen::VectorXd& lam) {
        for (int m = 0; m < tg.M; ++m)
            for (int k = 0; k < K; ++k) {
                const Complex sym(lam(k), tg.rho(m));
                c.coef(m, k) =
                    sym == Complex(0.0) ? Complex(0.0)
                                        : std::pow(sym, s.value()) * c.coef(m, k);
            }
    };

    // left side: through the transferred system
    SpectralField ph = analyze(push(map, u, tgt));
    multiply(ph, tgt->lambda);
    SpaceTimeField lhs = pull(map, synthesize(ph), src);

    // right side: the shifted source operator, entirely on the source grid
    SpectralField rh = uh;
    const Eigen::VectorXd shifted = src->lambda.array() + map.eigen_shift;
    multiply(rh, shifted);
    SpaceTimeField rhs = synthesize(rh);

    return (lhs.values - rhs.values).cwiseAbs().maxCoeff() /
           rhs.values.cwiseAbs().maxCoeff();
}

}  // namespace fracpar
