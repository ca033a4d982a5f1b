#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <set>

#include "fracpar/transference.hpp"

using namespace fracpar;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

int source_grid_size(const TransferMap& map) {
    return map.source.kind == OperatorKind::hermite_shifted ? 400 : 256;
}

std::shared_ptr<const EigenSystem> build_source(const TransferMap& map, int K) {
    return std::make_shared<const EigenSystem>(
        build_eigensystem(map.source, K, source_grid_size(map)));
}

double gram_error(const EigenSystem& es) {
    Eigen::MatrixXd G = es.phi.transpose() * es.w.asDiagonal() * es.phi;
    return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("catalog: seven uniquely named pairs, lookup works") {
    auto maps = builtin_maps();
    CHECK(maps.size() == 7);
    std::set<std::string> names;
    for (const auto& m : maps) names.insert(m.name);
    CHECK(names.size() == 7);
    CHECK(find_map(maps, "laguerre_d").eigen_shift == doctest::Approx(-1.25));
    CHECK_THROWS_AS(find_map(maps, "nope"), std::invalid_argument);
}

TEST_CASE("transferred systems stay orthonormal with shifted spectra") {
    for (const auto& map : builtin_maps()) {
        CAPTURE(map.name);
        auto src = build_source(map, 12);
        EigenSystem tgt = transferred_eigensystem(*src, map);
        CHECK(gram_error(tgt) < 1e-10);
        for (int k = 0; k < 12; ++k)
            CHECK(tgt.lambda(k) ==
                  doctest::Approx(src->lambda(k) + map.eigen_shift).epsilon(1e-14));
        CHECK(tgt.note.find(map.name) != std::string::npos);
        // transferred weights match the advertised target measure up to the
        // (common) Jacobian factor: w_tilde / w = M^2
        for (int j = 0; j < src->grid_size(); ++j) {
            const double M = map.multiplier(src->x(j));
            CHECK(tgt.w(j) == doctest::Approx(M * M * src->w(j)).epsilon(1e-14));
        }
    }
}

TEST_CASE("push/pull are exact diagonal isometries") {
    auto maps = builtin_maps();
    const auto& map = find_map(maps, "laguerre_halfline");
    auto src = build_source(map, 8);
    EigenSystem tgt = transferred_eigensystem(*src, map);

    std::mt19937 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd f(src->grid_size()), g(src->grid_size());
    for (int j = 0; j < f.size(); ++j) {
        f(j) = gauss(rng);
        g(j) = gauss(rng);
    }
    // pull o push is the identity up to one rounding each way
    Eigen::VectorXd round = pull(map, *src, push(map, *src, f));
    CHECK((round - f).cwiseAbs().maxCoeff() < 1e-14 * f.cwiseAbs().maxCoeff());
    // the L2 pairing is invariant
    const double src_pair = (f.array() * g.array() * src->w.array()).sum();
    const double tgt_pair = (push(map, *src, f).array() * push(map, *src, g).array() *
                             tgt.w.array())
                                .sum();
    CHECK(std::abs(tgt_pair - src_pair) < 1e-13 * std::abs(src_pair));
}

TEST_CASE("intertwining of fractional powers across all seven pairs") {
    TimeGrid tg(16, 4.0);
    for (const auto& map : builtin_maps()) {
        CAPTURE(map.name);
        auto src = build_source(map, 8);
        std::mt19937 rng(101);
        for (double sv : {0.1, 0.5, 0.9}) {
            CAPTURE(sv);
            CHECK(verify_intertwine(src, map, FracOrder(sv), tg, rng) < 1e-9);
        }
    }
}

TEST_CASE("independent discretization of the Ornstein-Uhlenbeck target") {
    auto maps = builtin_maps();
    const auto& map = find_map(maps, "hermite_to_ou");
    auto src = build_source(map, 16);
    EigenSystem tgt = transferred_eigensystem(*src, map);  // lambda = 2k exactly

    OperatorSpec ou;
    ou.kind = OperatorKind::generic_divergence;
    ou.x_lo = -10.0;
    ou.x_hi = 10.0;
    ou.a = [](double) { return 1.0; };
    ou.c = [](double) { return 0.0; };
    ou.eta = [](double x) { return std::exp(-x * x) / std::sqrt(kPi); };
    ou.ellipticity = 1.0;
    EigenSystem indep = build_eigensystem(ou, 16, 256);

    for (int k = 0; k < 4; ++k)  // lowest K/4 modes
        CHECK(std::abs(indep.lambda(k) - tgt.lambda(k)) < 1e-6);
}

TEST_CASE("independent discretization of the Bessel divergence-form target") {
    auto maps = builtin_maps(1.5, 3.0);
    const auto& map = find_map(maps, "bessel_to_divergence");
    auto src = build_source(map, 16);
    EigenSystem tgt = transferred_eigensystem(*src, map);

    OperatorSpec div;
    div.kind = OperatorKind::generic_divergence;
    div.x_lo = src->x(0) > 0.0 ? 0.0 : src->x(0);
    div.x_lo = 0.0;
    div.x_hi = src->spec.x_hi == 0.0 ? 20.0 : src->spec.x_hi;
    div.a = [](double) { return 1.0; };
    div.c = [](double) { return 0.0; };
    div.eta = [](double x) { return std::pow(x, 6.0); };  // x^{2 lambda}, lambda = 3
    div.ellipticity = 1.0;
    EigenSystem indep = build_eigensystem(div, 16, 256);

    for (int k = 0; k < 4; ++k)
        CHECK(std::abs(indep.lambda(k) - tgt.lambda(k)) < 1e-6);
}
