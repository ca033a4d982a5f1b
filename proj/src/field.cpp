#include "fracpar/field.hpp"

#include <cmath>

#include "fracpar/kernels.hpp"

namespace fracpar {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Eigen::MatrixXcd forward_dft(const TimeGrid& tg) {
    const double scale = tg.dt() / std::sqrt(2.0 * kPi);
    Eigen::MatrixXcd F(tg.M, tg.M);
    for (int m = 0; m < tg.M; ++m)
        for (int i = 0; i < tg.M; ++i)
            F(m, i) = scale * std::exp(Complex(0.0, -tg.rho(m) * tg.t(i)));
    return F;
}

Eigen::MatrixXcd inverse_dft(const TimeGrid& tg) {
    const double scale = tg.drho() / std::sqrt(2.0 * kPi);
    Eigen::MatrixXcd F(tg.M, tg.M);
    for (int i = 0; i < tg.M; ++i)
        for (int m = 0; m < tg.M; ++m)
            F(i, m) = scale * std::exp(Complex(0.0, tg.rho(m) * tg.t(i)));
    return F;
}

void require_compatible(const SpaceTimeField& u, const SpaceTimeField& v) {
    if (!(u.time == v.time) || u.space != v.space)
        throw std::domain_error("fields must share the time grid and eigensystem");
}

}  // namespace

SpectralField analyze(const SpaceTimeField& u) {
    SpectralField out(u.time, u.space);
    const Eigen::MatrixXcd phi_c = u.space->phi.cast<Complex>();
    Eigen::MatrixXcd stage = kernels::weighted_product(u.values, u.space->w, phi_c);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(u.time.M);
    out.coef = kernels::weighted_product(forward_dft(u.time), ones, stage);
    return out;
}

SpaceTimeField synthesize(const SpectralField& c) {
    SpaceTimeField out(c.time, c.space);
    const Eigen::VectorXd ones_m = Eigen::VectorXd::Ones(c.time.M);
    Eigen::MatrixXcd stage = kernels::weighted_product(inverse_dft(c.time), ones_m, c.coef);
    const Eigen::MatrixXcd phi_t = c.space->phi.transpose().cast<Complex>();
    const Eigen::VectorXd ones_k = Eigen::VectorXd::Ones(c.space->modes());
    out.values = kernels::weighted_product(stage, ones_k, phi_t);
    return out;
}

Complex field_inner(const SpaceTimeField& u, const SpaceTimeField& v) {
    require_compatible(u, v);
    const double dt = u.time.dt();
    Complex sum = 0.0;
    for (int i = 0; i < u.time.M; ++i)
        for (int j = 0; j < u.space->grid_size(); ++j)
            sum += dt * u.space->w(j) * u.values(i, j) * std::conj(v.values(i, j));
    return sum;
}

SpaceTimeField random_band_limited_field(const TimeGrid& tg,
                                         std::shared_ptr<const EigenSystem> es,
                                         std::mt19937& rng) {
    SpectralField c(tg, es);
    std::normal_distribution<double> gauss;
    const int half = tg.M / 2;
    const int band = tg.M / 4;
    const int K = es->modes();
    for (int dm = 1; dm <= band; ++dm)
        for (int k = 0; k < K; ++k) {
            const Complex z(gauss(rng), gauss(rng));
            c.coef(half + dm, k) = z * std::sqrt(0.5);
            c.coef(half - dm, k) = std::conj(z) * std::sqrt(0.5);
        }
    for (int k = 0; k < K; ++k)
        c.coef(half, k) = es->lambda(k) > 1e-12 ? Complex(gauss(rng), 0.0) : Complex(0.0);

    SpaceTimeField f = synthesize(c);
    f.values = f.values.real().cast<Complex>();  // conjugate pairing: imag is roundoff
    return f;
}

}  // namespace fracpar
