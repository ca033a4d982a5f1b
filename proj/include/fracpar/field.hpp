#pragma once

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <vector>

#include "fracpar/common.hpp"
#include "fracpar/eigensystem.hpp"

namespace fracpar {

// Uniform periodic time grid on [0,T): t_i = i*dt, dual frequencies
// rho_m = 2*pi*m/T for m = -M/2 .. M/2-1 stored at index m + M/2.
struct TimeGrid {
    int M;
    double T;

    TimeGrid(int M_, double T_) : M(M_), T(T_) {
        if (M < 16 || M % 2 != 0)
            throw std::domain_error("TimeGrid: M must be even and >= 16");
        if (!(T > 0.0)) throw std::domain_error("TimeGrid: T must be positive");
    }
    double dt() const { return T / M; }
    double drho() const { return 2.0 * 3.141592653589793238462643383279502884 / T; }
    double t(int i) const { return i * dt(); }
    // Frequency for storage index j in [0, M): rho = drho * (j - M/2).
    double rho(int j) const { return drho() * (j - M / 2); }
    int origin_index() const { return M / 2; }  // rho = 0 row
    bool operator==(const TimeGrid& o) const { return M == o.M && T == o.T; }
};

// A space-time field sampled on the tensor grid: values(i,j) = u(t_i, x_j).
// Real-valued fields are stored with zero imaginary part.
struct SpaceTimeField {
    TimeGrid time;
    std::shared_ptr<const EigenSystem> space;
    Eigen::MatrixXcd values;  // M x N

    SpaceTimeField(TimeGrid tg, std::shared_ptr<const EigenSystem> es)
        : time(tg), space(std::move(es)) {
        if (!space) throw std::domain_error("SpaceTimeField: null eigensystem");
        values = Eigen::MatrixXcd::Zero(time.M, space->grid_size());
    }

    double max_imag() const { return values.imag().cwiseAbs().maxCoeff(); }
    Eigen::MatrixXd real_values() const { return values.real(); }
};

// Joint spectral coefficients: coef(m,k) multiplies e^{i rho_m t} phi_k(x)
// under the unitary normalization used by analyze/synthesize. s_applied
// records the fractional orders applied so far (for composition bookkeeping).
struct SpectralField {
    TimeGrid time;
    std::shared_ptr<const EigenSystem> space;
    Eigen::MatrixXcd coef;  // M x K
    std::vector<double> s_applied;

    SpectralField(TimeGrid tg, std::shared_ptr<const EigenSystem> es)
        : time(tg), space(std::move(es)) {
        if (!space) throw std::domain_error("SpectralField: null eigensystem");
        coef = Eigen::MatrixXcd::Zero(time.M, space->modes());
    }

    Complex symbol(int m, int k) const {
        return Complex(space->lambda(k), time.rho(m));
    }
};

// Forward transform: coef(m,k) = (dt/sqrt(2 pi)) sum_{i,j} u(t_i,x_j)
// e^{-i rho_m t_i} phi_k(x_j) w_j. Unitary against synthesize.
SpectralField analyze(const SpaceTimeField& u);

// Inverse transform: u(t_i,x_j) = (drho/sqrt(2 pi)) sum_{m,k} coef(m,k)
// e^{i rho_m t_i} phi_k(x_j).
SpaceTimeField synthesize(const SpectralField& c);

// Parseval inner product sum_{i,j} dt w_j u conj(v) of two fields on the same
// grids.
Complex field_inner(const SpaceTimeField& u, const SpaceTimeField& v);

// Random real band-limited field: independent Gaussian coefficients on modes
// with |m| <= M/4 (Nyquist row excluded) and k < K, conjugate-paired in m so
// the field is real; the (rho=0, lambda=0) coefficient is always zeroed so
// fractional powers are defined.
SpaceTimeField random_band_limited_field(const TimeGrid& tg,
                                         std::shared_ptr<const EigenSystem> es,
                                         std::mt19937& rng);

}  // namespace fracpar
