#pragma once

#include "fracpar/field.hpp"

namespace fracpar {

// One transference pair: the target operator is conjugate to the (possibly
// shifted) source operator under f -> multiplier * (f o h). Eigenvalues copy
// over with eigen_shift added; eigenfunctions divide by the multiplier and
// move to the coordinate h(x); quadrature weights pick up multiplier^2 (the
// Jacobian is absorbed by keeping the sample indices).
struct TransferMap {
    std::string name;
    OperatorSpec source;
    std::function<double(double)> h;           // coordinate change, increasing
    std::function<double(double)> multiplier;  // M(x), nonzero on the open domain
    double eigen_shift = 0.0;                  // target lambda = lambda + shift
    std::function<double(double)> target_measure;  // density in target coordinate
    std::string target_note;
};

// The built-in catalog of seven pairs (Hermite -> Ornstein-Uhlenbeck, four
// Laguerre reductions, ultraspherical -> trigonometric weight, Bessel ->
// divergence form x^{2 lambda}).
std::vector<TransferMap> builtin_maps(double alpha = 1.5, double lambda_param = 3.0);
const TransferMap& find_map(const std::vector<TransferMap>& maps,
                            const std::string& name);

// Discrete transferred eigensystem: nodes h(x_j), weights M^2 w, samples
// phi/M, eigenvalues shifted. Stays w-orthonormal exactly.
EigenSystem transferred_eigensystem(const EigenSystem& src, const TransferMap& map);

// Diagonal push (source -> target, divide by M) and pull (multiply by M) on
// sample vectors; exact inverses of each other.
Eigen::VectorXd push(const TransferMap& map, const EigenSystem& src,
                     const Eigen::VectorXd& f);
Eigen::VectorXd pull(const TransferMap& map, const EigenSystem& src,
                     const Eigen::VectorXd& g);

SpaceTimeField push(const TransferMap& map, const SpaceTimeField& u,
                    std::shared_ptr<const EigenSystem> target);
SpaceTimeField pull(const TransferMap& map, const SpaceTimeField& u,
                    std::shared_ptr<const EigenSystem> source);

// Checks H_target^s (push u) = push ((H_source + shift)^s u) on a random
// band-limited field, both sides through their own grids and transforms.
// Returns the maximum relative deviation.
double verify_intertwine(std::shared_ptr<const EigenSystem> src,
                         const TransferMap& map, const FracOrder& s,
                         const TimeGrid& tg, std::mt19937& rng);

}  // namespace fracpar
