#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "fracpar/common.hpp"

namespace fracpar {

enum class OperatorKind {
    interval_dirichlet,
    interval_neumann,
    hermite,
    hermite_shifted,
    laguerre,
    ultraspherical,
    bessel,
    generic_divergence,
};

const char* kind_name(OperatorKind k);
OperatorKind kind_from_name(const std::string& name);

// One operator of the catalog. Domain [x_lo, x_hi] defaults per kind when left
// at (0,0); unbounded domains are truncated with Dirichlet conditions at a
// radius where the lowest modes have decayed below 1e-10.
struct OperatorSpec {
    OperatorKind kind = OperatorKind::interval_dirichlet;
    double alpha = 1.5;         // laguerre parameter, > -1
    double lambda_param = 3.0;  // ultraspherical / bessel parameter, > 0
    double x_lo = 0.0, x_hi = 0.0;

    // generic_divergence data: bilinear form int (a u'v' + c uv) eta dx.
    std::function<double(double)> a, c, eta;
    double ellipticity = 0.0;  // Lambda with 1/Lambda <= a <= Lambda

    void validate() const;
};

struct EigenSystem {
    OperatorSpec spec;
    Eigen::VectorXd x;       // N strictly increasing nodes
    Eigen::VectorXd w;       // quadrature weights incl. the measure density
    Eigen::VectorXd lambda;  // K nonnegative sorted eigenvalues
    Eigen::MatrixXd phi;     // N x K eigenfunction samples, w-orthonormal
    bool zero_mean_mode = false;
    double eigen_shift = 0.0;  // transference metadata (already in lambda)
    std::string note;          // classical-value metadata, truncation record

    int modes() const { return static_cast<int>(lambda.size()); }
    int grid_size() const { return static_cast<int>(x.size()); }
};

// Analytic eigenpairs where classical, symmetric Galerkin discretization
// otherwise (sine basis for Lebesgue measure, discrete orthogonal polynomials
// for weighted measures). Requires K <= N/4.
EigenSystem build_eigensystem(const OperatorSpec& spec, int K, int N);

// W_tau(x_i,x_j) over retained modes; tail_bound receives e^{-tau lambda_{K-1}}*K.
Eigen::MatrixXd heat_kernel(const EigenSystem& es, double tau,
                            double* tail_bound = nullptr);

// c_k = sum_j f(x_j) phi_k(x_j) w_j; zero-mean fields are projected first when
// the constant mode was dropped (projected mass reported if requested).
Eigen::VectorXd expand(const EigenSystem& es, const Eigen::VectorXd& f,
                       double* projected_mean = nullptr);
Eigen::VectorXd synthesize(const EigenSystem& es, const Eigen::VectorXd& coef);

// e^{-tau L}1(x) with the constant mode restored where it was dropped.
Eigen::VectorXd semigroup_mass(const EigenSystem& es, double tau);

}  // namespace fracpar
