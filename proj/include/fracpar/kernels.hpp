#pragma once

#include <Eigen/Dense>
#include <complex>

namespace fracpar::kernels {

// Runtime switch between the serial reference kernels and the OpenMP ones.
// Both compute every output entry with the same fixed summation order, so the
// results are bitwise identical; the tests assert exactly that.
bool parallel_enabled();
void set_parallel(bool on);

// C = A * diag(w) * B, the workhorse behind eigen-expansions, heat-kernel
// assembly, time transforms and the dense H^s matrix.
Eigen::MatrixXd weighted_product_serial(const Eigen::MatrixXd& A,
                                        const Eigen::VectorXd& w,
                                        const Eigen::MatrixXd& B);
Eigen::MatrixXd weighted_product_omp(const Eigen::MatrixXd& A,
                                     const Eigen::VectorXd& w,
                                     const Eigen::MatrixXd& B);
Eigen::MatrixXd weighted_product(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                                 const Eigen::MatrixXd& B);

Eigen::MatrixXcd weighted_product_serial(const Eigen::MatrixXcd& A,
                                         const Eigen::VectorXd& w,
                                         const Eigen::MatrixXcd& B);
Eigen::MatrixXcd weighted_product_omp(const Eigen::MatrixXcd& A,
                                      const Eigen::VectorXd& w,
                                      const Eigen::MatrixXcd& B);
Eigen::MatrixXcd weighted_product(const Eigen::MatrixXcd& A, const Eigen::VectorXd& w,
                                  const Eigen::MatrixXcd& B);

}  // namespace fracpar::kernels
