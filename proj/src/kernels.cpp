#include "fracpar/kernels.hpp"

#include <atomic>

namespace fracpar::kernels {

namespace {
std::atomic<bool> g_parallel{true};

template <class Mat>
Mat product_impl(const Mat& A, const Eigen::VectorXd& w, const Mat& B, bool omp) {
    const Eigen::Index p = A.rows(), q = A.cols(), r = B.cols();
    if (w.size() != q || B.rows() != q)
        throw std::invalid_argument("weighted_product: inner dimensions disagree");
    Mat C(p, r);
    // Entry-wise accumulation in a fixed order: the OpenMP split is over
    // independent output entries only, keeping serial/parallel bitwise equal.
#pragma omp parallel for collapse(2) schedule(static) if (omp)
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < r; ++j) {
            typename Mat::Scalar acc{};
            for (Eigen::Index k = 0; k < q; ++k) acc += A(i, k) * w(k) * B(k, j);
            C(i, j) = acc;
        }
    return C;
}

}  // namespace

bool parallel_enabled() { return g_parallel.load(); }
void set_parallel(bool on) { g_parallel.store(on); }

Eigen::MatrixXd weighted_product_serial(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                                        const Eigen::MatrixXd& B) {
    return product_impl(A, w, B, false);
}
Eigen::MatrixXd weighted_product_omp(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                                     const Eigen::MatrixXd& B) {
    return product_impl(A, w, B, true);
}
Eigen::MatrixXd weighted_product(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                                 const Eigen::MatrixXd& B) {
    return product_impl(A, w, B, g_parallel.load());
}

Eigen::MatrixXcd weighted_product_serial(const Eigen::MatrixXcd& A, const Eigen::VectorXd& w,
                                         const Eigen::MatrixXcd& B) {
    return product_impl(A, w, B, false);
}
Eigen::MatrixXcd weighted_product_omp(const Eigen::MatrixXcd& A, const Eigen::VectorXd& w,
                                      const Eigen::MatrixXcd& B) {
    return product_impl(A, w, B, true);
}
Eigen::MatrixXcd weighted_product(const Eigen::MatrixXcd& A, const Eigen::VectorXd& w,
                                  const Eigen::MatrixXcd& B) {
    return product_impl(A, w, B, g_parallel.load());
}

}  // namespace fracpar::kernels
