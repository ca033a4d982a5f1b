// Serial reference kernels vs the OpenMP ones, plus one end-to-end assembly
// benchmark. Both kernel variants use the same summation order, so this is a
// pure scheduling comparison at identical numerics.
#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "fracpar/eigensystem.hpp"
#include "fracpar/harness.hpp"
#include "fracpar/kernels.hpp"

namespace {

using fracpar::kernels::set_parallel;
using fracpar::kernels::weighted_product_omp;
using fracpar::kernels::weighted_product_serial;

struct Problem {
    Eigen::MatrixXd A, B;
    Eigen::VectorXd w;
};

Problem make_problem(int n) {
    std::mt19937 rng(42);
    std::normal_distribution<double> gauss;
    Problem p;
    p.A = Eigen::MatrixXd::NullaryExpr(n, n, [&]() { return gauss(rng); });
    p.B = Eigen::MatrixXd::NullaryExpr(n, n, [&]() { return gauss(rng); });
    p.w = Eigen::VectorXd::NullaryExpr(n, [&]() { return 1.0 + std::abs(gauss(rng)); });
    return p;
}

void BM_weighted_product_serial(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Eigen::MatrixXd C = weighted_product_serial(p.A, p.w, p.B);
        benchmark::DoNotOptimize(C.data());
    }
}

void BM_weighted_product_omp(benchmark::State& state) {
    const Problem p = make_problem(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Eigen::MatrixXd C = weighted_product_omp(p.A, p.w, p.B);
        benchmark::DoNotOptimize(C.data());
    }
}

Eigen::MatrixXcd make_complex(const Eigen::MatrixXd& re, const Eigen::MatrixXd& im) {
    return re.cast<std::complex<double>>() +
           std::complex<double>(0.0, 1.0) * im.cast<std::complex<double>>();
}

void BM_weighted_product_complex_serial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Problem p = make_problem(n), q = make_problem(n);
    const Eigen::MatrixXcd A = make_complex(p.A, q.A), B = make_complex(p.B, q.B);
    for (auto _ : state) {
        Eigen::MatrixXcd C = weighted_product_serial(A, p.w, B);
        benchmark::DoNotOptimize(C.data());
    }
}

void BM_weighted_product_complex_omp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Problem p = make_problem(n), q = make_problem(n);
    const Eigen::MatrixXcd A = make_complex(p.A, q.A), B = make_complex(p.B, q.B);
    for (auto _ : state) {
        Eigen::MatrixXcd C = weighted_product_omp(A, p.w, B);
        benchmark::DoNotOptimize(C.data());
    }
}

// End-to-end: dense H^s lattice matrix assembly (the heaviest harness step),
// with the kernel dispatch forced serial vs parallel.
void BM_assemble_hs_matrix(benchmark::State& state) {
    const bool parallel = state.range(0) != 0;
    fracpar::OperatorSpec spec;
    spec.kind = fracpar::OperatorKind::interval_dirichlet;
    const fracpar::EigenSystem es = fracpar::build_eigensystem(spec, 16, 64);
    const fracpar::TimeGrid tg(32, 4.0);
    set_parallel(parallel);
    for (auto _ : state) {
        Eigen::MatrixXd A =
            fracpar::assemble_hs_matrix(es, tg, fracpar::FracOrder(0.5));
        benchmark::DoNotOptimize(A.data());
    }
    set_parallel(true);
    state.SetLabel(parallel ? "omp" : "serial");
}

}  // namespace

BENCHMARK(BM_weighted_product_serial)->Arg(128)->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(BM_weighted_product_omp)->Arg(128)->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(BM_weighted_product_complex_serial)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_weighted_product_complex_omp)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_assemble_hs_matrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
