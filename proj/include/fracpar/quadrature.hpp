#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "fracpar/common.hpp"

namespace fracpar {

inline double gk_norm(double v) { return std::abs(v); }
inline double gk_norm(const Complex& v) { return std::abs(v); }
template <class Derived>
double gk_norm(const Derived& v)
    requires requires(const Derived& d) { { d.norm() } -> std::convertible_to<double>; }
{
    return v.norm();
}

template <class Value>
struct IntegralResult {
    Value value;
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 abscissae and weights on [-1,1] (positive half).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGK7WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class Value>
struct Panel {
    IntegralResult<Value> result;
    double magnitude = 0.0;
    bool roundoff_limited = false;  // refinement cannot improve this panel
};

template <class Value, class F>
Panel<Value> gk15_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    Value fv[15];
    fv[7] = f(c);
    Value kronrod = kGK15WeightsK[7] * fv[7];
    Value gauss = kGK7WeightsG[3] * fv[7];
    double resabs = kGK15WeightsK[7] * gk_norm(fv[7]);
    for (int i = 0; i < 7; ++i) {
        const double x = h * kGK15Nodes[i];
        fv[i] = f(c - x);
        fv[14 - i] = f(c + x);
        Value fsum = fv[i] + fv[14 - i];
        kronrod = kronrod + kGK15WeightsK[i] * fsum;
        if (i % 2 == 1) gauss = gauss + kGK7WeightsG[i / 2] * fsum;
        resabs += kGK15WeightsK[i] * (gk_norm(fv[i]) + gk_norm(fv[14 - i]));
    }
    // resasc measures the variation of f about its panel mean; it is the scale
    // the QUADPACK error heuristic must be normalized by, or tiny-magnitude
    // integrands get accepted unresolved.
    Value mean = Value(0.5 * kronrod);
    double resasc = kGK15WeightsK[7] * gk_norm(Value(fv[7] - mean));
    for (int i = 0; i < 7; ++i)
        resasc += kGK15WeightsK[i] *
                  (gk_norm(Value(fv[i] - mean)) + gk_norm(Value(fv[14 - i] - mean)));
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    kronrod = h * kronrod;
    gauss = h * gauss;

    const double diff = gk_norm(Value(kronrod - gauss));
    double err = diff;
    if (resasc > 0.0 && diff > 0.0) {
        const double ratio = 200.0 * diff / resasc;
        if (ratio < 1.0) err = resasc * ratio * std::sqrt(ratio);
    }
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;

    Panel<Value> p;
    p.result.value = kronrod;
    p.result.error = std::max(err, floor);
    p.result.evaluations = 15;
    p.magnitude = gk_norm(kronrod);
    p.roundoff_limited = err <= floor;
    return p;
}

template <class Value, class F>
void gk_adapt(F&& f, double a, double b, double tol, int depth, int max_depth,
              IntegralResult<Value>& acc) {
    auto panel = gk15_panel<Value>(f, a, b);
    acc.evaluations += panel.result.evaluations;
    if (panel.result.error <= tol || panel.roundoff_limited || depth >= max_depth) {
        if (depth >= max_depth && panel.result.error > tol && !panel.roundoff_limited)
            acc.converged = false;
        acc.value = acc.value + panel.result.value;
        acc.error += panel.result.error;
        return;
    }
    const double c = 0.5 * (a + b);
    gk_adapt<Value>(f, a, c, 0.5 * tol, depth + 1, max_depth, acc);
    gk_adapt<Value>(f, c, b, 0.5 * tol, depth + 1, max_depth, acc);
}

}  // namespace detail

struct GKOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;  // absolute floor; 0 means purely relative
    int max_depth = 30;
    int initial_panels = 1;
    bool throw_on_failure = true;
};

// Adaptive Gauss-Kronrod 7-15 over [a,b]. Value may be double, Complex or an
// Eigen vector/matrix; the error is measured in gk_norm.
template <class Value, class F>
IntegralResult<Value> adaptive_gk(F&& f, double a, double b, const GKOptions& opt = {}) {
    const int panels = std::max(1, opt.initial_panels);
    const double w = (b - a) / panels;

    // First pass establishes the magnitude the relative tolerance refers to.
    std::vector<detail::Panel<Value>> first;
    first.reserve(panels);
    double mag = 0.0;
    long evals = 0;
    for (int p = 0; p < panels; ++p) {
        auto pan = detail::gk15_panel<Value>(f, a + p * w, a + (p + 1) * w);
        mag += pan.magnitude;
        evals += pan.result.evaluations;
        first.push_back(std::move(pan));
    }
    double tol = std::max(opt.abs_tol, opt.rel_tol * mag);
    if (tol <= 0.0) tol = 1e-300;

    IntegralResult<Value> acc;
    acc.value = Value(0.0 * first.front().result.value);
    acc.evaluations = evals;
    for (int p = 0; p < panels; ++p) {
        if (first[p].result.error <= tol / panels || first[p].roundoff_limited) {
            acc.value = acc.value + first[p].result.value;
            acc.error += first[p].result.error;
        } else {
            detail::gk_adapt<Value>(f, a + p * w, a + (p + 1) * w, tol / panels, 0,
                                    opt.max_depth, acc);
        }
    }
    if (!acc.converged && opt.throw_on_failure)
        throw AccuracyError("adaptive_gk: tolerance not reached", acc.error);
    return acc;
}

}  // namespace fracpar
