#ifndef URARQ_QUADRATURE_HPP
#define URARQ_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace urarq {

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_depth = 48;
    std::size_t max_evals = 200000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod abscissae on [-1,1], non-negative half.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Weights of the embedded 7-point Gauss rule (odd-index abscissae).
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
    int depth;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// One Gauss-Kronrod 7/15 pass over [a,b]. The error estimate follows the
// usual practice: the raw Gauss/Kronrod gap is damped through the scaled
// mean absolute deviation so smooth panels are not over-penalised.
template <typename F>
Panel gk15(F&& f, double a, double b, int depth) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    const double fc = f(centr);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = kWgk[7] * std::fabs(fc);

    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = hlgth * kXgk[j];
        fv1[j] = f(centr - dx);
        fv2[j] = f(centr + dx);
        const double fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    }

    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] *
                  (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    }

    const double ah = std::fabs(hlgth);
    resabs *= ah;
    resasc *= ah;
    double err = std::fabs(resk - resg) * ah;
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double epmach = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * epmach)) {
        err = std::max(epmach * 50.0 * resabs, err);
    }
    return Panel{a, b, resk * hlgth, err, depth};
}

} // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b]. Interior breakpoints
// seed the initial subdivision; panels are then refined worst-error first.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureOptions& opt = {},
                           const std::vector<double>& breakpoints = {}) {
    QuadratureResult out;
    if (!(a < b)) {
        out.converged = true;
        return out;
    }

    std::vector<double> edges;
    edges.push_back(a);
    for (double x : breakpoints) {
        if (x > a && x < b) edges.push_back(x);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    std::priority_queue<detail::Panel> panels;
    double total = 0.0;
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (edges[i] == edges[i + 1]) continue;
        detail::Panel p = detail::gk15(f, edges[i], edges[i + 1], 0);
        out.evaluations += 15;
        total += p.value;
        err_total += p.error;
        panels.push(p);
    }

    auto tolerance = [&] {
        return std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
    };

    while (err_total > tolerance() && !panels.empty()) {
        detail::Panel worst = panels.top();
        if (worst.depth >= opt.max_depth) break;
        if (out.evaluations + 30 > opt.max_evals) break;
        panels.pop();

        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break; // panel at fp resolution
        detail::Panel left = detail::gk15(f, worst.a, mid, worst.depth + 1);
        detail::Panel right = detail::gk15(f, mid, worst.b, worst.depth + 1);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        err_total += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    out.value = total;
    out.error = err_total;
    out.converged = err_total <= tolerance();
    return out;
}

} // namespace urarq

#endif
