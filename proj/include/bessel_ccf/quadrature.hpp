#pragma once
//
// General-purpose quadrature used by the oracle: adaptive Gauss-Kronrod
// (7/15 points) for smooth panels and a double-exponential rule for
// segments carrying an algebraic endpoint singularity.
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "errors.hpp"

namespace bessel_ccf::quadrature {

struct Estimate {
    double value = 0.0;
    double err = 0.0;
    double abs_value = 0.0;  ///< integral of |g|, for relative tolerances
};

namespace detail {

// QUADPACK qk15 abscissae and weights.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Estimate gk15(const F& g, double a, double b) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a), ah = std::abs(h);
    double fc = g(c);
    double resg = fc * wg[3], resk = fc * wgk[7], resabs = std::abs(resk);
    double f1[7], f2[7];
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        f1[j] = g(c - dx);
        f2[j] = g(c + dx);
        double s = f1[j] + f2[j];
        resk += wgk[j] * s;
        resabs += wgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += wg[j / 2] * s;
    }
    double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    resk *= h;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg * h));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {resk, err, resabs};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod on [a, b] until err <= rel_tol * int|g|.
/// Throws convergence_error when more than max_intervals pieces are needed.
template <class F>
Estimate adaptive_gk(const F& g, double a, double b, double rel_tol, int max_intervals) {
    struct Piece {
        double a, b;
        Estimate e;
        bool operator<(const Piece& o) const { return e.err < o.e.err; }
    };
    const double eps = std::numeric_limits<double>::epsilon();
    std::priority_queue<Piece> heap;
    Estimate first = detail::gk15(g, a, b);
    heap.push({a, b, first});
    Estimate total = first;
    int count = 1;
    auto target = [&] { return std::max(rel_tol, 100.0 * eps) * total.abs_value; };
    while (total.err > target()) {
        if (count >= max_intervals)
            throw convergence_error("adaptive Gauss-Kronrod: interval budget exhausted", total.err);
        Piece p = heap.top();
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        Estimate l = detail::gk15(g, p.a, m), r = detail::gk15(g, m, p.b);
        total.value += l.value + r.value - p.e.value;
        total.err += l.err + r.err - p.e.err;
        total.abs_value += l.abs_value + r.abs_value - p.e.abs_value;
        heap.push({p.a, m, l});
        heap.push({m, p.b, r});
        ++count;
    }
    // Rebuild the sums from the pieces to shed the running-update rounding.
    total = {};
    while (!heap.empty()) {
        const auto& p = heap.top();
        total.value += p.e.value;
        total.err += p.e.err;
        total.abs_value += p.e.abs_value;
        heap.pop();
    }
    return total;
}

/// int_0^h s^gamma psi(s) ds, gamma > -1, psi bounded near s = 0.
///
/// The substitution t = s^(gamma+1) removes the algebraic factor; the
/// remaining integral over [0, h^(gamma+1)] goes to tanh-sinh, which is
/// indifferent to the leftover endpoint non-smoothness of psi(t^(1/(gamma+1))).
/// `psi` receives the distance s from the singular endpoint.
template <class F>
Estimate singular_endpoint(const F& psi, double gamma, double h, double rel_tol, int max_level = 12) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double g1 = gamma + 1.0;
    const double H = std::pow(h, g1);
    const double tau_max = 3.6;
    auto s_of = [&](double t) { return std::min(h, std::pow(t, 1.0 / g1)); };

    // Trapezoidal sum over nodes tau = j * step for the j in `which`.
    auto level_sum = [&](double step, bool odd_only, double& abs_acc) {
        double acc = 0.0;
        int jmax = static_cast<int>(tau_max / step);
        for (int j = odd_only ? 1 : 0; j <= jmax; j += odd_only ? 2 : 1) {
            double tau = j * step;
            double u = 0.5 * std::numbers::pi * std::sinh(tau);
            double e = std::exp(-2.0 * u);
            double d = H * e / (1.0 + e);  // distance of the node from the nearer end
            double w = H * std::numbers::pi * std::cosh(tau) * e / ((1.0 + e) * (1.0 + e));
            if (d <= 0.0 || w == 0.0) continue;
            double lo = psi(s_of(d));
            double contrib = w * lo;
            double cabs = w * std::abs(lo);
            if (j != 0) {
                double hi = psi(s_of(H - d));
                contrib += w * hi;
                cabs += w * std::abs(hi);
            }
            acc += contrib;
            abs_acc += cabs;
        }
        return acc;
    };

    double step = 1.0, abs_sum = 0.0;
    // tau = 0 node has weight H pi / 4 (the d = H/2 midpoint); handled by j == 0 above.
    double sum = level_sum(step, false, abs_sum);
    double prev = sum * step, cur = prev;
    for (int level = 1; level <= max_level; ++level) {
        step *= 0.5;
        double abs_new = 0.0;
        double add = level_sum(step, true, abs_new);
        sum += add;
        abs_sum += abs_new;
        cur = sum * step;
        double diff = std::abs(cur - prev);
        double scale = abs_sum * step;
        if (level >= 3 && diff <= std::max(rel_tol, 10.0 * eps) * scale) {
            return {cur / g1, std::max(diff, 10.0 * eps * scale) / g1, scale / g1};
        }
        prev = cur;
    }
    throw convergence_error("tanh-sinh: level cap reached", std::abs(cur - prev) / g1);
}

}  // namespace bessel_ccf::quadrature
