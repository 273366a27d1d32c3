#pragma once
//
// Brute-force reference values for I[f] and for individual modified moments.
//
// Deliberately independent of the moment engine and the CCF rule: it only
// samples the integrand. Panels follow the oscillation of the kernel, the two
// end panels absorb the algebraic endpoint factors, interior panels use
// adaptive Gauss-Kronrod, and panel values are summed in ExtendedReal.
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "chebfit.hpp"
#include "errors.hpp"
#include "extended_real.hpp"
#include "problem.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace bessel_ccf {

struct OracleConfig {
    double rel_tol = 1e-12;
    int max_panels = 256;  ///< adaptive pieces allowed inside one oscillation panel
    mpfr_prec_t precision_bits = 192;

    void validate() const {
        if (!(rel_tol >= 1e-14)) throw parameter_error("OracleConfig: rel_tol must be >= 1e-14");
        if (max_panels < 4) throw parameter_error("OracleConfig: max_panels must be >= 4");
    }
};

struct OracleValue {
    double value = 0.0;
    double err_est = 0.0;
};

namespace oracle_detail {

/// Positive zeros of J_nu in (0, zmax): McMahon's estimate, then bisection on
/// bessel_j where the estimate brackets a sign change.
inline std::vector<double> bessel_zeros(double nu, double zmax) {
    std::vector<double> z;
    const double mu = 4.0 * nu * nu;
    for (int s = 1;; ++s) {
        double b = (s + 0.5 * nu - 0.25) * std::numbers::pi;
        double e = b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * std::pow(8.0 * b, 3));
        if (!(e > 0.0)) e = b;
        if (e >= zmax + 2.0) break;
        double lo = e - 0.6, hi = e + 0.6;
        if (lo > 0.0) {
            double flo = bessel_j(nu, lo), fhi = bessel_j(nu, hi);
            if ((flo < 0.0) != (fhi < 0.0)) {
                for (int it = 0; it < 60; ++it) {
                    double m = 0.5 * (lo + hi);
                    double fm = bessel_j(nu, m);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = m;
                        flo = fm;
                    } else {
                        hi = m;
                    }
                }
                e = 0.5 * (lo + hi);
            }
        }
        if (e > 0.0 && e < zmax) z.push_back(e);
    }
    std::sort(z.begin(), z.end());
    return z;
}

/// Sorted, de-duplicated interior cut points, none closer than `min_gap` to
/// each other or to the ends of [a, b].
inline std::vector<double> clean_cuts(std::vector<double> cuts, double a, double b, double min_gap) {
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out;
    double last = a;
    for (double c : cuts) {
        if (c - last < min_gap || b - c < min_gap) continue;
        out.push_back(c);
        last = c;
    }
    return out;
}

/// Integrates over [a, b] cut at `cuts`: the first panel carries
/// (x - a)^ga * left_psi, the last (b - x)^gb * right_psi, the rest g.
/// Panel values are accumulated in ascending order in ExtendedReal.
template <class G, class L, class R>
OracleValue panel_integrate(const G& g, const L& left_psi, double ga, const R& right_psi, double gb,
                            double a, double b, std::vector<double> cuts, const OracleConfig& cfg) {
    if (cuts.empty()) cuts.push_back(0.5 * (a + b));
    std::vector<double> edges;
    edges.push_back(a);
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(b);

    ExtendedReal sum(cfg.precision_bits);
    double err = 0.0;
    const size_t n = edges.size() - 1;
    for (size_t i = 0; i < n; ++i) {
        quadrature::Estimate e;
        double lo = edges[i], hi = edges[i + 1];
        if (i == 0)
            e = quadrature::singular_endpoint(left_psi, ga, hi - lo, cfg.rel_tol);
        else if (i == n - 1)
            e = quadrature::singular_endpoint(right_psi, gb, hi - lo, cfg.rel_tol);
        else
            e = quadrature::adaptive_gk(g, lo, hi, cfg.rel_tol, cfg.max_panels);
        sum += ExtendedReal(e.value, cfg.precision_bits);
        err += e.err;
    }
    return {sum.to_double(), err};
}

// sin(s)/s, accurate as s -> 0.
inline double sinc(double s) {
    if (std::abs(s) < 1e-4) return 1.0 - s * s / 6.0;
    return std::sin(s) / s;
}

// T_k(1 - 2u) by Reinsch's form of the recurrence, carried in the
// differences T_j - T_{j-1}; stays accurate as u -> 0 where the plain
// recurrence in y = 1 - 2u loses the low bits of u.
inline double chebyshev_near_one(int k, double u) {
    if (k == 0) return 1.0;
    double t = 1.0, d = -2.0 * u;
    t += d;
    for (int j = 1; j < k; ++j) {
        d -= 4.0 * u * t;
        t += d;
    }
    return t;
}

// x-domain integral of x^alpha (1-x)^beta h(x) J_nu(omega x) over [0, 1].
// The end panels see h through h_left(s) = h(s) and h_right(s) = h(1 - s),
// so the distance to the endpoint reaches h unrounded.
inline OracleValue x_domain(const ProblemSpec& spec, const std::function<double(double)>& h,
                            const std::function<double(double)>& h_left,
                            const std::function<double(double)>& h_right, const std::vector<double>& extra_cuts,
                            const OracleConfig& cfg) {
    const double al = spec.alpha, be = spec.beta, nu = spec.nu, w = spec.omega;
    auto kernel = [nu, w](double x) { return bessel_j(nu, w * x); };
    auto g = [&](double x) { return std::pow(x, al) * std::pow(1.0 - x, be) * h(x) * kernel(x); };
    auto left = [&](double s) { return std::pow(1.0 - s, be) * h_left(s) * kernel(s); };
    auto right = [&](double s) {
        double x = 1.0 - s;
        return std::pow(x, al) * h_right(s) * kernel(x);
    };
    std::vector<double> cuts;
    for (double z : bessel_zeros(nu, w)) cuts.push_back(z / w);
    cuts.insert(cuts.end(), extra_cuts.begin(), extra_cuts.end());
    double gap = 1e-3 * std::min(1.0, std::numbers::pi / w);
    return panel_integrate(g, left, al, right, be, 0.0, 1.0, clean_cuts(cuts, 0.0, 1.0, gap), cfg);
}

}  // namespace oracle_detail

/// Reference value of I[f] for spec.integrand.
inline OracleValue reference_integral(const ProblemSpec& spec, const OracleConfig& cfg = {}) {
    spec.validate();
    cfg.validate();
    const auto& f = spec.integrand;
    std::function<double(double)> h = [&f](double x) { return f(x); };
    std::function<double(double)> h_right = [&f](double s) { return f(1.0 - s); };
    return oracle_detail::x_domain(spec, h, h, h_right, f.breakpoints, cfg);
}

/// Moment M(k) from the x-domain definition, T_k* by recurrence
/// (Reinsch's form, run from the nearer endpoint).
inline OracleValue reference_moment_x(const ProblemSpec& spec, int k, const OracleConfig& cfg = {}) {
    spec.validate();
    cfg.validate();
    if (k < 0) throw index_error("reference_moment: k must be >= 0");
    using oracle_detail::chebyshev_near_one;
    const double par = (k % 2 == 0) ? 1.0 : -1.0;
    std::function<double(double)> h_left = [k, par](double s) { return par * chebyshev_near_one(k, s); };
    std::function<double(double)> h_right = [k](double s) { return chebyshev_near_one(k, s); };
    std::function<double(double)> h = [&](double x) { return x <= 0.5 ? h_left(x) : h_right(1.0 - x); };
    return oracle_detail::x_domain(spec, h, h_left, h_right, {}, cfg);
}

/// Moment M(k) from the angular form
///   M(k) = 2 (-1)^k int_0^{pi/2} sin^{2a+1} t cos^{2b+1} t J_nu(omega sin^2 t) cos(2kt) dt
/// with panel edges on the zeros of cos(2kt).
inline OracleValue reference_moment_theta(const ProblemSpec& spec, int k, const OracleConfig& cfg = {}) {
    spec.validate();
    cfg.validate();
    if (k < 0) throw index_error("reference_moment: k must be >= 0");
    using oracle_detail::sinc;
    const double al = spec.alpha, be = spec.beta, nu = spec.nu, w = spec.omega;
    const double sign = (k % 2 == 0) ? 2.0 : -2.0;
    const double half_pi = 0.5 * std::numbers::pi;
    auto g = [&](double t) {
        double s = std::sin(t), c = std::cos(t);
        return sign * std::pow(s, 2 * al + 1) * std::pow(c, 2 * be + 1) * bessel_j(nu, w * s * s) *
               std::cos(2.0 * k * t);
    };
    // Near t = 0: sin^{2a+1} t = t^{2a+1} sinc(t)^{2a+1}.
    auto left = [&](double t) {
        double s = std::sin(t), c = std::cos(t);
        return sign * std::pow(sinc(t), 2 * al + 1) * std::pow(c, 2 * be + 1) * bessel_j(nu, w * s * s) *
               std::cos(2.0 * k * t);
    };
    // Near t = pi/2 with u = pi/2 - t: cos t = sin u, sin t = cos u, cos(2kt) = (-1)^k cos(2ku).
    auto right = [&](double u) {
        double cu = std::cos(u);
        double par = (k % 2 == 0) ? 1.0 : -1.0;
        return sign * par * std::pow(sinc(u), 2 * be + 1) * std::pow(cu, 2 * al + 1) *
               bessel_j(nu, w * cu * cu) * std::cos(2.0 * k * u);
    };
    std::vector<double> cuts;
    if (k > 0)
        for (int m = 0; m < k; ++m) cuts.push_back((2.0 * m + 1.0) * std::numbers::pi / (4.0 * k));
    // Keep the kernel's own oscillation resolved when it is faster than cos(2kt).
    double gap = 1e-3 * std::numbers::pi / (4.0 * std::max(k, 1));
    return oracle_detail::panel_integrate(g, left, 2 * al + 1, right, 2 * be + 1, 0.0, half_pi,
                                          oracle_detail::clean_cuts(cuts, 0.0, half_pi, gap), cfg);
}

/// Reference modified moment: x-domain for k <= 2 omega / pi, angular form beyond.
inline OracleValue reference_moment(const ProblemSpec& spec, int k, const OracleConfig& cfg = {}) {
    if (k <= 2.0 * spec.omega / std::numbers::pi) return reference_moment_x(spec, k, cfg);
    return reference_moment_theta(spec, k, cfg);
}

}  // namespace bessel_ccf
