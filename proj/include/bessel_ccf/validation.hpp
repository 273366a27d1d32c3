#pragma once
//
// Invariant checks shared by the `validate` command and the acceptance
// suite: aliasing, recurrence residuals, moment-vs-oracle agreement, decay
// slopes, polynomial exactness.
//

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "ccf.hpp"
#include "chebfit.hpp"
#include "moments.hpp"
#include "oracle.hpp"

namespace bessel_ccf::validation {

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(std::abs(y[i]) > 0.0)) continue;
        double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw domain_error("loglog_slope: fewer than two usable points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// T*_m at the Clenshaw-Curtis nodes, cos(m i pi / N) with m i reduced mod 2N.
inline std::vector<double> chebyshev_samples(long m, int N) {
    std::vector<double> s(static_cast<size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        long r = (m * i) % (2L * N);
        s[i] = std::cos(std::numbers::pi * static_cast<double>(r) / N);
    }
    return s;
}

/// Largest coefficient deviation over j = 0..N between the interpolant of
/// T*_{pN+j} and the unit vector at j (p even) or N - j (p odd).
inline double aliasing_error(int N, int p) {
    double worst = 0.0;
    for (int j = 0; j <= N; ++j) {
        auto e = cheb_interp_coeffs(chebyshev_samples(static_cast<long>(p) * N + j, N));
        const int target = (p % 2 == 0) ? j : N - j;
        for (int k = 0; k <= N; ++k) worst = std::max(worst, std::abs(e.b[k] - (k == target ? 1.0 : 0.0)));
    }
    return worst;
}

inline double max_recurrence_residual(const MomentTable& t) {
    double worst = 0.0;
    for (int k = 0; k + 4 <= t.max_index(); ++k) worst = std::max(worst, recurrence_residual(t, k));
    return worst;
}

struct MomentComparison {
    double metric = 0.0;      ///< max |dM| / (rel |M_ref| + floor * max|M_ref|); <= 1 passes
    double plain_rel = 0.0;   ///< max |dM| / |M_ref| over entries above 1e-6 max|M_ref|
    int worst_k = -1;
};

/// Table entries at `ks` against oracle moments.
inline MomentComparison compare_with_oracle(const MomentTable& t, const std::vector<int>& ks, double rel = 1e-8,
                                            double floor = 1e-14, const OracleConfig& cfg = {}) {
    const ProblemSpec w = t.weight();
    std::vector<double> ref;
    ref.reserve(ks.size());
    double mx = 0.0;
    for (int k : ks) {
        ref.push_back(reference_moment(w, k, cfg).value);
        mx = std::max(mx, std::abs(ref.back()));
    }
    MomentComparison c;
    for (size_t i = 0; i < ks.size(); ++i) {
        double d = std::abs(t.values[static_cast<size_t>(ks[i])] - ref[i]);
        double m = d / (rel * std::abs(ref[i]) + floor * mx);
        if (m > c.metric) {
            c.metric = m;
            c.worst_k = ks[i];
        }
        if (std::abs(ref[i]) > 1e-6 * mx) c.plain_rel = std::max(c.plain_rel, d / std::abs(ref[i]));
    }
    return c;
}

/// Fitted slope of |M(k)| over k in [k_lo, k_hi].
inline double moment_decay_slope(const MomentTable& t, int k_lo, int k_hi) {
    std::vector<double> x, y;
    for (int k = k_lo; k <= k_hi; ++k) {
        x.push_back(k);
        y.push_back(t.values[static_cast<size_t>(k)]);
    }
    return loglog_slope(x, y);
}

/// Decay exponent of |M(k)| for large k: -2 - 2 min(alpha, beta), or -2 when
/// alpha = beta = -1/2.
inline double predicted_decay(double alpha, double beta) {
    if (alpha == -0.5 && beta == -0.5) return -2.0;
    return -2.0 - 2.0 * std::min(alpha, beta);
}

/// Exact large-k decay exponent of |M(k)| from the endpoint expansion of the
/// angular form: sin^g0 at 0 with g0 = 2 alpha + 2 nu + 1 and cos^g1 at pi/2
/// with g1 = 2 beta + 1. An endpoint whose exponent is an even integer
/// contributes no algebraic terms. Empty when neither endpoint does.
inline std::optional<double> endpoint_decay(double alpha, double beta, double nu) {
    auto contributes = [](double g) { return !(g >= 0.0 && std::floor(g) == g && std::fmod(g, 2.0) == 0.0); };
    const double g0 = 2.0 * alpha + 2.0 * nu + 1.0, g1 = 2.0 * beta + 1.0;
    std::optional<double> g;
    if (contributes(g0)) g = g0;
    if (contributes(g1)) g = g ? std::min(*g, g1) : g1;
    if (!g) return std::nullopt;
    return -(*g + 1.0);
}

/// max / median of v over the window [first, last).
inline double spread_ratio(const std::vector<double>& v, size_t first, size_t last) {
    std::vector<double> w(v.begin() + static_cast<long>(first), v.begin() + static_cast<long>(last));
    if (w.empty()) throw domain_error("spread_ratio: empty window");
    std::sort(w.begin(), w.end());
    const size_t n = w.size();
    double median = (n % 2 == 1) ? w[n / 2] : 0.5 * (w[n / 2 - 1] + w[n / 2]);
    return w.back() / median;
}

/// Integrand sum_i c_i T_i*(x) for a degree-d registry polynomial.
inline Integrand chebyshev_polynomial(const std::vector<double>& coeffs) {
    IntegrandDescriptor d{"cheb_poly", {}};
    for (size_t i = 0; i < coeffs.size(); ++i) d.params["c" + std::to_string(i)] = coeffs[i];
    return make_integrand(d);
}

}  // namespace bessel_ccf::validation
