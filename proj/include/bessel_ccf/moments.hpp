#pragma once
//
// Modified moments
//   M(k) = int_0^1 x^alpha (1-x)^beta T_k*(x) J_nu(omega x) dx,  k = 0..N.
//
// The moments obey an order-8 linear recurrence spanning M(k-4)..M(k+4)
// (offsets +-3 absent). It is unstable in both directions, so tables are
// built in three stages:
//   k = 0..5            closed form: power-basis expansion of T_k* over
//                       Gamma/2F3 integrals, summed in ExtendedReal
//   k = 6..floor(w/2)   forward recursion (accurate while k <= omega/2)
//   beyond              boundary-value (Oliver) solve pinned by six values
//                       below the window and two end moments at N+1, N+2
//                       from the endpoint asymptotic expansion.
//

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "banded.hpp"
#include "errors.hpp"
#include "extended_real.hpp"
#include "oracle.hpp"
#include "problem.hpp"
#include "specfun.hpp"
#include "taylor_jet.hpp"

namespace bessel_ccf {

enum class MomentMethod { closed_form, forward, oliver, asymptotic, oracle_fallback };

inline std::string to_string(MomentMethod m) {
    switch (m) {
        case MomentMethod::closed_form: return "closed-form";
        case MomentMethod::forward: return "forward";
        case MomentMethod::oliver: return "oliver";
        case MomentMethod::asymptotic: return "asymptotic";
        case MomentMethod::oracle_fallback: return "oracle-fallback";
    }
    return "unknown";
}

/// Coefficients of the recurrence centred at k, indexed by offset d + 4 for
/// d = -4..4:  sum_d c[d+4] M(k+d) = 0.  c[1] and c[7] (offsets -+3) are zero.
/// T is double or detail::dd; the double-double form is exact to ~1e-32.
template <class T = double>
std::array<T, 9> recurrence_coefficients(const ProblemSpec& s, int k) {
    const T a = s.alpha, b = s.beta, nu = s.nu, w = s.omega, kk = static_cast<double>(k);
    const T nu2 = nu * nu, w2 = w * w, apb = a + b, amb = a - b, a2mb2 = a * a - b * b;
    const T w2q = w2 * T(0.25);
    const T up = kk + T(3.0) + apb, dn = apb - kk + T(3.0);
    const T lin = T(4.0) * nu2 + T(4.0) - T(4.0) * a2mb2 - T(8.0) * a + T(12.0) * b;
    std::array<T, 9> c{};
    c[8] = c[0] = w2 * T(0.0625);
    c[6] = up * up - nu2 - w2q;
    c[5] = lin + T(2.0) * kk - T(4.0) * kk * amb;
    c[4] = T(6.0) * (a * a + b * b) + T(4.0) * a + T(12.0) * b - T(4.0) * a * b - T(2.0) * kk * kk + T(6.0) -
           T(6.0) * nu2 + T(1.5) * w2q;
    c[3] = lin - T(2.0) * kk + T(4.0) * kk * amb;
    c[2] = dn * dn - nu2 - w2q;
    return c;
}

/// I(a, b) = int_0^1 x^a (1-x)^b J_nu(omega x) dx via
///   Gamma(b+1) Gamma(a+nu+1) (omega/2)^nu / (Gamma(nu+1) Gamma(a+b+nu+2))
///   * 2F3((a+nu+1)/2, (a+nu+2)/2; nu+1, (a+b+nu+2)/2, (a+b+nu+3)/2; -omega^2/4).
/// `shift` is added to a exactly, so I(alpha + m, ...) sees the true alpha + m.
inline ExtendedResult power_moment(double a, double b, double nu, double omega, double rel_tol, int shift = 0) {
    if (!(a + shift + nu > -1.0) || !(b > -1.0) || !(nu >= 0.0) || !(omega >= 0.0))
        throw parameter_error("power_moment: requires a + nu > -1, b > -1, nu >= 0, omega >= 0");
    constexpr mpfr_prec_t pb = 256;  // sums of the double inputs below are exact at this width
    const ExtendedReal B(b, pb), V(nu, pb), W(omega, pb), one(1L, pb);
    ExtendedReal A(a, pb);
    A += static_cast<double>(shift);
    auto half = [](ExtendedReal x) { return x /= 2.0; };
    ExtendedReal anu = A + V;
    ExtendedReal z = -(W * W);
    z /= 4.0;
    ExtendedResult F = hyp2f3(half(anu + one), half(anu + one + one), V + one, half(anu + B + one + one),
                              half(anu + B + one + one + one), z, rel_tol);
    const mpfr_prec_t p = F.value.precision();
    const ExtendedReal one_p(1L, p);
    ExtendedReal pre = gamma(B.with_precision(p) + one_p) * gamma(anu.with_precision(p) + one_p);
    pre /= gamma(V.with_precision(p) + one_p);
    pre /= gamma(anu.with_precision(p) + B.with_precision(p) + one_p + one_p);
    if (nu != 0.0) pre *= pow(half(W.with_precision(p)), V.with_precision(p));
    ExtendedReal value = pre * F.value;
    double err = std::abs(pre.to_double()) * F.err_est;
    return {std::move(value), err};
}

struct MomentSequence {
    std::vector<double> values;
    std::vector<double> err_est;
    std::vector<ExtendedReal> exact;  ///< the same values before rounding to double
};

namespace moments_detail {
inline constexpr double eps = std::numeric_limits<double>::epsilon();
inline constexpr double power_moment_tol = 1e-28;
}  // namespace moments_detail

/// M(0..count-1) from M(k) = sum_j c_j^(2k) I(alpha + k - j, beta), with the
/// alternating integer coefficients applied in ExtendedReal.
inline MomentSequence starting_moments(const ProblemSpec& spec, int count = 6) {
    spec.validate();
    if (count < 1 || count > 8) throw domain_error("starting_moments: count must be in [1, 8]");
    std::vector<ExtendedResult> I;
    I.reserve(static_cast<size_t>(count));
    for (int m = 0; m < count; ++m)
        I.push_back(power_moment(spec.alpha, spec.beta, spec.nu, spec.omega, moments_detail::power_moment_tol, m));

    MomentSequence out;
    for (int k = 0; k < count; ++k) {
        auto c = shifted_cheb_power_coeffs(k);
        mpfr_prec_t p = 0;
        for (int m = 0; m <= k; ++m) p = std::max(p, I[m].value.precision());
        ExtendedReal sum(p);
        double err = 0.0;
        for (int j = 0; j <= k; ++j) {
            const auto& term = I[static_cast<size_t>(k - j)];
            sum += ExtendedReal(c[j], p) * term.value;
            err += std::abs(c[j].get_d()) * term.err_est;
        }
        double v = sum.to_double();
        out.exact.push_back(sum);
        out.values.push_back(v);
        out.err_est.push_back(err + 0.5 * moments_detail::eps * std::abs(v));
    }
    return out;
}

namespace moments_detail {

/// Forward recursion in double: `m` holds at least M(0..5) on entry and is
/// extended to M(0..k_max).
inline void forward_extend(const ProblemSpec& spec, std::vector<double>& m, int k_max) {
    m.resize(static_cast<size_t>(k_max) + 1);
    // The recurrence centred at k produces M(k+4); k = 2, 3 reach M(-2), M(-1)
    // and fold them onto M(2), M(1).
    for (int k = 2; k + 4 <= k_max; ++k) {
        auto c = recurrence_coefficients(spec, k);
        double s = 0.0;
        for (int d = -4; d <= 2; ++d)
            if (c[d + 4] != 0.0) s += c[d + 4] * m[static_cast<size_t>(std::abs(k + d))];
        m[static_cast<size_t>(k + 4)] = -s / c[8];
    }
}

/// |dM(k)/dM(j)| for j = 0..5, k = 0..k_max: forward runs from unit starts.
inline std::vector<std::array<double, 6>> forward_sensitivity(const ProblemSpec& spec, int k_max) {
    std::vector<std::array<double, 6>> g(static_cast<size_t>(k_max) + 1);
    for (int j = 0; j < 6; ++j) {
        std::vector<double> m(6, 0.0);
        m[static_cast<size_t>(j)] = 1.0;
        forward_extend(spec, m, k_max);
        for (int k = 0; k <= k_max; ++k) g[static_cast<size_t>(k)][static_cast<size_t>(j)] = std::abs(m[k]);
    }
    return g;
}

/// Forward recursion carried in ExtendedReal: `m` holds M(0..5) on entry
/// and is extended to M(0..k_max).
inline void forward_extend_exact(const ProblemSpec& spec, std::vector<ExtendedReal>& m, int k_max,
                                 mpfr_prec_t bits) {
    auto ext = [bits](detail::dd x) {
        ExtendedReal r(x.hi, bits);
        r += x.lo;
        return r;
    };
    for (auto& v : m) v = v.with_precision(bits);
    for (int k = 2; k + 4 <= k_max; ++k) {
        auto c = recurrence_coefficients<detail::dd>(spec, k);
        ExtendedReal s(bits);
        for (int d = -4; d <= 2; ++d)
            if (c[d + 4].hi != 0.0) s += ext(c[d + 4]) * m[static_cast<size_t>(std::abs(k + d))];
        m.push_back(-s / ext(c[8]));
    }
}

inline detail::dd to_dd(const ExtendedReal& x) {
    double hi = x.to_double();
    ExtendedReal r = x;
    r += -hi;
    return {hi, r.to_double()};
}

}  // namespace moments_detail

/// Forward recursion from start = M(0..5); returns M(0..k_max).
inline std::vector<double> forward_moments(const ProblemSpec& spec, std::span<const double> start, int k_max) {
    spec.validate();
    if (start.size() != 6) throw domain_error("forward_moments: expects six starting values");
    if (k_max < 5) throw domain_error("forward_moments: k_max must be >= 5");
    std::vector<double> m(start.begin(), start.end());
    moments_detail::forward_extend(spec, m, k_max);
    return m;
}

struct AsymptoticMoment {
    double value = 0.0;
    double err_est = 0.0;
    int terms = 0;
};

namespace moments_detail {

// Taylor coefficients of sin(t)/t about 0.
inline TaylorJet sinc_jet(int order) {
    std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
    double f = 1.0;
    for (int n = 0; 2 * n <= order; ++n) {
        if (n > 0) f *= (2.0 * n) * (2.0 * n + 1.0);
        c[static_cast<size_t>(2 * n)] = (n % 2 == 0 ? 1.0 : -1.0) / f;
    }
    return {0.0, std::move(c)};
}

// One endpoint's contribution of order n to int_0 s^gamma phi(s) cos(r s) ds:
//   phi_n Gamma(gamma+n+1) cos(pi (gamma+n+1)/2) r^-(gamma+n+1).
inline double endpoint_term(double phi_n, double gamma_exp, int n, double r) {
    if (phi_n == 0.0) return 0.0;
    const double e = gamma_exp + n + 1.0;
    double s = 0.0, c = 0.0;
    detail::sincos_pi(0.5 * e, s, c);
    if (c == 0.0) return 0.0;
    return phi_n * c * std::exp(std::lgamma(e) - e * std::log(r));
}

}  // namespace moments_detail

/// M(j) for large j from the angular form
///   M(j) = 2 (-1)^j int_0^{pi/2} sin^{2a+1} t cos^{2b+1} t J_nu(omega sin^2 t) cos(2jt) dt
/// by the endpoint (Erdelyi) expansion with r = 2j.
///
/// At t = 0 the integrand is t^{2a+1+2nu} phi0(t), with
///   phi0 = (omega/2)^nu sinc^{2a+1+2nu}(t) cos^{2b+1}(t) G_nu(omega^2 sin^4 t / 4),
///   G_nu(u) = sum_m (-u)^m / (m! Gamma(m+nu+1)),
/// and at t = pi/2 (u = pi/2 - t) it is u^{2b+1} phi1(u) with
///   phi1 = sinc^{2b+1}(u) cos^{2a+1}(u) J_nu(omega cos^2 u).
/// Both smooth factors are even, so only even Taylor orders contribute; the
/// m-th term collects order 2m from both ends. Integer parts of the exponents
/// need no separate treatment: they only shift which Taylor orders survive.
inline AsymptoticMoment end_moment_asymptotic(const ProblemSpec& spec, int j, int max_terms = 8,
                                              double rel_tol = 1e-16, double accept_rel = 1e-10) {
    spec.validate();
    if (j < std::max(50.0, 2.0 * spec.omega))
        throw domain_error("end_moment_asymptotic: requires j >= max(50, 2 omega)");
    if (max_terms < 1 || max_terms > 12) throw domain_error("end_moment_asymptotic: max_terms in [1, 12]");
    using moments_detail::endpoint_term;
    const int K = 2 * max_terms;  // highest Taylor order: the first omitted term
    const double a = spec.alpha, b = spec.beta, nu = spec.nu, w = spec.omega;
    const double r = 2.0 * j;
    const double g0 = 2.0 * a + 1.0 + 2.0 * nu, g1 = 2.0 * b + 1.0;

    const TaylorJet t = TaylorJet::variable(0.0, K);
    const TaylorJet sn = sin(t), cs = cos(t);
    const TaylorJet sinc = moments_detail::sinc_jet(K);

    std::vector<double> G(static_cast<size_t>(K / 4) + 1);
    for (size_t m = 0; m < G.size(); ++m)
        G[m] = (m % 2 == 0 ? 1.0 : -1.0) / (std::tgamma(m + 1.0) * std::tgamma(m + nu + 1.0));
    const TaylorJet u = (0.25 * w * w) * (sn * sn * sn * sn);
    const TaylorJet phi0 = std::pow(0.5 * w, nu) * (pow(sinc, g0) * pow(cs, 2.0 * b + 1.0) * compose(G, u));

    const TaylorJet jj = bessel_j_jet(nu, w, K / 2);
    const TaylorJet v = w * (cs * cs);
    const TaylorJet phi1 = pow(sinc, g1) * pow(cs, 2.0 * a + 1.0) * compose(jj.coefficients(), v);

    const double parity = (j % 2 == 0) ? 1.0 : -1.0;
    auto term = [&](int m) {
        int n = 2 * m;
        return 2.0 * (parity * endpoint_term(phi0[n], g0, n, r) + endpoint_term(phi1[n], g1, n, r));
    };

    AsymptoticMoment out;
    double sum = 0.0, prev_mag = INFINITY;
    for (int m = 0; m < max_terms; ++m) {
        double tm = term(m);
        sum += tm;
        out.terms = m + 1;
        double next = term(m + 1);
        double next_mag = std::abs(next);
        if (next_mag > std::abs(tm) && std::abs(tm) > 0.0 && std::abs(tm) < prev_mag) {
            out.err_est = std::abs(tm);  // series turning: the last included term bounds the error
            break;
        }
        out.err_est = next_mag;
        if (next_mag <= rel_tol * std::abs(sum)) break;
        prev_mag = std::abs(tm);
    }
    out.value = sum;
    if (out.err_est > accept_rel * std::abs(sum) && out.err_est > 0.0)
        throw accuracy_error("end_moment_asymptotic: expansion not accurate enough at j = " + std::to_string(j),
                             out.err_est);
    return out;
}

namespace moments_detail {

/// Oliver's system for unknowns M(k_lo..k_hi): one recurrence row per centre
/// m = k_lo-2 .. k_hi-2, so each row touches M(m-4)..M(m+4) and exactly the
/// six values below and two above the window enter as boundary data.
/// Columns of row i span [i-6, i+2].
template <class T>
BandedSystem<T> oliver_system(const ProblemSpec& spec, int k_lo, int k_hi, std::span<const T> start6,
                              std::span<const T> end2) {
    const int n = k_hi - k_lo + 1;
    BandedSystem<T> sys(n, 6, 2);
    for (int i = 0; i < n; ++i) {
        const int m = k_lo - 2 + i;
        auto c = recurrence_coefficients<T>(spec, m);
        T rhs(0.0);
        for (int d = -4; d <= 4; ++d) {
            if (d == -3 || d == 3) continue;
            const T& coef = c[d + 4];
            int idx = m + d;
            if (idx < k_lo)
                rhs -= coef * start6[static_cast<size_t>(idx - (k_lo - 6))];
            else if (idx > k_hi)
                rhs -= coef * end2[static_cast<size_t>(idx - k_hi - 1)];
            else
                sys.at(i, idx - k_lo) += coef;
        }
        sys.rhs(i) = rhs;
    }
    return sys;
}

}  // namespace moments_detail

/// Solves for M(k_lo..k_hi) given start6 = M(k_lo-6..k_lo-1) and
/// end2 = M(k_hi+1), M(k_hi+2). Requires k_lo >= 6. The elimination runs in
/// double-double: the recurrence has solutions growing relative to the
/// moments, and rounding in the rows near k_lo excites them.
inline std::vector<double> oliver_moments(const ProblemSpec& spec, int k_lo, int k_hi, std::span<const double> start6,
                                          std::span<const double> end2) {
    spec.validate();
    if (k_lo < 6 || k_hi < k_lo) throw domain_error("oliver_moments: requires 6 <= k_lo <= k_hi");
    if (start6.size() != 6 || end2.size() != 2) throw domain_error("oliver_moments: needs 6 start and 2 end values");
    std::vector<detail::dd> s6(start6.begin(), start6.end()), e2(end2.begin(), end2.end());
    auto sol = solve_banded(moments_detail::oliver_system<detail::dd>(spec, k_lo, k_hi, s6, e2));
    std::vector<double> out;
    out.reserve(sol.size());
    for (const auto& v : sol) out.push_back(v.to_double());
    return out;
}

struct MomentTable {
    double alpha = 0.0, beta = 0.0, nu = 0.0, omega = 1.0;
    std::vector<double> values;  ///< M(0..N)
    std::vector<MomentMethod> method;
    std::vector<double> err_est;
    int k_switch = 5;
    /// M(N+1), M(N+2) when the boundary-value stage ran.
    std::vector<double> end_values;
    std::vector<MomentMethod> end_method;
    std::vector<double> end_err_est;

    int N() const noexcept { return static_cast<int>(values.size()) - 1; }

    /// M(k) with M(-k) = M(k); indices N+1, N+2 come from the end moments.
    double at(int k) const {
        k = std::abs(k);
        if (k < static_cast<int>(values.size())) return values[static_cast<size_t>(k)];
        size_t e = static_cast<size_t>(k - static_cast<int>(values.size()));
        if (e < end_values.size()) return end_values[e];
        throw index_error("MomentTable: index " + std::to_string(k) + " not available");
    }
    int max_index() const noexcept { return N() + static_cast<int>(end_values.size()); }

    ProblemSpec weight() const { return ProblemSpec::make(alpha, beta, nu, omega); }

    /// First n+1 entries (n <= N) as a table of its own; the two entries
    /// after the cut become its end values.
    MomentTable prefix(int n) const {
        if (n < 0 || n > N()) throw index_error("MomentTable::prefix beyond table size");
        if (n == N()) return *this;
        MomentTable t = *this;
        t.values.resize(static_cast<size_t>(n) + 1);
        t.method.resize(static_cast<size_t>(n) + 1);
        t.err_est.resize(static_cast<size_t>(n) + 1);
        t.end_values.clear();
        t.end_method.clear();
        t.end_err_est.clear();
        for (int k = n + 1; k <= n + 2 && k <= max_index(); ++k) {
            t.end_values.push_back(at(k));
            if (k <= N()) {
                t.end_method.push_back(method[static_cast<size_t>(k)]);
                t.end_err_est.push_back(err_est[static_cast<size_t>(k)]);
            } else {
                t.end_method.push_back(end_method[static_cast<size_t>(k - N() - 1)]);
                t.end_err_est.push_back(end_err_est[static_cast<size_t>(k - N() - 1)]);
            }
        }
        t.k_switch = std::min(k_switch, n);
        return t;
    }
};

struct MomentTableOptions {
    int end_max_terms = 8;
    mpfr_prec_t forward_bits = 192;
    OracleConfig fallback{};
};

/// Index where forward recursion hands over to the boundary-value solve.
inline int switch_index(double omega, int N) {
    return std::max(5, std::min(N, static_cast<int>(std::floor(omega / 2.0))));
}

inline MomentTable moment_table(const ProblemSpec& spec, int N, const MomentTableOptions& opt = {}) {
    using detail::dd;
    spec.validate();
    if (N < 0) throw domain_error("moment_table: N must be >= 0");
    MomentTable t;
    t.alpha = spec.alpha;
    t.beta = spec.beta;
    t.nu = spec.nu;
    t.omega = spec.omega;

    MomentSequence start = starting_moments(spec, std::min(6, N + 1));
    t.values = start.values;
    t.err_est = start.err_est;
    t.method.assign(t.values.size(), MomentMethod::closed_form);
    t.k_switch = std::min(N, 5);
    if (N <= 5) return t;

    const int ks = switch_index(spec.omega, N);
    t.k_switch = ks;
    std::vector<ExtendedReal> exact = std::move(start.exact);
    moments_detail::forward_extend_exact(spec, exact, ks, opt.forward_bits);
    // Start errors propagate linearly; the extended-precision rounding is negligible beside them.
    const auto g = moments_detail::forward_sensitivity(spec, ks);
    const std::vector<double> seed_err = t.err_est;
    for (int k = 6; k <= ks; ++k) {
        double v = exact[static_cast<size_t>(k)].to_double(), e = 0.0;
        for (int j = 0; j < 6; ++j) e += g[static_cast<size_t>(k)][static_cast<size_t>(j)] * seed_err[static_cast<size_t>(j)];
        t.values.push_back(v);
        t.err_est.push_back(e + 0.5 * moments_detail::eps * std::abs(v));
    }
    t.method.resize(static_cast<size_t>(ks) + 1, MomentMethod::forward);
    if (N == ks) return t;

    for (int j = N + 1; j <= N + 2; ++j) {
        bool done = false;
        if (j >= std::max(50.0, 2.0 * spec.omega)) {
            try {
                auto e = end_moment_asymptotic(spec, j, opt.end_max_terms);
                t.end_values.push_back(e.value);
                t.end_err_est.push_back(e.err_est + moments_detail::eps * std::abs(e.value));
                t.end_method.push_back(MomentMethod::asymptotic);
                done = true;
            } catch (const accuracy_error&) {
            }
        }
        if (!done) {
            auto r = reference_moment(spec, j, opt.fallback);
            t.end_values.push_back(r.value);
            t.end_err_est.push_back(r.err_est);
            t.end_method.push_back(MomentMethod::oracle_fallback);
        }
    }

    const int k_lo = ks + 1, k_hi = N;
    std::vector<dd> s6, e2(t.end_values.begin(), t.end_values.end());
    for (int k = k_lo - 6; k < k_lo; ++k) s6.push_back(moments_detail::to_dd(exact[static_cast<size_t>(k)]));
    BandedLU<dd> lu(moments_detail::oliver_system<dd>(spec, k_lo, k_hi, s6, e2));
    std::vector<dd> sol = lu.solve();

    // First-order sensitivity to the boundary data, each source bounded separately.
    std::vector<dd> start_err, zero6(6, dd(0.0)), zero2(2, dd(0.0)), end_err(t.end_err_est.begin(), t.end_err_est.end());
    for (int k = k_lo - 6; k < k_lo; ++k) start_err.push_back(t.err_est[static_cast<size_t>(k)]);
    auto d_start = lu.solve(moments_detail::oliver_system<dd>(spec, k_lo, k_hi, start_err, zero2).rhs());
    auto d_end = lu.solve(moments_detail::oliver_system<dd>(spec, k_lo, k_hi, zero6, end_err).rhs());

    for (int k = k_lo; k <= k_hi; ++k) {
        size_t i = static_cast<size_t>(k - k_lo);
        double v = sol[i].to_double();
        t.values.push_back(v);
        t.method.push_back(MomentMethod::oliver);
        t.err_est.push_back(std::abs(d_start[i].hi) + std::abs(d_end[i].hi) + moments_detail::eps * std::abs(v));
    }
    return t;
}

/// |sum_d c_d M(k+d)| / max_d |c_d M(k+d)| for the recurrence centred at k.
inline double recurrence_residual(const MomentTable& t, int k) {
    if (k < 0 || k + 4 > t.max_index())
        throw index_error("recurrence_residual: needs entries k-4..k+4 (k = " + std::to_string(k) + ")");
    auto c = recurrence_coefficients(t.weight(), k);
    double s = 0.0, mag = 0.0;
    for (int d = -4; d <= 4; ++d) {
        double term = c[d + 4] * t.at(k + d);
        s += term;
        mag = std::max(mag, std::abs(term));
    }
    return mag == 0.0 ? 0.0 : std::abs(s) / mag;
}

}  // namespace bessel_ccf
