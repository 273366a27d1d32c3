#pragma once
//
// Special functions used by the moment engine and the oracle:
// Gamma, Bessel J of real order, Taylor jets of J, generalized
// hypergeometric series in extended precision, and the power-basis
// coefficients of shifted Chebyshev polynomials.
//

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "detail/double_double.hpp"
#include "errors.hpp"
#include "extended_real.hpp"
#include "taylor_jet.hpp"

namespace bessel_ccf {

/// Gamma function in double precision.
inline double gamma(double x) {
    if (x <= 0.0 && std::floor(x) == x)
        throw pole_error("gamma: pole at nonpositive integer " + std::to_string(x));
    return std::tgamma(x);
}

/// Argument below which J_nu is summed from its ascending series; above it
/// the Hankel large-argument expansion is used.
inline double bessel_series_threshold(double nu) { return 25.0 + std::abs(nu); }

namespace detail {

inline bool is_integer(double v) { return std::floor(v) == v; }

// Ascending series summed in double-double. The partial sums reach roughly
// e^x / |J| before cancelling, which stays well inside 106 bits for
// x < 25 + |nu|.
inline double bessel_j_series(double nu, double x) {
    const dd q = two_prod(x, x) * dd(0.25);
    dd term(1.0), sum(1.0);
    for (int k = 1; k < 2000; ++k) {
        dd denom = dd(static_cast<double>(k)) * two_sum(nu, static_cast<double>(k));
        term = -(term * q) / denom;
        sum = sum + term;
        bool past_peak = static_cast<double>(k) * (k + nu) > q.hi;
        if (past_peak && std::abs(term.hi) <= 1e-34 * std::abs(sum.hi)) break;
    }
    return std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0) * sum.to_double();
}

// cos/sin of pi*t with the argument reduced exactly first.
inline void sincos_pi(double t, double& s, double& c) {
    double r = std::fmod(t, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0) { s = 0.0; c = 1.0; return; }
    if (r == 0.5) { s = 1.0; c = 0.0; return; }
    if (r == 1.0) { s = 0.0; c = -1.0; return; }
    if (r == 1.5) { s = -1.0; c = 0.0; return; }
    s = std::sin(std::numbers::pi * r);
    c = std::cos(std::numbers::pi * r);
}

// Hankel expansion J = sqrt(2/(pi x)) (P cos chi - Q sin chi),
// chi = x - (nu/2 + 1/4) pi. The phase is split so that cos(x), sin(x) see
// the exact argument.
inline double bessel_j_asymptotic(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double P = 0.0, Q = 0.0, a = 1.0, last = INFINITY;
    for (int k = 0; k < 400; ++k) {
        double t = a / std::pow(x, k);
        double mag = std::abs(t);
        // Terms may grow while (2k-1)^2 < mu; only treat growth past that hump as divergence.
        if (k > std::abs(nu) + 1 && mag > last) break;
        int sgn = ((k / 2) % 2 == 0) ? 1 : -1;
        (k % 2 == 0 ? P : Q) += sgn * t;
        last = mag;
        double odd = 2.0 * k + 1.0;
        a *= (mu - odd * odd) / (8.0 * (k + 1));
        if (a == 0.0 || (k > std::abs(nu) + 1 && mag < 1e-18 * std::abs(P))) break;
    }
    double sphi = 0.0, cphi = 0.0;
    sincos_pi(0.5 * nu + 0.25, sphi, cphi);
    double sx = std::sin(x), cx = std::cos(x);
    double cchi = cx * cphi + sx * sphi;
    double schi = sx * cphi - cx * sphi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * cchi - Q * schi);
}

/// J_nu(x) for any real order nu and x >= 0. Negative integer orders use
/// J_{-m} = (-1)^m J_m; negative non-integer orders go through the series or
/// the Hankel expansion unchanged.
inline double bessel_j_any(double nu, double x) {
    if (nu < 0.0 && is_integer(nu)) {
        double m = -nu;
        double v = bessel_j_any(m, x);
        return std::fmod(m, 2.0) == 0.0 ? v : -v;
    }
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        return INFINITY;
    }
    if (x < bessel_series_threshold(nu)) return bessel_j_series(nu, x);
    return bessel_j_asymptotic(nu, x);
}

}  // namespace detail

/// Bessel function of the first kind, J_nu(x), nu >= 0, x >= 0.
inline double bessel_j(double nu, double x) {
    if (!(nu >= 0.0) || !(x >= 0.0))
        throw domain_error("bessel_j: requires nu >= 0 and x >= 0");
    return detail::bessel_j_any(nu, x);
}

/// Taylor jet of J_nu about `center`, up to `order` (<= 12). Derivatives come
/// from the ladder J' = (J_{nu-1} - J_{nu+1}) / 2 applied k times:
/// J^(k) = 2^-k sum_j (-1)^j C(k, j) J_{nu-k+2j}.
inline TaylorJet bessel_j_jet(double nu, double center, int order) {
    if (!(nu >= 0.0) || !(center > 0.0))
        throw domain_error("bessel_j_jet: requires nu >= 0 and center > 0");
    if (order < 0 || order > 12) throw domain_error("bessel_j_jet: order must be in [0, 12]");
    std::vector<double> c(static_cast<size_t>(order) + 1);
    double kfact = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) kfact *= k;
        double s = 0.0, binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            double v = detail::bessel_j_any(nu - k + 2.0 * j, center);
            s += (j % 2 == 0 ? binom : -binom) * v;
            binom = binom * (k - j) / (j + 1);
        }
        c[k] = std::ldexp(s, -k) / kfact;
    }
    return {center, std::move(c)};
}

/// Extended-precision value with an absolute error estimate.
struct ExtendedResult {
    ExtendedReal value;
    double err_est = 0.0;
};

/// Sum of the hypergeometric series
///   sum_n prod(a_i)_n / (prod(b_i)_n n!) z^n
/// at a fixed working precision. Term ratios are formed recursively in MPFR,
/// whose exponent range makes log-space Pochhammer products unnecessary.
inline ExtendedReal pochhammer_series(std::span<const ExtendedReal> a,
                                      std::span<const ExtendedReal> b,
                                      const ExtendedReal& z, mpfr_prec_t bits) {
    for (const auto& bi : b)
        if (mpfr_integer_p(bi.get()) && bi.sign() <= 0)
            throw pole_error("hypergeometric series: lower parameter is a nonpositive integer");
    double max_param = 0.0;
    for (const auto& ai : a) max_param = std::max(max_param, std::abs(ai.to_double()));
    for (const auto& bi : b) max_param = std::max(max_param, std::abs(bi.to_double()));

    ExtendedReal term(1L, bits), sum(1L, bits), zz = z.with_precision(bits);
    ExtendedReal num(bits), den(bits);
    const double absz = std::abs(z.to_double());
    for (long n = 0;; ++n) {
        num = zz;
        den = ExtendedReal(n + 1, bits);
        for (const auto& ai : a) {
            ExtendedReal t = ai.with_precision(bits);
            t += static_cast<double>(n);
            num *= t;
        }
        for (const auto& bi : b) {
            ExtendedReal t = bi.with_precision(bits);
            t += static_cast<double>(n);
            den *= t;
        }
        term *= num;
        term /= den;
        if (term.is_zero()) break;  // terminating series
        sum += term;
        // The ratio shrinks monotonically once n exceeds every parameter and
        // |z|^(1/(q-p+1)); only then is a tiny term a safe stopping signal.
        bool settled = static_cast<double>(n) > max_param + 1.0 &&
                       static_cast<double>(n) * n > absz;
        if (settled && mpfr_get_exp(term.get()) < mpfr_get_exp(sum.get()) - bits - 8) break;
        if (n > 1000000) throw convergence_error("hypergeometric series: too many terms");
    }
    return sum;
}

/// 2F3(a1, a2; b1, b2, b3; z) in ExtendedReal, doubling the working
/// precision from 128 bits until two successive values agree to rel_tol.
inline ExtendedResult hyp2f3(const ExtendedReal& a1, const ExtendedReal& a2, const ExtendedReal& b1,
                             const ExtendedReal& b2, const ExtendedReal& b3, const ExtendedReal& z,
                             double rel_tol) {
    constexpr mpfr_prec_t start_bits = 128, cap_bits = 4096;
    const ExtendedReal a[2] = {a1, a2};
    const ExtendedReal b[3] = {b1, b2, b3};
    ExtendedReal prev = pochhammer_series(a, b, z, start_bits);
    for (mpfr_prec_t bits = 2 * start_bits; bits <= cap_bits; bits *= 2) {
        ExtendedReal cur = pochhammer_series(a, b, z, bits);
        ExtendedReal diff = abs(cur - prev);
        double d = diff.to_double();
        if (d <= rel_tol * std::abs(cur.to_double())) return {std::move(cur), d};
        prev = std::move(cur);
    }
    throw convergence_error("hyp2f3: no agreement below the 4096-bit precision cap");
}

inline ExtendedResult hyp2f3(double a1, double a2, double b1, double b2, double b3, double z,
                             double rel_tol) {
    constexpr mpfr_prec_t p = 64;
    return hyp2f3(ExtendedReal(a1, p), ExtendedReal(a2, p), ExtendedReal(b1, p), ExtendedReal(b2, p),
                  ExtendedReal(b3, p), ExtendedReal(z, p), rel_tol);
}

/// Power-basis coefficients of T_k*(x) = T_{2k}(sqrt x) = sum_j c_j x^(k-j),
/// c_j = (-1)^j 2^(2k-2j-1) [2 C(2k-j, j) - C(2k-j-1, j)].
inline std::vector<mpz_class> shifted_cheb_power_coeffs(int k) {
    if (k < 0) throw domain_error("shifted_cheb_power_coeffs: k must be nonnegative");
    if (k == 0) return {mpz_class(1)};
    std::vector<mpz_class> c(static_cast<size_t>(k) + 1);
    for (int j = 0; j <= k; ++j) {
        mpz_class b1, b2;
        mpz_bin_uiui(b1.get_mpz_t(), static_cast<unsigned long>(2 * k - j), static_cast<unsigned long>(j));
        mpz_bin_uiui(b2.get_mpz_t(), static_cast<unsigned long>(2 * k - j - 1), static_cast<unsigned long>(j));
        mpz_class v = 2 * b1 - b2;
        int e = 2 * k - 2 * j - 1;
        if (e >= 0)
            v <<= static_cast<mp_bitcnt_t>(e);
        else
            v >>= 1;  // e == -1 only at j == k, where the bracket equals 2
        c[j] = (j % 2 == 0) ? v : mpz_class(-v);
    }
    return c;
}

}  // namespace bessel_ccf
