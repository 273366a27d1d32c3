#pragma once
//
// Chebyshev interpolation on [0, 1] at Clenshaw-Curtis points
//   c_i = 1/2 + 1/2 cos(i pi / N),  i = 0..N
// in the shifted basis T_k*(x) = T_k(2x - 1).
//

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"

namespace bessel_ccf {

struct ChebyshevExpansion {
    std::vector<double> b;  ///< b_0..b_N; P_N(x) = sum b_k T_k*(x), no halved terms

    int degree() const noexcept { return static_cast<int>(b.size()) - 1; }
};

/// Clenshaw-Curtis points on [0, 1], descending from 1 to 0.
inline std::vector<double> cc_points(int N) {
    if (N < 1) throw domain_error("cc_points: N must be >= 1");
    std::vector<double> c(static_cast<size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        // cos(i pi / N) evaluated through the symmetric half to keep c_i + c_{N-i} == 1.
        if (2 * i <= N)
            c[i] = 0.5 + 0.5 * std::cos(std::numbers::pi * i / N);
        else
            c[i] = 1.0 - c[N - i];
    }
    if (N % 2 == 0) c[N / 2] = 0.5;
    return c;
}

namespace detail {

inline bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 FFT, forward sign convention e^{-2 pi i jk/n}.
inline void fft_radix2(std::vector<std::complex<double>>& a) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const size_t half = len / 2;
        for (size_t k = 0; k < half; ++k) {
            // Twiddles from the exact angle each time; recurrence-generated
            // twiddles drift by O(n eps).
            double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
            std::complex<double> w(std::cos(ang), std::sin(ang));
            for (size_t i = 0; i < n; i += len) {
                auto u = a[i + k];
                auto v = a[i + k + half] * w;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

/// Type-I DCT with halved endpoint terms, scaled by 2/N:
///   b_k = (2/N) sum''_j f_j cos(j k pi / N), then b_0, b_N halved.
inline std::vector<double> dct1_direct(std::span<const double> f) {
    const int N = static_cast<int>(f.size()) - 1;
    std::vector<double> b(f.size(), 0.0);
    for (int k = 0; k <= N; ++k) {
        double s = 0.5 * (f[0] + ((k % 2 == 0) ? f[N] : -f[N]));
        for (int j = 1; j < N; ++j) {
            // Reduce j*k mod 2N so the cosine argument stays in [0, 2 pi).
            long m = (static_cast<long>(j) * k) % (2L * N);
            s += f[j] * std::cos(std::numbers::pi * static_cast<double>(m) / N);
        }
        b[k] = 2.0 * s / N;
    }
    b[0] *= 0.5;
    b[N] *= 0.5;
    return b;
}

/// Same transform through a length-2N FFT of the even extension.
inline std::vector<double> dct1_fft(std::span<const double> f) {
    const size_t N = f.size() - 1;
    std::vector<std::complex<double>> v(2 * N);
    for (size_t j = 0; j <= N; ++j) v[j] = f[j];
    for (size_t j = 1; j < N; ++j) v[2 * N - j] = f[j];
    fft_radix2(v);
    std::vector<double> b(N + 1);
    for (size_t k = 0; k <= N; ++k) b[k] = v[k].real() / static_cast<double>(N);
    b[0] *= 0.5;
    b[N] *= 0.5;
    return b;
}

}  // namespace detail

/// Interpolation coefficients from samples at cc_points(N), in that order.
/// Power-of-two N goes through the FFT; other N use direct O(N^2) summation.
inline ChebyshevExpansion cheb_interp_coeffs(std::span<const double> samples) {
    if (samples.size() < 2) throw domain_error("cheb_interp_coeffs: need at least N+1 = 2 samples");
    const size_t N = samples.size() - 1;
    if (detail::is_power_of_two(N)) return {detail::dct1_fft(samples)};
    return {detail::dct1_direct(samples)};
}

/// Interpolation coefficients when the caller states N explicitly.
inline ChebyshevExpansion cheb_interp_coeffs(std::span<const double> samples, int N) {
    if (N < 1 || samples.size() != static_cast<size_t>(N) + 1)
        throw domain_error("cheb_interp_coeffs: expected N+1 = " + std::to_string(N + 1) +
                           " samples, got " + std::to_string(samples.size()));
    return cheb_interp_coeffs(samples);
}

/// Clenshaw evaluation of sum b_k T_k*(x) for x in [0, 1].
inline double cheb_eval(const ChebyshevExpansion& e, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("cheb_eval: x outside [0, 1]");
    const double t = 2.0 * x - 1.0;
    double bk1 = 0.0, bk2 = 0.0;
    for (size_t k = e.b.size(); k-- > 1;) {
        double bk = e.b[k] + 2.0 * t * bk1 - bk2;
        bk2 = bk1;
        bk1 = bk;
    }
    return e.b.empty() ? 0.0 : e.b[0] + t * bk1 - bk2;
}

/// T_k*(x) by the three-term recurrence (no power basis).
inline double shifted_chebyshev(int k, double x) {
    const double t = 2.0 * x - 1.0;
    if (k == 0) return 1.0;
    double p0 = 1.0, p1 = t;
    for (int j = 1; j < k; ++j) {
        double p2 = 2.0 * t * p1 - p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace bessel_ccf
