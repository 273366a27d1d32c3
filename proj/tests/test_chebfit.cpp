#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <bessel_ccf/chebfit.hpp>
#include <bessel_ccf/validation.hpp>

using namespace bessel_ccf;

namespace {

std::vector<double> sample(int N, double (*f)(double)) {
    auto x = cc_points(N);
    std::vector<double> s;
    for (double xi : x) s.push_back(f(xi));
    return s;
}

double abs_half(double x) { return std::abs(x - 0.5); }

}  // namespace

TEST(CcPoints, SmallN) {
    EXPECT_EQ(cc_points(1), (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(cc_points(2), (std::vector<double>{1.0, 0.5, 0.0}));
    auto c4 = cc_points(4);
    EXPECT_DOUBLE_EQ(c4[1] + c4[3], 1.0);
}

TEST(CcPoints, DescendingAndSymmetric) {
    for (int N : {3, 7, 64, 255}) {
        auto c = cc_points(N);
        ASSERT_EQ(c.size(), static_cast<size_t>(N) + 1);
        EXPECT_EQ(c.front(), 1.0);
        EXPECT_EQ(c.back(), 0.0);
        for (int i = 0; i < N; ++i) EXPECT_GT(c[i], c[i + 1]);
        for (int i = 0; i <= N; ++i) EXPECT_NEAR(c[i] + c[N - i], 1.0, 1e-16);
    }
    EXPECT_THROW(cc_points(0), domain_error);
}

TEST(InterpCoeffs, ConstantAndLinear) {
    for (int N : {1, 5, 8}) {
        auto one = cheb_interp_coeffs(sample(N, [](double) { return 1.0; }));
        EXPECT_NEAR(one.b[0], 1.0, 1e-15);
        for (int k = 1; k <= N; ++k) EXPECT_NEAR(one.b[k], 0.0, 1e-15);
        auto lin = cheb_interp_coeffs(sample(N, [](double x) { return x; }));
        EXPECT_NEAR(lin.b[0], 0.5, 1e-15);
        EXPECT_NEAR(lin.b[1], 0.5, 1e-15);
        for (int k = 2; k <= N; ++k) EXPECT_NEAR(lin.b[k], 0.0, 1e-15);
    }
}

TEST(InterpCoeffs, OddAliasingMapsToReflectedIndex) {
    const int N = 10;
    for (int j = 1; j <= N - 1; ++j) {
        auto e = cheb_interp_coeffs(validation::chebyshev_samples(N + j, N));
        for (int k = 0; k <= N; ++k) EXPECT_NEAR(e.b[k], k == N - j ? 1.0 : 0.0, 1e-14) << j << " " << k;
    }
}

TEST(InterpCoeffs, AliasingIdentitiesAllCases) {
    for (int N : {8, 16})
        for (int p : {1, 2, 3}) EXPECT_LE(validation::aliasing_error(N, p), 1e-13) << "N = " << N << ", p = " << p;
}

TEST(InterpCoeffs, LengthMismatchThrows) {
    std::vector<double> s(9, 1.0);
    EXPECT_THROW(cheb_interp_coeffs(s, 10), domain_error);
    EXPECT_THROW(cheb_interp_coeffs(std::vector<double>{1.0}), domain_error);
}

TEST(InterpCoeffs, FftMatchesDirectSum) {
    for (int N : {8, 64, 256}) {
        std::vector<double> s = sample(N, [](double x) { return std::exp(std::sin(7 * x)) + std::abs(x - 0.3); });
        auto fast = detail::dct1_fft(s), slow = detail::dct1_direct(s);
        double scale = 0.0;
        for (double v : slow) scale = std::max(scale, std::abs(v));
        for (size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(fast[k], slow[k], 1e-13 * scale) << "N = " << N;
    }
}

TEST(InterpCoeffs, ReproducesNodesForEveryN) {
    for (int N : {1, 2, 7, 16, 100, 128}) {
        auto s = sample(N, [](double x) { return std::cos(20 * x) / (1.0 + x); });
        auto e = cheb_interp_coeffs(s);
        auto x = cc_points(N);
        double mx = 0.0;
        for (double v : s) mx = std::max(mx, std::abs(v));
        for (int i = 0; i <= N; ++i) EXPECT_NEAR(cheb_eval(e, x[i]), s[i], 1e-12 * mx) << "N = " << N;
    }
}

TEST(ChebEval, BasisValues) {
    ChebyshevExpansion c{{1.0, 0.0, 0.0}};
    for (double x : {0.0, 0.2, 1.0}) EXPECT_EQ(cheb_eval(c, x), 1.0);
    ChebyshevExpansion t1{{0.0, 1.0}};
    EXPECT_EQ(cheb_eval(t1, 1.0), 1.0);
    EXPECT_EQ(cheb_eval(t1, 0.0), -1.0);
    EXPECT_THROW(cheb_eval(t1, 1.5), domain_error);
    EXPECT_THROW(cheb_eval(t1, -0.1), domain_error);
}

TEST(ChebEval, MatchesTrigonometricForm) {
    for (int k : {0, 1, 2, 9, 40}) {
        std::vector<double> b(static_cast<size_t>(k) + 1, 0.0);
        b[k] = 1.0;
        ChebyshevExpansion e{b};
        for (double x : {0.0, 0.13, 0.5, 0.77, 1.0})
            EXPECT_NEAR(cheb_eval(e, x), std::cos(k * std::acos(2 * x - 1)), 1e-13) << k << " " << x;
    }
}

TEST(ChebEval, AbsValueInterpolantAtNodes) {
    auto s = sample(16, abs_half);
    auto e = cheb_interp_coeffs(s);
    auto x = cc_points(16);
    for (int i = 0; i <= 16; ++i) EXPECT_NEAR(cheb_eval(e, x[i]), s[i], 1e-13);
}

// |x - 1/2| is even about the midpoint, so only even-index coefficients are
// nonzero; the slope is fitted over those.
TEST(CoefficientDecay, AbsValueFirstOrderBound) {
    for (int N : {256, 200}) {
        auto e = cheb_interp_coeffs(sample(N, abs_half));
        std::vector<double> j, b;
        for (int k = 8; k <= N / 2; k += 2) {
            j.push_back(k);
            b.push_back(e.b[k]);
        }
        EXPECT_LE(validation::loglog_slope(j, b), -1.8) << "N = " << N;
        for (int k = 1; k <= N; k += 2) EXPECT_NEAR(e.b[k], 0.0, 1e-15);
    }
}
