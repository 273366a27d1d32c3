#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <bessel_ccf/specfun.hpp>

using namespace bessel_ccf;

namespace {

// Ascending series for J_nu(x) summed in MPFR, wide enough that the largest
// term's magnitude (about e^x) costs nothing in the last place.
double series_bessel(double nu, double x) {
    const mpfr_prec_t bits = 160 + static_cast<mpfr_prec_t>(1.5 * x);
    ExtendedReal half_x(x, bits);
    half_x /= 2.0;
    const ExtendedReal v(nu, bits);
    ExtendedReal term = pow(half_x, v) / gamma(v + ExtendedReal(1L, bits));
    ExtendedReal q = -(half_x * half_x);
    ExtendedReal sum = term;
    for (long k = 0; k < 200000; ++k) {
        term *= q;
        term /= static_cast<double>(k + 1);
        term /= v + ExtendedReal(k + 1, bits);
        sum += term;
        if (!term.is_zero() && mpfr_get_exp(term.get()) < mpfr_get_exp(sum.get()) - bits - 4 &&
            static_cast<double>(k) > x)
            break;
    }
    return sum.to_double();
}

// 1F2(a; b1, b2; z) by its own term recursion in MPFR.
double series_1f2(double a, double b1, double b2, double z) {
    const mpfr_prec_t bits = 256;
    ExtendedReal term(1L, bits), sum(1L, bits);
    for (int n = 0; n < 400; ++n) {
        term *= z * (a + n);
        term /= (b1 + n) * (b2 + n) * (n + 1.0);
        sum += term;
    }
    return sum.to_double();
}

// f^(k)(x) / k! by 5-point central differences, Richardson-extrapolated in h.
double fd_coefficient(double nu, double x, int k, double h) {
    auto J = [nu](double t) { return bessel_j(nu, t); };
    auto raw = [&](double s) {
        const double fm2 = J(x - 2 * s), fm1 = J(x - s), f0 = J(x), fp1 = J(x + s), fp2 = J(x + 2 * s);
        switch (k) {
            case 1: return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * s);
            case 2: return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * s * s);
            case 3: return (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * s * s * s);
            default: return (fm2 - 4 * fm1 + 6 * f0 - 4 * fp1 + fp2) / (s * s * s * s);
        }
    };
    const double p = (k <= 2) ? 4.0 : 2.0;  // leading truncation order of each stencil
    const double scale = std::pow(2.0, p);
    double d = (scale * raw(h / 2) - raw(h)) / (scale - 1.0);
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return d / f;
}

}  // namespace

TEST(Gamma, KnownValues) {
    EXPECT_DOUBLE_EQ(bessel_ccf::gamma(1.0), 1.0);
    EXPECT_NEAR(bessel_ccf::gamma(0.5), std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(bessel_ccf::gamma(5.0), 24.0, 1e-13);
}

TEST(Gamma, PolesThrow) {
    EXPECT_THROW(bessel_ccf::gamma(0.0), pole_error);
    EXPECT_THROW(bessel_ccf::gamma(-1.0), pole_error);
    EXPECT_THROW(bessel_ccf::gamma(-7.0), pole_error);
}

TEST(Gamma, MatchesMpfrOnPositiveAxis) {
    for (double x = 0.05; x <= 50.0; x += 0.37) {
        double ref = gamma(ExtendedReal(x, 128)).to_double();
        EXPECT_LE(std::abs(bessel_ccf::gamma(x) - ref), 1e-14 * std::abs(ref)) << "x = " << x;
    }
}

TEST(BesselJ, KnownValues) {
    EXPECT_DOUBLE_EQ(bessel_j(0.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(bessel_j(2.5, 0.0), 0.0);
    EXPECT_NEAR(bessel_j(0.5, std::numbers::pi), 0.0, 1e-15);
    EXPECT_NEAR(bessel_j(0.0, 1.0), series_bessel(0.0, 1.0), 1e-16);
}

TEST(BesselJ, HalfOrderClosedForm) {
    for (double x : {0.3, 2.0, 24.0, 26.0, 80.0, 700.0}) {
        double ref = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
        EXPECT_NEAR(bessel_j(0.5, x), ref, 1e-14 * std::sqrt(2.0 / (std::numbers::pi * x))) << "x = " << x;
    }
}

TEST(BesselJ, DomainErrors) {
    EXPECT_THROW(bessel_j(-0.5, 1.0), domain_error);
    EXPECT_THROW(bessel_j(0.0, -1.0), domain_error);
}

// Relative to the local amplitude max(|J|, sqrt(2/(pi x))): a pointwise
// relative error is undefined at the zeros of J.
TEST(BesselJ, AgreesWithSeriesOracleOnGrid) {
    for (double nu : {0.0, 0.5, 1.0, 2.5, 7.3, 20.0}) {
        for (double x : {0.1, 1.0, 5.0, 17.0, 24.9, 25.0 + nu + 0.1, 31.0, 60.0, 150.0, 500.0, 1234.5, 2000.0}) {
            double ref = series_bessel(nu, x);
            double amp = std::max(std::abs(ref), x > nu ? std::sqrt(2.0 / (std::numbers::pi * x)) : 0.0);
            EXPECT_LE(std::abs(bessel_j(nu, x) - ref), 1e-13 * amp) << "nu = " << nu << ", x = " << x;
        }
    }
}

TEST(BesselJet, FirstDerivativeOfJ0) {
    TaylorJet j = bessel_j_jet(0.0, 1.0, 1);
    EXPECT_NEAR(j[1], -bessel_j(1.0, 1.0), 1e-15);
}

TEST(BesselJet, OrderZeroIsTheValue) {
    for (double nu : {0.0, 1.5, 4.0}) {
        TaylorJet j = bessel_j_jet(nu, 3.7, 0);
        ASSERT_EQ(j.order(), 0);
        EXPECT_DOUBLE_EQ(j[0], bessel_j(nu, 3.7));
    }
}

TEST(BesselJet, MatchesFiniteDifferences) {
    TaylorJet j = bessel_j_jet(0.0, 2.0, 4);
    for (int k = 1; k <= 4; ++k) {
        double fd = fd_coefficient(0.0, 2.0, k, 0.1);
        EXPECT_LE(std::abs(j[k] - fd), 1e-7 * std::max(1.0, std::abs(fd))) << "k = " << k;
    }
    TaylorJet j2 = bessel_j_jet(2.5, 7.0, 4);
    for (int k = 1; k <= 4; ++k) {
        double fd = fd_coefficient(2.5, 7.0, k, 0.1);
        EXPECT_LE(std::abs(j2[k] - fd), 1e-7 * std::max(1.0, std::abs(fd))) << "k = " << k;
    }
}

TEST(BesselJet, Errors) {
    EXPECT_THROW(bessel_j_jet(-1.0, 1.0, 2), domain_error);
    EXPECT_THROW(bessel_j_jet(0.0, 1.0, 13), domain_error);
}

TEST(BesselJet, OdeResidual) {
    for (double nu : {0.0, 0.5, 1.0, 2.5, 7.0}) {
        for (double x : {0.5, 3.0, 10.0, 26.0, 40.0, 200.0}) {
            TaylorJet j = bessel_j_jet(nu, x, 2);
            double J = j.derivative(0), J1 = j.derivative(1), J2 = j.derivative(2);
            double res = x * x * J2 + x * J1 + (x * x - nu * nu) * J;
            EXPECT_LE(std::abs(res), 1e-9 * std::max(1.0, std::abs(x * x * J))) << nu << " " << x;
        }
    }
}

TEST(Hyp2F3, ZeroArgumentIsOne) {
    auto r = hyp2f3(0.3, 1.7, 2.0, 0.5, 3.3, 0.0, 1e-20);
    EXPECT_EQ(r.value.to_double(), 1.0);
}

TEST(Hyp2F3, CancellingParameterGives1F2) {
    for (double z : {-0.7, -25.0, -900.0}) {
        double ref = series_1f2(0.75, 1.5, 2.25, z);
        double got = hyp2f3(0.75, 1.3, 1.3, 1.5, 2.25, z, 1e-20).value.to_double();
        EXPECT_LE(std::abs(got - ref), 1e-14 * std::abs(ref)) << "z = " << z;
    }
}

TEST(Hyp2F3, BesselSeriesIdentity) {
    const double nu = 0.0, x = 3.0;
    auto f = hyp2f3(1.0, 2.0, 1.0, 2.0, nu + 1.0, -x * x / 4.0, 1e-20);
    double v = std::pow(x / 2.0, nu) / bessel_ccf::gamma(nu + 1.0) * f.value.to_double();
    EXPECT_LE(std::abs(v - bessel_j(nu, x)), 1e-13);
}

TEST(Hyp2F3, PoleAtNonpositiveLowerParameter) {
    EXPECT_THROW(hyp2f3(1.0, 1.0, 0.0, 1.0, 1.0, -1.0, 1e-16), pole_error);
    EXPECT_THROW(hyp2f3(1.0, 1.0, 1.0, -3.0, 1.0, -1.0, 1e-16), pole_error);
}

TEST(Hyp2F3, DoubledPrecisionIsSelfConsistent) {
    const double tol = 1e-20;
    for (double w : {5.0, 40.0, 200.0}) {
        auto r = hyp2f3(0.6, 1.1, 1.0, 1.8, 2.3, -w * w / 4.0, tol);
        const mpfr_prec_t p = 2 * r.value.precision();
        const ExtendedReal a[2] = {ExtendedReal(0.6, p), ExtendedReal(1.1, p)};
        const ExtendedReal b[3] = {ExtendedReal(1.0, p), ExtendedReal(1.8, p), ExtendedReal(2.3, p)};
        double again = pochhammer_series(a, b, ExtendedReal(-w * w / 4.0, p), p).to_double();
        EXPECT_LE(std::abs(again - r.value.to_double()), std::max(tol, 1e-16) * std::abs(again)) << "w = " << w;
    }
}

TEST(ShiftedChebyshevPower, SmallCases) {
    auto c1 = shifted_cheb_power_coeffs(1);
    ASSERT_EQ(c1.size(), 2u);
    EXPECT_EQ(c1[0], 2);
    EXPECT_EQ(c1[1], -1);
    auto c2 = shifted_cheb_power_coeffs(2);
    ASSERT_EQ(c2.size(), 3u);
    EXPECT_EQ(c2[0], 8);
    EXPECT_EQ(c2[1], -8);
    EXPECT_EQ(c2[2], 1);
    EXPECT_EQ(shifted_cheb_power_coeffs(0)[0], 1);
}

TEST(ShiftedChebyshevPower, LeadingCoefficient) {
    for (int k = 1; k <= 30; ++k) {
        mpz_class lead(1);
        lead <<= static_cast<mp_bitcnt_t>(2 * k - 1);
        EXPECT_EQ(shifted_cheb_power_coeffs(k)[0], lead) << "k = " << k;
    }
}

TEST(ShiftedChebyshevPower, EvaluatesToCosineForm) {
    for (int k = 0; k <= 25; ++k) {
        auto c = shifted_cheb_power_coeffs(k);
        for (double x : {0.0, 0.3, 1.0}) {
            ExtendedReal X(x, 256), acc(0L, 256);
            for (const auto& cj : c) acc = acc * X + ExtendedReal(cj, 256);
            double ref = std::cos(2.0 * k * std::acos(std::sqrt(x)));
            EXPECT_NEAR(acc.to_double(), ref, 1e-12) << "k = " << k << ", x = " << x;
            if (k <= 5) {
                double d = 0.0;
                for (const auto& cj : c) d = d * x + cj.get_d();
                EXPECT_NEAR(d, ref, 1e-12) << "double, k = " << k;
            }
        }
    }
}

TEST(ExtendedRealArith, MatchesIeeeAtDoublePrecision) {
    const double xs[] = {0.1, 1.0 / 3.0, -2.75e10, 7.0e-300, 1.0 + 0x1p-52};
    for (double a : xs) {
        for (double b : xs) {
            ExtendedReal A(a, 53), B(b, 53);
            EXPECT_EQ((A + B).to_double(), a + b);
            EXPECT_EQ((A - B).to_double(), a - b);
            EXPECT_EQ((A * B).to_double(), a * b);
            EXPECT_EQ((A / B).to_double(), a / b);
        }
    }
}

TEST(ExtendedRealArith, ConversionRoundsOnce) {
    ExtendedReal third(1L, 300);
    third /= 3.0;
    EXPECT_EQ(third.to_double(), 1.0 / 3.0);
    ExtendedReal x(0.1, 200);
    EXPECT_EQ(x.to_double(), 0.1);
}

TEST(TaylorJetArith, PowerOfShiftedVariable) {
    const double c = 1.7, p = -0.35;
    TaylorJet j = pow(TaylorJet::variable(c, 6), p);
    double binom = 1.0;
    for (int k = 0; k <= 6; ++k) {
        EXPECT_NEAR(j[k], binom * std::pow(c, p - k), 1e-14) << "k = " << k;
        binom *= (p - k) / (k + 1.0);
    }
}

TEST(TaylorJetArith, ProductAndCompositionMatchFiniteDifferences) {
    const double x = 0.8, h = 1e-4;
    auto f = [](double t) { return std::sin(t) * std::pow(t, 1.5) + std::cos(t * t); };
    TaylorJet t = TaylorJet::variable(x, 3);
    TaylorJet jet = sin(t) * pow(t, 1.5) + cos(t * t);
    double d1 = (f(x + h) - f(x - h)) / (2 * h);
    double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    EXPECT_NEAR(jet.derivative(0), f(x), 1e-15);
    EXPECT_NEAR(jet.derivative(1), d1, 1e-7);
    EXPECT_NEAR(jet.derivative(2), d2, 1e-5);
}
