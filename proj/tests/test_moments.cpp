#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

#include <bessel_ccf/moments.hpp>
#include <bessel_ccf/oracle.hpp>
#include <bessel_ccf/validation.hpp>

using namespace bessel_ccf;

namespace {

ProblemSpec weight(double a, double b, double nu, double w) { return ProblemSpec::make(a, b, nu, w); }

double rel(double got, double ref) { return std::abs(got - ref) / std::abs(ref); }

// A table whose entries (and two end values) all come from the oracle.
MomentTable oracle_table(const ProblemSpec& s, int N) {
    MomentTable t;
    t.alpha = s.alpha;
    t.beta = s.beta;
    t.nu = s.nu;
    t.omega = s.omega;
    for (int k = 0; k <= N; ++k) {
        auto r = reference_moment(s, k);
        t.values.push_back(r.value);
        t.err_est.push_back(r.err_est);
        t.method.push_back(MomentMethod::oracle_fallback);
    }
    for (int k = N + 1; k <= N + 2; ++k) {
        auto r = reference_moment(s, k);
        t.end_values.push_back(r.value);
        t.end_err_est.push_back(r.err_est);
        t.end_method.push_back(MomentMethod::oracle_fallback);
    }
    return t;
}

}  // namespace

TEST(PowerMoment, MatchesOracleAtUnitFrequency) {
    auto pm = power_moment(0.0, 0.0, 0.0, 1.0, 1e-20);
    auto ref = reference_moment(weight(0.0, 0.0, 0.0, 1.0), 0);
    EXPECT_LE(rel(pm.value.to_double(), ref.value), 1e-12);
}

TEST(PowerMoment, SmallFrequencyApproachesBeta) {
    const double beta_fn = std::exp(std::lgamma(1.2) + std::lgamma(1.4) - std::lgamma(2.6));
    auto pm = power_moment(0.2, 0.4, 0.0, 1e-3, 1e-20);
    EXPECT_LE(rel(pm.value.to_double(), beta_fn), 1e-6);
}

TEST(PowerMoment, ZeroArgumentReducesToBeta) {
    const double beta_fn = std::exp(std::lgamma(1.7) + std::lgamma(0.6) - std::lgamma(2.3));
    auto pm = power_moment(0.7, -0.4, 0.0, 0.0, 1e-20);
    EXPECT_LE(rel(pm.value.to_double(), beta_fn), 1e-15);
}

TEST(PowerMoment, RejectsInvalidExponents) {
    EXPECT_THROW(power_moment(-1.5, 0.0, 0.0, 1.0, 1e-16), parameter_error);
    EXPECT_THROW(power_moment(0.0, -1.0, 0.0, 1.0, 1e-16), parameter_error);
    EXPECT_NO_THROW(power_moment(-1.5, 0.0, 1.0, 1.0, 1e-16));
}

TEST(PowerMoment, ShiftedExponentMatchesOracle) {
    for (int m : {1, 3, 5}) {
        auto pm = power_moment(0.2, 0.4, 2.5, 20.0, 1e-24, m);
        auto ref = reference_moment(weight(0.2 + m, 0.4, 2.5, 20.0), 0);
        EXPECT_LE(rel(pm.value.to_double(), ref.value), 1e-11) << "m = " << m;
    }
}

TEST(StartingMoments, LowOrdersReduceToPowerMoments) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    auto st = starting_moments(s, 6);
    ASSERT_EQ(st.values.size(), 6u);
    double I0 = power_moment(0.2, 0.4, 0.0, 20.0, 1e-28).value.to_double();
    double I1 = power_moment(0.2, 0.4, 0.0, 20.0, 1e-28, 1).value.to_double();
    EXPECT_EQ(st.values[0], I0);
    EXPECT_NEAR(st.values[1], 2.0 * I1 - I0, 1e-16);
}

TEST(StartingMoments, AgreeWithOracle) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    auto st = starting_moments(s, 6);
    for (int k = 0; k < 6; ++k) {
        auto ref = reference_moment(s, k);
        EXPECT_LE(rel(st.values[k], ref.value), 1e-11) << "k = " << k;
        EXPECT_LE(st.err_est[k], 1e-13 * std::abs(st.values[k])) << "k = " << k;
    }
}

TEST(StartingMoments, CountLimits) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    EXPECT_EQ(starting_moments(s, 8).values.size(), 8u);
    EXPECT_THROW(starting_moments(s, 9), domain_error);
    EXPECT_THROW(starting_moments(s, 0), domain_error);
}

TEST(Recurrence, OracleMomentsSatisfyIt) {
    auto t = oracle_table(weight(0.2, 0.4, 0.0, 200.0), 44);
    for (int k : {10, 40}) EXPECT_LE(recurrence_residual(t, k), 1e-8) << "k = " << k;
    auto t50 = oracle_table(weight(0.2, 0.4, 0.0, 50.0), 24);
    EXPECT_LE(recurrence_residual(t50, 20), 1e-7);
}

TEST(Recurrence, HoldsAtLowIndicesUnderSymmetry) {
    auto t = oracle_table(weight(0.2, 0.4, 1.0, 20.0), 8);
    for (int k = 0; k <= 3; ++k) EXPECT_LE(recurrence_residual(t, k), 1e-9) << "k = " << k;
}

TEST(Recurrence, CoefficientsAtOffsetsThreeVanish) {
    auto c = recurrence_coefficients(weight(0.3, -0.2, 1.5, 40.0), 17);
    EXPECT_EQ(c[1], 0.0);
    EXPECT_EQ(c[7], 0.0);
    EXPECT_EQ(c[0], c[8]);
    EXPECT_EQ(c[0], 40.0 * 40.0 / 16.0);
}

TEST(ForwardMoments, AccurateBelowHalfFrequency) {
    const auto s = weight(0.2, 0.4, 0.0, 200.0);
    auto st = starting_moments(s, 6);
    auto f = forward_moments(s, st.values, 100);
    ASSERT_EQ(f.size(), 101u);
    for (int k : {6, 20, 50, 80, 100}) EXPECT_LE(rel(f[k], reference_moment(s, k).value), 1e-8) << "k = " << k;
}

TEST(ForwardMoments, DeterministicAndSensitive) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    auto st = starting_moments(s, 6).values;
    EXPECT_EQ(forward_moments(s, st, 40), forward_moments(s, st, 40));
    auto p = st;
    p[5] *= 1.0 + 1e-15;
    EXPECT_NE(forward_moments(s, st, 40), forward_moments(s, p, 40));
    EXPECT_THROW(forward_moments(s, std::vector<double>(5, 0.0), 40), domain_error);
    EXPECT_THROW(forward_moments(s, st, 4), domain_error);
}

TEST(ForwardMoments, UnstableAtLowFrequency) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    auto f = forward_moments(s, starting_moments(s, 6).values, 200);
    auto t = moment_table(s, 200);
    double worst_fwd = 0.0, worst_hybrid = 0.0;
    for (int k = 0; k <= 200; k += 10) {
        double ref = reference_moment(s, k).value;
        worst_fwd = std::max(worst_fwd, rel(f[k], ref));
        worst_hybrid = std::max(worst_hybrid, rel(t.values[k], ref));
    }
    EXPECT_GT(worst_fwd, 1e-2);
    EXPECT_LE(worst_hybrid, 1e-8);
}

TEST(EndMomentAsymptotic, MatchesOracle) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    for (int j : {400, 401}) {
        auto a = end_moment_asymptotic(s, j);
        auto ref = reference_moment(s, j);
        EXPECT_LE(std::abs(a.value - ref.value), a.err_est + ref.err_est + 1e-15 * std::abs(ref.value)) << j;
        EXPECT_LE(a.err_est, 1e-10 * std::abs(a.value)) << j;
    }
}

TEST(EndMomentAsymptotic, ParityFollowsSignFactor) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    auto even = end_moment_asymptotic(s, 400).value, odd = end_moment_asymptotic(s, 401).value;
    auto ref_odd = reference_moment(s, 401).value;
    EXPECT_EQ(std::signbit(odd), std::signbit(ref_odd));
    EXPECT_LT(even * odd, 0.0);
}

TEST(EndMomentAsymptotic, DecayRatio) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    double r = std::abs(end_moment_asymptotic(s, 800).value / end_moment_asymptotic(s, 400).value);
    double want = std::pow(2.0, -2.0 - 2.0 * 0.2);
    EXPECT_NEAR(r, want, 0.15 * want);
}

TEST(EndMomentAsymptotic, RequiresLargeIndex) {
    EXPECT_THROW(end_moment_asymptotic(weight(0.2, 0.4, 0.0, 20.0), 49), domain_error);
    EXPECT_THROW(end_moment_asymptotic(weight(0.2, 0.4, 0.0, 200.0), 399), domain_error);
    EXPECT_NO_THROW(end_moment_asymptotic(weight(0.2, 0.4, 0.0, 200.0), 400));
}

TEST(Oliver, SingleUnknownIsForcedByRecurrence) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    const int k = 12;
    std::vector<double> b;
    for (int i = k - 6; i <= k + 2; ++i) b.push_back(reference_moment(s, i).value);
    std::vector<double> start(b.begin(), b.begin() + 6), end{b[7], b[8]};
    auto sol = oliver_moments(s, k, k, start, end);
    ASSERT_EQ(sol.size(), 1u);
    auto c = recurrence_coefficients(s, k - 2);
    double acc = 0.0;
    for (int d = -4; d <= 4; ++d)
        if (d != 2) acc += c[d + 4] * b[static_cast<size_t>(d + 4)];
    EXPECT_NEAR(sol[0], -acc / c[6], 1e-14 * std::abs(sol[0]));
}

TEST(Oliver, OracleBoundariesReproduceInterior) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    std::vector<double> start, end;
    for (int k = 4; k < 10; ++k) start.push_back(reference_moment(s, k).value);
    for (int k = 201; k <= 202; ++k) end.push_back(reference_moment(s, k).value);
    auto sol = oliver_moments(s, 10, 200, start, end);
    ASSERT_EQ(sol.size(), 191u);
    for (int k : {50, 100, 200}) EXPECT_LE(rel(sol[k - 10], reference_moment(s, k).value), 1e-9) << "k = " << k;
}

TEST(Oliver, HomogeneousSystemHasZeroSolution) {
    const auto s = weight(-0.3, 0.1, 1.0, 30.0);
    auto sol = oliver_moments(s, 8, 60, std::vector<double>(6, 0.0), std::vector<double>(2, 0.0));
    for (double v : sol) EXPECT_EQ(v, 0.0);
}

TEST(Oliver, InvalidWindowsThrow) {
    const auto s = weight(0.2, 0.4, 0.0, 20.0);
    std::vector<double> six(6, 0.0), two(2, 0.0);
    EXPECT_THROW(oliver_moments(s, 5, 10, six, two), domain_error);
    EXPECT_THROW(oliver_moments(s, 10, 9, six, two), domain_error);
    EXPECT_THROW(oliver_moments(s, 10, 20, std::vector<double>(5, 0.0), two), domain_error);
}

TEST(MomentTableBuild, SmallNIsClosedForm) {
    auto t = moment_table(weight(0.2, 0.4, 0.0, 20.0), 3);
    ASSERT_EQ(t.values.size(), 4u);
    for (auto m : t.method) EXPECT_EQ(m, MomentMethod::closed_form);
    EXPECT_TRUE(t.end_values.empty());
}

TEST(MomentTableBuild, MethodLayout) {
    auto t = moment_table(weight(0.2, 0.4, 0.0, 20.0), 64);
    EXPECT_EQ(t.k_switch, 10);
    for (int k = 0; k <= 64; ++k) {
        MomentMethod want = k <= 5 ? MomentMethod::closed_form : k <= 10 ? MomentMethod::forward : MomentMethod::oliver;
        EXPECT_EQ(t.method[k], want) << "k = " << k;
    }
    ASSERT_EQ(t.end_values.size(), 2u);
    EXPECT_EQ(t.end_method[0], MomentMethod::asymptotic);

    auto small = moment_table(weight(0.2, 0.4, 0.0, 2.0), 30);
    EXPECT_EQ(small.k_switch, 5);
    EXPECT_EQ(small.end_method[0], MomentMethod::oracle_fallback);
    EXPECT_EQ(small.method[6], MomentMethod::oliver);

    auto fwd = moment_table(weight(0.2, 0.4, 0.0, 200.0), 40);
    EXPECT_EQ(fwd.k_switch, 40);
    EXPECT_EQ(fwd.method[40], MomentMethod::forward);
    EXPECT_TRUE(fwd.end_values.empty());
}

TEST(MomentTableBuild, AgreesWithOracleAtHighFrequency) {
    for (auto [a, b, tol] : {std::tuple{0.2, 0.4, 1e-9}, std::tuple{-0.8, -0.9, 1e-8}}) {
        const auto s = weight(a, b, 0.0, 200.0);
        auto t = moment_table(s, 512);
        for (int k : {0, 64, 256, 512}) EXPECT_LE(rel(t.values[k], reference_moment(s, k).value), tol) << a << " " << k;
    }
}

TEST(MomentTableBuild, SymmetricAccessAndPrefix) {
    auto t = moment_table(weight(0.2, 0.4, 0.0, 20.0), 64);
    for (int k = 0; k <= 66; ++k) EXPECT_EQ(t.at(-k), t.at(k));
    EXPECT_THROW(t.at(67), index_error);
    auto p = t.prefix(30);
    EXPECT_EQ(p.N(), 30);
    EXPECT_EQ(p.at(31), t.values[31]);
    EXPECT_EQ(p.at(32), t.values[32]);
    EXPECT_THROW(t.prefix(65), index_error);
}

TEST(MomentTableBuild, ErrorEstimatesBoundObservedError) {
    const auto s = weight(-0.8, -0.9, 2.5, 200.0);
    auto t = moment_table(s, 256);
    double mx = 0.0;
    for (double v : t.values) mx = std::max(mx, std::abs(v));
    for (double e : t.err_est) {
        EXPECT_GE(e, 0.0);
        EXPECT_LE(e, 1e-8 * mx);
    }
    for (int k : {3, 40, 100, 101, 180, 256}) {
        auto ref = reference_moment(s, k);
        EXPECT_LE(std::abs(t.values[k] - ref.value), t.err_est[k] + ref.err_est + 1e-15 * mx) << "k = " << k;
    }
}

TEST(MomentTableBuild, ConcurrentBuildsMatchSequential) {
    std::vector<ProblemSpec> specs = {weight(0.2, 0.4, 0.0, 20.0), weight(-0.5, -0.5, 1.0, 200.0),
                                      weight(-0.8, -0.9, 2.5, 50.0)};
    std::vector<MomentTable> seq, par(specs.size());
    for (const auto& s : specs) seq.push_back(moment_table(s, 300));
    std::vector<std::thread> threads;
    for (size_t i = 0; i < specs.size(); ++i)
        threads.emplace_back([&, i] { par[i] = moment_table(specs[i], 300); });
    for (auto& th : threads) th.join();
    for (size_t i = 0; i < specs.size(); ++i) EXPECT_EQ(seq[i].values, par[i].values);
}

TEST(RecurrenceResidual, ProducedTablesAreConsistent) {
    for (double w : {2.0, 20.0, 200.0}) {
        for (double nu : {0.0, 2.5}) {
            auto t = moment_table(weight(-0.8, 0.4, nu, w), 300);
            EXPECT_LE(validation::max_recurrence_residual(t), 1e-9) << w << " " << nu;
        }
    }
}

TEST(RecurrenceResidual, DetectsCorruption) {
    auto t = moment_table(weight(0.2, 0.4, 0.0, 50.0), 100);
    t.values[40] *= 1.01;
    EXPECT_GE(recurrence_residual(t, 40), 1e-3);
}

TEST(RecurrenceResidual, IndexErrors) {
    auto t = moment_table(weight(0.2, 0.4, 0.0, 50.0), 100);
    EXPECT_THROW(recurrence_residual(t, -1), index_error);
    EXPECT_THROW(recurrence_residual(t, 99), index_error);
    EXPECT_NO_THROW(recurrence_residual(t, 98));
}

TEST(MomentDecay, SlopeMatchesEndpointExponent) {
    for (auto [a, b] : {std::pair{0.2, 0.4}, std::pair{-0.8, -0.9}}) {
        auto t = moment_table(weight(a, b, 0.0, 20.0), 1024);
        double slope = validation::moment_decay_slope(t, 100, 1024);
        EXPECT_NEAR(slope, validation::predicted_decay(a, b), 0.25) << a << " " << b;
    }
}

TEST(MomentDecay, EndpointExponentIncludesBesselOrder) {
    EXPECT_DOUBLE_EQ(*validation::endpoint_decay(0.2, 0.4, 2.5), -2.8);
    EXPECT_DOUBLE_EQ(*validation::endpoint_decay(-0.5, -0.5, 2.5), -6.0);
    EXPECT_FALSE(validation::endpoint_decay(-0.5, -0.5, 0.0).has_value());
    auto t = moment_table(weight(0.2, 0.4, 2.5, 20.0), 1024);
    EXPECT_NEAR(validation::moment_decay_slope(t, 100, 1024), -2.8, 0.25);
}
