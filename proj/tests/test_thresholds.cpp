#include "slp/thresholds.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace slp;

namespace {

bool passive_ref(double kappa, double d0, double d1) {
    const double m = std::sqrt(kappa * kappa + 4.0);
    const double eta = 2.0 * d0 / m, xi = kappa * kappa * d0 / m + kappa * d1;
    const double g = 1.0 - eta * eta;
    if (std::abs(eta * xi) < g) return std::sqrt(1.0 + xi * xi / g) - xi - eta <= 0.0;
    return (std::abs(xi) - xi) + (std::abs(eta) - eta) <= 0.0;
}

// Least p0 from which a two-level mixture of E_0 and E_k stays passive,
// found by bisection on the test-side closed form.
double vertex_threshold_ref(double kappa, int k) {
    auto deltas = [k](double p0) -> std::pair<double, double> {
        const double q = 1.0 - p0;
        switch (k) {
            case 1: return {p0, q};
            case 2: return {p0, -q};
            default: return {p0 - q, 0.0};
        }
    };
    double lo = 0.5, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const auto [d0, d1] = deltas(mid);
        (passive_ref(kappa, d0, d1) ? hi : lo) = mid;
    }
    return hi;
}

// Temperature at which eta*xi = 1 - eta^2 for the isotropic pair, by plain bisection.
double pair_tstar_ref(double kappa) {
    const double m = std::sqrt(kappa * kappa + 4.0);
    auto g = [&](double t) {
        const double z = 2.0 * std::cosh(m / t) + 2.0 * std::cosh(kappa / t);
        const double d0 = 2.0 * std::sinh(m / t) / z, d1 = 2.0 * std::sinh(kappa / t) / z;
        const double eta = 2.0 * d0 / m, xi = kappa * kappa * d0 / m + kappa * d1;
        return eta * xi - (1.0 - eta * eta);
    };
    double lo = 0.01, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(lo * hi);
        (g(mid) >= 0.0 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

TEST(ThresholdPair, KappaTwo) {
    const auto th = threshold_pair(2.0);
    EXPECT_NEAR(th.p_star, 0.9383, 5e-5);
    EXPECT_NEAR(th.delta_star, 0.8767, 5e-5);
    EXPECT_NEAR(th.delta_star, std::sqrt(8.0) * th.delta_star_printed, 1e-12);
    EXPECT_THROW(threshold_pair(0.0), Error);
}

TEST(ThresholdPair, CornerIsTheClosedFormZeroCrossing) {
    for (double kappa : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const auto th = threshold_pair(kappa);
        // on the edge delta1 = delta0 - 1 the state is passive exactly from delta*
        // the local energy vanishes quadratically there, so bisection on its sign
        // resolves the crossing only to about the square root of rounding
        EXPECT_NEAR(th.delta_star, vertex_threshold_ref(kappa, 2), 1e-7) << kappa;
    }
}

TEST(ThresholdPair, DecreasingInKappa) {
    double prev = 1.0;
    for (double kappa : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double p = threshold_pair(kappa).p_star;
        EXPECT_LT(p, prev) << kappa;
        prev = p;
    }
}

TEST(ThresholdPair, SufficientOnBoundarySweep) {
    const auto th = threshold_pair(2.0);
    for (int i = 0; i <= 200; ++i) {
        const double p0 = th.p_star + (1.0 - th.p_star) * i / 200.0;
        // sweep the remaining weight over the three excited levels
        for (int j = 0; j <= 20; ++j)
            for (int l = 0; l + j <= 20; ++l) {
                const double q = 1.0 - p0;
                const double p1 = q * j / 20.0, p2 = q * l / 20.0, p3 = q - p1 - p2;
                EXPECT_TRUE(passive_ref(2.0, p0 - p3, p1 - p2)) << p0 << " " << p1 << " " << p2;
            }
    }
}

TEST(ThresholdGeneral, TopLevelVertexMatchesClosedForm) {
    const auto m = build_pair(2.0, 1.0);
    ThresholdOptions opts;
    opts.k_worst = 3;
    const auto g = threshold_general(m, opts);
    // The oracle decides at 1e-8 on a local energy that grows quadratically
    // below the vertex threshold, so it lands a few 1e-5 under the exact value.
    EXPECT_NEAR(g.p_star, vertex_threshold_ref(2.0, 3), 1e-4);
    EXPECT_LE(g.p_star, vertex_threshold_ref(2.0, 3) + 1e-6);
    // analytic value of the same vertex: delta0^2 = m^2 / (2 kappa^2 + 4)
    EXPECT_NEAR(vertex_threshold_ref(2.0, 3), 0.5 * (1.0 + std::sqrt(8.0 / 12.0)), 1e-7);
    EXPECT_EQ(g.worst_level, 3);
}

TEST(ThresholdGeneral, NotApplicableCases) {
    EXPECT_THROW(threshold_general(build_pair(1.0, 0.0)), Error);
    EXPECT_THROW(charging_threshold(build_xxx()), Error);
}

TEST(CriticalTemperature, IsotropicPair) {
    const auto ct = critical_temperature(build_pair(2.0, 1.0));
    EXPECT_EQ(ct.method, TStarMethod::closed_condition);
    EXPECT_GT(ct.t_star, 0.99);
    EXPECT_LT(ct.t_star, 1.00);
    EXPECT_NEAR(ct.t_star, pair_tstar_ref(2.0), 2e-6 * ct.t_star);
    EXPECT_LE(ct.t_lo, ct.t_star);
    EXPECT_GE(ct.t_hi, ct.t_star);
    EXPECT_LE(ct.t_hi / ct.t_lo, 1.0 + 1e-6 + 1e-12);
}

TEST(CriticalTemperature, DegenerateAndSeparableGiveZero) {
    EXPECT_EQ(critical_temperature(build_pair(2.0 / std::sqrt(0.75), 0.5)).t_star, 0.0);
    EXPECT_EQ(critical_temperature(build_pair(1.5, 0.0)).t_star, 0.0);
}

TEST(CriticalTemperature, XxxIsUnbounded) {
    const auto ct = critical_temperature(build_xxx());
    EXPECT_TRUE(std::isinf(ct.t_star));
    EXPECT_TRUE(ct.certified);
}

TEST(CriticalTemperature, AnisotropicBracketIsConsistent) {
    const auto m = build_pair(3.0, 0.5);
    const auto ct = critical_temperature(m);
    ASSERT_TRUE(std::isfinite(ct.t_star));
    ASSERT_GT(ct.t_star, 0.0);
    CriticalTemperatureOptions opts;
    EXPECT_LE(gibbs_local_energy(m, Temperature::finite(ct.t_lo), TStarMethod::omega_maximizer, opts), 0.0);
    EXPECT_GT(gibbs_local_energy(m, Temperature::finite(ct.t_hi), TStarMethod::omega_maximizer, opts), 0.0);
    EXPECT_GT(gibbs_local_energy(m, Temperature::finite(2.0 * ct.t_star), TStarMethod::oracle, opts), 0.0);
}

TEST(SignCertificate, XxxHoldsPairDoesNot) {
    const auto xxx = build_xxx();
    const auto form = bilinear_form(xxx, gibbs(xxx, Temperature::finite(3.0)));
    const auto cert = heisenberg_sign_certificate(form.w, form.c0);
    EXPECT_TRUE(cert.holds);
    EXPECT_LE(cert.residual, 1e-9);

    const auto pair = build_pair(2.0, 1.0);
    const auto pf = bilinear_form(pair, gibbs(pair, Temperature::finite(3.0)));
    EXPECT_FALSE(heisenberg_sign_certificate(pf.w, pf.c0).holds);
}

TEST(ChainCurve, TwoSitesMatchPair) {
    const std::vector<double> kappas{1.0, 2.0, 4.0};
    const auto pts = chain_critical_curve({2}, kappas);
    ASSERT_EQ(pts.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(pts[i].t_star, critical_temperature(build_pair(kappas[i], 1.0)).t_star, 1e-6 * pts[i].t_star);
        EXPECT_LE(pts[i].residual, 1e-9);
    }
}
