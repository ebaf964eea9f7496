#include "oracles.hpp"
#include "slp/localenergy.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace slp;

namespace {

// Test-side closed form: maximum of the qubit local-energy pattern.
double omega_ref(double eta, double xi) {
    const double g = 1.0 - eta * eta;
    if (std::abs(eta * xi) < g) return std::max(0.0, std::sqrt(1.0 + xi * xi / g) - xi - eta);
    return std::max(0.0, (std::abs(xi) - xi) + (std::abs(eta) - eta));
}

Eigenmixture pops(std::initializer_list<double> p) {
    RealVector v(static_cast<Eigen::Index>(p.size()));
    int i = 0;
    for (double x : p) v(i++) = x;
    return Eigenmixture::from_populations(v);
}

}  // namespace

TEST(DeltaE, IdentityAndGroundState) {
    const auto m = build_chain(3, 1.4);
    const auto rho = density(m, gibbs(m, Temperature::finite(0.9)));
    EXPECT_NEAR(delta_e(m, rho, KrausSet::identity(2)), 0.0, 1e-14);
    const auto ground = density(m, Eigenmixture::from_populations(RealVector::Unit(8, 0)));
    for (int s = 0; s < 50; ++s) EXPECT_LE(delta_e(m, ground, random_channel(2, 1 + s % 4, s)), 1e-10);
}

TEST(DeltaE, MatchesIndependentComputation) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.1, 4.0), g(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double kappa = u(rng), gamma = g(rng), temp = u(rng);
        const auto m = build_pair(kappa, gamma);
        const auto rho_lib = density(m, gibbs(m, Temperature::finite(temp)));
        const oracle::Mat h = oracle::pair_hamiltonian(kappa, gamma);
        const oracle::Mat rho_ref = oracle::gibbs_state(h, temp);
        const KrausSet ks = random_channel(2, 4, 500 + t);
        EXPECT_NEAR(delta_e(m, rho_lib, ks), oracle::extracted(h, rho_ref, ks.ops, 2, 2), 1e-10);
    }
}

TEST(DeltaE, ResetOnMixedStateMatchesBilinearForm) {
    const auto m = build_pair(2.0, 1.0);
    const auto mix = pops({0.25, 0.25, 0.25, 0.25});
    const auto form = bilinear_form(m, mix);
    EXPECT_NEAR(delta_e(m, density(m, mix), reset_to_zero()), form.delta_e(reset_to_zero()), 1e-10);
    EXPECT_LE(hermiticity_violation(form.w), 1e-12);
}

TEST(DeltaEk, SignsAndIdentity) {
    const auto m = build_chain(3, 2.0);
    const int top = m.dim() - 1;
    for (int s = 0; s < 40; ++s) {
        const KrausSet ks = random_channel(2, 1 + s % 4, 900 + s);
        EXPECT_LE(delta_e_k(m, 0, ks), 1e-12);
        EXPECT_GE(delta_e_k(m, top, ks), -1e-12);
        for (int k : {0, 3, top}) {
            const auto proj = density(m, Eigenmixture::from_populations(RealVector::Unit(m.dim(), k)));
            EXPECT_NEAR(delta_e_k(m, k, ks), delta_e(m, proj, ks), 1e-10);
        }
    }
    EXPECT_THROW(delta_e_k(m, m.dim(), reset_to_zero()), Error);
}

TEST(DeltaEk, XxxResetFromSinglet) {
    // singlet energy -3; after resetting particle one the state is |0><0| x I/2 with energy 0
    EXPECT_NEAR(delta_e_k(build_xxx(), 0, reset_to_zero()), -3.0, 1e-12);
}

TEST(BilinearForm, PairCoefficientsMatchAnalytics) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.2, 4.0), g(0.0, 1.0), t(0.2, 5.0);
    for (int i = 0; i < 30; ++i) {
        const double kappa = u(rng), gamma = g(rng);
        const auto m = build_pair(kappa, gamma);
        const auto mix = gibbs(m, Temperature::finite(t(rng)));
        const auto form = bilinear_form(m, mix);
        ASSERT_TRUE(form.pair.has_value());
        const double mm = std::sqrt(gamma * gamma * kappa * kappa + 4.0);
        const double d0 = mix.deltas->delta0, d1 = mix.deltas->delta1;
        EXPECT_LE(form.pair->residual, 1e-10);
        EXPECT_NEAR(form.pair->eta, 2.0 * d0 / mm, 1e-10);
        EXPECT_NEAR(form.pair->xi, gamma * gamma * kappa * kappa * d0 / mm + kappa * d1, 1e-10);
        EXPECT_NEAR(form.pair->mu, gamma * kappa * kappa * d0 / mm + gamma * kappa * d1, 1e-10);
    }
}

TEST(BilinearForm, GroundStateAndIsotropicCoupling) {
    const auto form = bilinear_form(build_pair(2.0, 1.0), pops({1, 0, 0, 0}));
    EXPECT_NEAR(form.pair->eta, 2.0 / std::sqrt(8.0), 1e-10);
    EXPECT_NEAR(form.pair->xi, 4.0 / std::sqrt(8.0), 1e-10);
    EXPECT_NEAR(form.pair->mu, form.pair->xi, 1e-10);

    const auto flat = build_pair(1.5, 0.0);
    const auto f0 = bilinear_form(flat, gibbs(flat, Temperature::finite(0.6)));
    EXPECT_NEAR(f0.pair->mu, 0.0, 1e-10);
}

TEST(BilinearForm, ThreeSiteChainHasPairShape) {
    const auto m = build_chain(3, 2.0);
    const auto form = bilinear_form(m, gibbs(m, Temperature::finite(1.0)));
    ASSERT_TRUE(form.pair.has_value());
    EXPECT_LE(form.pair->tied_residual, 1e-10);
    // reconstruct a random channel's energy from the fitted pattern
    const KrausSet ks = random_channel(2, 4, 77);
    const auto e = qubit_elements(ks);
    const double eta = form.pair->tied_eta, xi = form.pair->tied_xi;
    const double pattern = (1 - eta) * e.u.squaredNorm() - (1 + eta) * e.t.squaredNorm() +
                           xi * e.s.dot(e.v).real() + xi * e.u.dot(e.t).real() - xi;
    EXPECT_NEAR(form.delta_e(ks), pattern, 1e-10);
}

TEST(OmegaClosed, Examples) {
    EXPECT_DOUBLE_EQ(omega_closed(0.0, 0.0), 1.0);
    EXPECT_EQ(omega_branch(1.0 / std::sqrt(2.0), std::sqrt(2.0)), OmegaBranch::boundary);
    EXPECT_NEAR(omega_closed(1.0 / std::sqrt(2.0), std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_THROW(omega_interior(1.0, 0.0), Error);

    // populations (0.96, 0, 0.04, 0) are not passive but have no local energy
    const auto m = build_pair(2.0, 1.0);
    const auto pc = pair_coefficients(2.0, 1.0, pair_deltas(m, pops({0.96, 0, 0.04, 0})));
    EXPECT_EQ(omega_closed(pc.eta, pc.xi), 0.0);
}

TEST(OmegaClosed, MatchesReferenceOnDiamond) {
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) {
            const double d0 = -1 + i / 20.0, d1 = -1 + j / 20.0;
            if (std::abs(d0) + std::abs(d1) > 1) continue;
            const auto pc = pair_coefficients(2.0, 1.0, {d0, d1});
            EXPECT_NEAR(omega_closed(pc.eta, pc.xi), omega_ref(pc.eta, pc.xi), 1e-14);
        }
}

TEST(OmegaClosed, AgreesWithIndependentHillClimb) {
    const oracle::Mat h = oracle::pair_hamiltonian(2.0, 1.0);
    const auto m = build_pair(2.0, 1.0);
    const std::vector<PairDeltas> points{{0.0, 0.0}, {0.3, -0.2}, {-0.5, 0.4}, {0.7, 0.1}, {0.95, -0.05}};
    unsigned seed = 1;
    for (const auto& d : points) {
        const auto mix = pair_mixture(m, d);
        const auto pc = pair_coefficients(2.0, 1.0, d);
        // the library density only fixes populations; rebuild the state from the test Hamiltonian
        Eigen::SelfAdjointEigenSolver<oracle::Mat> es(h);
        const oracle::Mat rho =
            es.eigenvectors() * mix.populations.cast<oracle::cd>().asDiagonal() * es.eigenvectors().adjoint();
        const double climbed = oracle::hill_climb(h, rho, seed++);
        EXPECT_NEAR(std::max(0.0, climbed), omega_closed(pc.eta, pc.xi), 2e-3) << d.delta0 << "," << d.delta1;
        EXPECT_LE(climbed, omega_closed(pc.eta, pc.xi) + 1e-9);
    }
}

TEST(OmegaAniso, AgreesWithClosedFormWhenIsotropic) {
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const double d0 = -1 + i / 10.0, d1 = -1 + j / 10.0;
            if (std::abs(d0) + std::abs(d1) > 1 + 1e-12) continue;
            const auto pc = pair_coefficients(2.0, 1.0, {d0, d1});
            EXPECT_NEAR(omega_aniso(pc.eta, pc.xi, pc.mu).value, omega_closed(pc.eta, pc.xi), 1e-8);
        }
    EXPECT_NEAR(omega_aniso(0, 0, 0).value, 1.0, 1e-12);
}

TEST(OmegaAniso, AgreesWithOracle) {
    const auto m = build_pair(3.0, 0.5);
    const auto mix = gibbs(m, Temperature::finite(0.5));
    const auto pc = pair_coefficients(3.0, 0.5, *mix.deltas);
    const auto orc = oracle_maximize(m, density(m, mix), {});
    EXPECT_NEAR(omega_aniso(pc.eta, pc.xi, pc.mu).value, std::max(0.0, orc.best), 1e-6);
}

TEST(Oracle, SpecExamples) {
    OracleOptions opts;
    const auto xxx = build_xxx();
    EXPECT_LE(oracle_maximize(xxx, density(xxx, pops({1, 0, 0, 0})), opts).best, 1e-9);

    const auto m = build_pair(2.0, 1.0);
    const auto mixed = oracle_maximize(m, density(m, pops({0.25, 0.25, 0.25, 0.25})), opts);
    EXPECT_NEAR(mixed.best, 1.0, 1e-6);
    EXPECT_TRUE(validate(mixed.channel).valid);

    const auto warm = oracle_maximize(m, density(m, gibbs(m, Temperature::finite(1.0))), opts);
    EXPECT_GE(warm.best, -1e-12);
    EXPECT_LE(warm.best, 1e-6);
}

TEST(Oracle, DeterministicAndBestOfRestarts) {
    const auto m = build_pair(1.5, 1.0);
    const auto rho = density(m, gibbs(m, Temperature::finite(2.0)));
    OracleOptions opts;
    opts.restarts = 8;
    opts.seed = 123;
    const auto a = oracle_maximize(m, rho, opts);
    const auto b = oracle_maximize(m, rho, opts);
    EXPECT_EQ(a.best, b.best);
    ASSERT_EQ(a.per_restart.size(), 8u);
    EXPECT_EQ(a.best, *std::max_element(a.per_restart.begin(), a.per_restart.end()));
    EXPECT_NEAR(delta_e(m, rho, a.channel), a.best, 1e-10);
}

TEST(Oracle, RejectsZeroRestarts) {
    const auto m = build_pair(2.0, 1.0);
    OracleOptions opts;
    opts.restarts = 0;
    EXPECT_THROW(oracle_maximize(m, density(m, pops({1, 0, 0, 0})), opts), Error);
}

TEST(Coherence, DirectAgreesWithCorrectedExpression) {
    const auto base = pops({0.95, 0, 0.05, 0});
    const auto ev = coherence_delta_e(2.0, base, 0.1, 0.1);
    EXPECT_NEAR(ev.eta, 0.6718, 1e-4);
    EXPECT_NEAR(ev.xi, 1.2435, 1e-4);
    EXPECT_NEAR(ev.a, 8.922, 1e-3);
    EXPECT_NEAR(ev.printed, 0.0202, 1e-4);
    EXPECT_NEAR(ev.corrected, ev.direct, 1e-12);
    EXPECT_GT(ev.direct, 0.0);

    // r = 0: no gain from the rotation
    const auto flat = coherence_delta_e(2.0, base, 0.0, 0.3);
    EXPECT_LE(flat.direct, 0.0);
    EXPECT_NEAR(flat.corrected, flat.direct, 1e-12);
}

TEST(Coherence, WitnessLimitBracketsSignChange) {
    const auto base = pops({0.95, 0, 0.05, 0});
    const double limit = coherence_witness_limit(2.0, base, 0.1);
    EXPECT_GT(coherence_delta_e(2.0, base, 0.1, 0.5 * limit).direct, 0.0);
    EXPECT_LT(coherence_delta_e(2.0, base, 0.1, limit + 0.05).direct, 0.0);
    EXPECT_THROW(coherence_witness_limit(2.0, base, 0.0), Error);
}
