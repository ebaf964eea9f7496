#include "oracles.hpp"
#include "slp/channels.hpp"
#include "slp/sweep.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace slp;

namespace {

ComplexMatrix random_state(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
    ComplexMatrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

}  // namespace

TEST(Validate, Examples) {
    const auto id = validate(KrausSet::identity(2));
    EXPECT_EQ(id.completeness_violation, 0.0);
    EXPECT_TRUE(id.trivial);
    EXPECT_TRUE(id.valid);

    const auto reset = validate(reset_to_zero());
    EXPECT_EQ(reset.completeness_violation, 0.0);
    EXPECT_FALSE(reset.trivial);
    EXPECT_TRUE(reset.valid);

    KrausSet weak;
    weak.ops.push_back(0.9 * ComplexMatrix::Identity(2, 2));
    const auto w = validate(weak);
    EXPECT_NEAR(w.completeness_violation, 0.19, 1e-15);
    EXPECT_FALSE(w.valid);
}

TEST(ApplyLocal, ResetAndIdentity) {
    ComplexMatrix one = ComplexMatrix::Zero(4, 4);
    one(3, 3) = 1.0;  // |11><11|
    const ComplexMatrix out = apply_local(reset_to_zero(), one, {2, 2});
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    expect(1, 1) = 1.0;  // |01><01|
    EXPECT_LE(max_abs(out - expect), 1e-15);

    std::mt19937_64 rng(2);
    const ComplexMatrix rho = random_state(6, rng);
    EXPECT_LE(max_abs(apply_local(KrausSet::identity(2), rho, {2, 3}) - rho), 1e-15);
    EXPECT_THROW(apply_local(KrausSet::identity(2), rho, {2, 2}), Error);
}

TEST(ApplyLocal, YRotationByHalfPi) {
    std::mt19937_64 rng(4);
    const ComplexMatrix rho = random_state(4, rng);
    const ComplexMatrix sy = kron(pauli_y(), ComplexMatrix::Identity(2, 2));
    EXPECT_LE(max_abs(apply_local(unitary_y(std::numbers::pi / 2), rho, {2, 2}) - sy * rho * sy.adjoint()), 1e-14);
}

TEST(ApplyLocal, MatchesIndexLoopsAndPreservesTrace) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 1000; ++t) {
        const int dr = 1 << (t % 6);
        const int nk = 1 + t % 4;
        const KrausSet ks = random_channel(2, nk, 1000 + t);
        const ComplexMatrix rho = random_state(2 * dr, rng);
        const ComplexMatrix out = apply_local(ks, rho, {2, dr});
        EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
        EXPECT_LE(hermiticity_violation(out), 1e-12);
        if (t % 50 == 0) {
            EXPECT_LE(max_abs(out - oracle::apply_first(ks.ops, rho, 2, dr)), 1e-13);
            EXPECT_GE(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(out).eigenvalues().minCoeff(), -1e-12);
        }
    }
}

TEST(Stiefel, RoundTripAndRandomIsometry) {
    const KrausSet ks = random_channel(2, 4, 99);
    const StiefelPoint p = to_stiefel(ks);
    EXPECT_EQ(p.n_ops(), 4);
    EXPECT_LE(p.isometry_error(), 1e-12);
    const KrausSet back = from_stiefel(p);
    ASSERT_EQ(back.size(), ks.size());
    for (int i = 0; i < ks.size(); ++i) EXPECT_TRUE(back.ops[i] == ks.ops[i]);

    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    ComplexMatrix a(8, 2);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = cplx(g(rng), g(rng));
    const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(a).householderQ() * ComplexMatrix::Identity(8, 2);
    EXPECT_TRUE(validate(from_stiefel({q})).valid);

    StiefelPoint bad{2.0 * q};
    EXPECT_THROW(from_stiefel(bad), Error);
}

TEST(RandomChannel, DeterministicAndComplete) {
    const KrausSet a = random_channel(3, 2, 5), b = random_channel(3, 2, 5), c = random_channel(3, 2, 6);
    for (int i = 0; i < 2; ++i) EXPECT_TRUE(a.ops[i] == b.ops[i]);
    EXPECT_FALSE(a.ops[0] == c.ops[0]);

    const KrausSet u = random_channel(2, 1, 7);
    EXPECT_LE(max_abs(u.ops[0].adjoint() * u.ops[0] - ComplexMatrix::Identity(2, 2)), 1e-12);

    double total = 0.0;
    for (int s = 0; s < 10000; ++s) total += validate(random_channel(2, 4, s)).completeness_violation;
    EXPECT_LT(total / 10000, 1e-12);
}

TEST(UnitaryY, Entries) {
    EXPECT_LE(max_abs(unitary_y(0.0).ops[0] - ComplexMatrix::Identity(2, 2)), 0.0);
    const ComplexMatrix r = unitary_y(0.1).ops[0];
    EXPECT_NEAR(r(0, 0).real(), 0.995004, 1e-6);
    EXPECT_NEAR(r(0, 1).real(), -0.099833, 1e-6);
    EXPECT_NEAR(r(1, 0).real(), 0.099833, 1e-6);
    const ComplexMatrix half = unitary_y(std::numbers::pi / 2).ops[0];
    EXPECT_LE(max_abs(half - cplx(0, -1) * pauli_y()), 1e-15);
}

TEST(QubitElements, ResetChannel) {
    const auto e = qubit_elements(reset_to_zero());
    EXPECT_NEAR(e.s.squaredNorm(), 1.0, 1e-15);
    EXPECT_NEAR(e.t.squaredNorm(), 1.0, 1e-15);
    EXPECT_NEAR(e.u.squaredNorm(), 0.0, 1e-15);
    EXPECT_NEAR(e.v.squaredNorm(), 0.0, 1e-15);
}

TEST(KrausJson, ExactRoundTrip) {
    const KrausSet ks = random_channel(2, 3, 42);
    const Json j = kraus_to_json(ks);
    const KrausSet back = kraus_from_json(Json::parse(j.dump()));
    ASSERT_EQ(back.size(), 3);
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(back.ops[i] == ks.ops[i]);
}
