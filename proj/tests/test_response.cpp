#include "oracles.hpp"
#include "slp/channels.hpp"
#include "slp/models.hpp"
#include "slp/response.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace slp;

TEST(ResponseMatrix, ReproducesEnergyAfterChannel) {
    const auto m = build_chain(4, 1.2);
    const auto rho = density(m, gibbs(m, Temperature::finite(0.8)));
    const ComplexMatrix w = response_matrix(m.hamiltonian.matrix(), rho, m.dims);
    EXPECT_LE(hermiticity_violation(w), 1e-12);
    for (int s = 0; s < 20; ++s) {
        const KrausSet ks = random_channel(2, 1 + s % 4, s);
        double quad = 0.0;
        for (const auto& k : ks.ops) {
            ComplexVector v(4);
            v << k(0, 0), k(0, 1), k(1, 0), k(1, 1);
            quad += v.dot(w * v).real();
        }
        const ComplexMatrix after = oracle::apply_first(ks.ops, rho, m.dims.sub, m.dims.rest);
        EXPECT_NEAR(quad, (m.hamiltonian.matrix() * after).trace().real(), 1e-10);
    }
}

TEST(EigenResponse, SerialAndParallelAgree) {
    setenv("SLP_THREADS", "3", 1);  // oversubscribe so the parallel path runs even on one core
    for (int n : {2, 3, 5, 7}) {
        const auto m = build_chain(n, 1.7);
        const auto serial = eigen_response_serial(m.hamiltonian, m.dims);
        const auto parallel = eigen_response(m.hamiltonian, m.dims);
        ASSERT_EQ(serial.size(), parallel.size());
        // the reductions sum in a different order, so allow rounding at the scale of the entries
        for (int k = 0; k < serial.size(); ++k)
            EXPECT_LE(max_abs(serial.level(k) - parallel.level(k)), 1e-14 * (1.0 + max_abs(serial.level(k))) * n);
    }
    unsetenv("SLP_THREADS");
}

TEST(EigenResponse, MixEqualsResponseOfDensity) {
    const auto m = build_pair(2.0, 0.6);
    const auto mix = gibbs(m, Temperature::finite(1.3));
    const auto resp = eigen_response(m.hamiltonian, m.dims);
    const ComplexMatrix direct = response_matrix(m.hamiltonian.matrix(), density(m, mix), m.dims);
    EXPECT_LE(max_abs(resp.mix(mix.populations) - direct), 1e-13);
}

TEST(WorkerCount, HonoursEnvironment) {
    setenv("SLP_THREADS", "1", 1);
    EXPECT_EQ(worker_count(), 1);
    unsetenv("SLP_THREADS");
    EXPECT_GE(worker_count(), 1);
}
