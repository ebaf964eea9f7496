#include "slp/response.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace slp {

int worker_count() {
    if (const char* env = std::getenv("SLP_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

ComplexMatrix response_matrix(const ComplexMatrix& h, const ComplexMatrix& rho, Bipartition dims) {
    const int c = dims.sub;
    const int r = dims.rest;
    if (h.rows() != c * r || h.cols() != c * r || rho.rows() != c * r || rho.cols() != c * r) {
        throw Error(ErrorCode::DimensionMismatch, "response_matrix: operands do not match d_c*d_r");
    }
    ComplexMatrix w(c * c, c * c);
    for (int ci = 0; ci < c; ++ci)
        for (int di = 0; di < c; ++di)
            for (int ai = 0; ai < c; ++ai)
                for (int bi = 0; bi < c; ++bi) {
                    const auto hb = h.block(ci * r, ai * r, r, r);
                    const auto rb = rho.block(bi * r, di * r, r, r);
                    w(ci * c + di, ai * c + bi) = hb.cwiseProduct(rb.transpose()).sum();
                }
    return w;
}

ComplexMatrix EigenResponse::mix(const RealVector& p) const {
    if (p.size() != size()) throw Error(ErrorCode::DimensionMismatch, "population count mismatch");
    const int n = dims_.sub * dims_.sub;
    ComplexMatrix w = ComplexMatrix::Zero(n, n);
    for (int k = 0; k < size(); ++k) {
        if (p(k) != 0.0) w += p(k) * levels_[static_cast<std::size_t>(k)];
    }
    return w;
}

EigenResponse eigen_response_serial(const HermitianOperator& h, Bipartition dims) {
    const int c = dims.sub;
    const int r = dims.rest;
    const int d = h.dim();
    if (d != c * r) throw Error(ErrorCode::DimensionMismatch, "eigen_response: dims do not match operator");
    const ComplexMatrix& m = h.matrix();
    std::vector<ComplexMatrix> levels(static_cast<std::size_t>(d));
    ComplexVector hpsi(r);
    for (int k = 0; k < d; ++k) {
        const ComplexVector psi = h.eigenvector(k);
        ComplexMatrix w(c * c, c * c);
        // W_k(cd, ab) = ψ_d† H_{ca} ψ_b
        for (int ci = 0; ci < c; ++ci)
            for (int ai = 0; ai < c; ++ai)
                for (int bi = 0; bi < c; ++bi) {
                    hpsi.noalias() = m.block(ci * r, ai * r, r, r) * psi.segment(bi * r, r);
                    for (int di = 0; di < c; ++di) {
                        w(ci * c + di, ai * c + bi) = psi.segment(di * r, r).dot(hpsi);
                    }
                }
        levels[static_cast<std::size_t>(k)] = std::move(w);
    }
    return EigenResponse(std::move(levels), dims);
}

EigenResponse eigen_response(const HermitianOperator& h, Bipartition dims) {
    const int c = dims.sub;
    const int r = dims.rest;
    const int d = h.dim();
    if (d != c * r) throw Error(ErrorCode::DimensionMismatch, "eigen_response: dims do not match operator");

    // In the eigenbasis H is diagonal, so with Y^{ab} = U†(|a⟩⟨b| ⊗ I)U,
    // W_k(cd, ab) = Σ_j E_j conj(Y^{cd}_{jk}) Y^{ab}_{jk}.
    const ComplexMatrix& u = h.eigenvectors();
    const ComplexMatrix uadj = u.adjoint();
    const RealVector& e = h.energies();
    const int pairs = c * c;
    constexpr int kChunk = 32;
    const int chunks = (d + kChunk - 1) / kChunk;

    std::vector<ComplexMatrix> levels(static_cast<std::size_t>(d));
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (int chunk = 0; chunk < chunks; ++chunk) {
        const int k0 = chunk * kChunk;
        const int nk = std::min(kChunk, d - k0);
        std::vector<ComplexMatrix> y(static_cast<std::size_t>(pairs));
        for (int ai = 0; ai < c; ++ai)
            for (int bi = 0; bi < c; ++bi) {
                y[static_cast<std::size_t>(ai * c + bi)].noalias() =
                    uadj.middleCols(ai * r, r) * u.block(bi * r, k0, r, nk);
            }
        ComplexMatrix yk(d, pairs);
        for (int j = 0; j < nk; ++j) {
            for (int ab = 0; ab < pairs; ++ab) yk.col(ab) = y[static_cast<std::size_t>(ab)].col(j);
            levels[static_cast<std::size_t>(k0 + j)] = yk.adjoint() * e.cast<cplx>().asDiagonal() * yk;
        }
    }
    return EigenResponse(std::move(levels), dims);
}

}  // namespace slp
