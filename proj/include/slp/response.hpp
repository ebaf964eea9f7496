// response.hpp: the energy left in the system after a local channel is a
// quadratic form in the Kraus operators,
//
//     Tr[H (G⊗I)(ρ)] = Σ_μ k_μ† W k_μ,   k_μ = row-major vec(K_μ),
//     W_{(c,d),(a,b)} = Tr[H_{ca} ρ_{bd}],
//
// where H_{ca}, ρ_{bd} are the d_r×d_r blocks of H and ρ in the split H_c ⊗ H_r.
// Everything downstream (oracle, bilinear fits, thresholds) consumes W.
//
// Two kernels compute the per-eigenstate matrices W_k (ρ = |E_k⟩⟨E_k|):
// a plain serial reference, and an OpenMP kernel working in the eigenbasis.

#pragma once

#include "slp/qcore.hpp"

#include <vector>

namespace slp {

// W for an arbitrary state, straight from the block formula.
ComplexMatrix response_matrix(const ComplexMatrix& h, const ComplexMatrix& rho, Bipartition dims);

class EigenResponse {
public:
    EigenResponse() = default;
    EigenResponse(std::vector<ComplexMatrix> levels, Bipartition dims)
        : levels_(std::move(levels)), dims_(dims) {}

    const ComplexMatrix& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
    int size() const { return static_cast<int>(levels_.size()); }
    Bipartition dims() const { return dims_; }

    // Σ_k p_k W_k, the response of the eigenmixture with populations p.
    ComplexMatrix mix(const RealVector& p) const;

private:
    std::vector<ComplexMatrix> levels_;
    Bipartition dims_;
};

EigenResponse eigen_response_serial(const HermitianOperator& h, Bipartition dims);
EigenResponse eigen_response(const HermitianOperator& h, Bipartition dims);

// Worker count: SLP_THREADS if set and positive, else the OpenMP default.
int worker_count();

}  // namespace slp
