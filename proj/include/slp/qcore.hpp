// qcore.hpp: dense complex linear algebra: Hermitian eigensystems, Kronecker
// products, partial traces and Schmidt decompositions of bipartite states.

#pragma once

#include "slp/error.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace slp {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Largest dimension handled by the dense routines (a 12-qubit register).
inline constexpr int kMaxDim = 1 << 12;

// Tensor split H = H_c ⊗ H_r. Basis index of |c⟩|r⟩ is c * rest + r.
struct Bipartition {
    int sub = 2;
    int rest = 1;

    int total() const noexcept { return sub * rest; }
    friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

enum class Factor { subsystem, rest };

double max_abs(const ComplexMatrix& m);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
double hermiticity_violation(const ComplexMatrix& m);

// Hermitian matrix together with its spectral decomposition. Eigenvalues are
// ascending; each eigenvector has its largest-magnitude entry real positive.
class HermitianOperator {
public:
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const RealVector& energies() const noexcept { return energies_; }
    const ComplexMatrix& eigenvectors() const noexcept { return vectors_; }
    ComplexVector eigenvector(int k) const;
    int dim() const noexcept { return static_cast<int>(energies_.size()); }
    double energy(int k) const { return energies_(k); }

    // Groups of indices whose energies agree within the cluster tolerance.
    const std::vector<std::vector<int>>& clusters() const noexcept { return clusters_; }
    double cluster_tolerance() const noexcept { return cluster_tol_; }

    // -M, with the spectrum reversed so eigenvalues stay ascending.
    HermitianOperator negated() const;

    // ‖U†U − I‖_max and ‖U D U† − M‖_max.
    double orthonormality_error() const;
    double reconstruction_error() const;

private:
    friend HermitianOperator eig_hermitian(const ComplexMatrix& m);

    ComplexMatrix matrix_;
    RealVector energies_;
    ComplexMatrix vectors_;
    std::vector<std::vector<int>> clusters_;
    double cluster_tol_ = 0.0;
};

HermitianOperator eig_hermitian(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_trace(const ComplexMatrix& m, Bipartition dims, Factor keep);

struct SchmidtForm {
    RealVector coefficients;  // q_s, nonincreasing, summing to one
    ComplexMatrix left;       // columns |c_s⟩ in H_c
    ComplexMatrix right;      // columns |r_s⟩ in H_r
    int rank = 0;             // number of q_s above the zero threshold

    ComplexVector reconstruct() const;
};

inline constexpr double kSchmidtZero = 1e-9;

SchmidtForm schmidt(const ComplexVector& state, Bipartition dims);

struct EigenstateClass {
    bool nondegenerate = false;
    bool fully_entangled = false;
    double gap = 0.0;  // distance to the nearest other level
    int schmidt_rank = 0;
};

// Nondegeneracy and entanglement of eigenstate k; these are the two
// hypotheses of the threshold theorem when k is the ground state.
EigenstateClass classify_eigenstate(const HermitianOperator& h, Bipartition dims, int k);

inline EigenstateClass ground_state_classify(const HermitianOperator& h, Bipartition dims) {
    return classify_eigenstate(h, dims, 0);
}

// Pauli matrices with σ^z|0⟩ = +|0⟩.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Single-site operator `op` on site `site` of an n-qubit register, site 0 leftmost.
ComplexMatrix embed_site(const ComplexMatrix& op, int site, int n);

}  // namespace slp
