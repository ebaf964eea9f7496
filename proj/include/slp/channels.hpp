// channels.hpp: Kraus channels acting on the distinguished subsystem.

#pragma once

#include "slp/qcore.hpp"

#include <cstdint>
#include <vector>

namespace slp {

inline constexpr double kCompletenessTol = 1e-10;

struct KrausSet {
    std::vector<ComplexMatrix> ops;

    int dim() const { return ops.empty() ? 0 : static_cast<int>(ops.front().rows()); }
    int size() const { return static_cast<int>(ops.size()); }

    static KrausSet identity(int d);
};

// Qubit operators written K_μ = [[s_μ, t_μ], [u_μ, v_μ]].
struct QubitElements {
    ComplexVector s, t, u, v;
};

QubitElements qubit_elements(const KrausSet& ks);

struct ChannelReport {
    double completeness_violation = 0.0;  // ‖Σ K†K − I‖_max
    double element_violation = 0.0;       // qubit s,t,u,v constraints; 0 otherwise
    bool trivial = false;                 // every K_μ proportional to the identity
    bool valid = false;
};

ChannelReport validate(const KrausSet& ks);

// Σ_μ (K_μ ⊗ I) ρ (K_μ ⊗ I)†
ComplexMatrix apply_local(const KrausSet& ks, const ComplexMatrix& rho, Bipartition dims);

// Column stack V = [K_0; K_1; …] of shape (d_c·n_k) × d_c; completeness is V†V = I.
struct StiefelPoint {
    ComplexMatrix v;

    int sub_dim() const { return static_cast<int>(v.cols()); }
    int n_ops() const { return v.cols() == 0 ? 0 : static_cast<int>(v.rows() / v.cols()); }
    double isometry_error() const;
};

KrausSet from_stiefel(const StiefelPoint& point);
StiefelPoint to_stiefel(const KrausSet& ks);

// Thin QR factor with a positive real diagonal in R, so the factor is unique.
ComplexMatrix orthonormal_factor(const ComplexMatrix& a);

KrausSet random_channel(int sub_dim, int n_ops, std::uint64_t seed);

// exp(−iφσ^y) = [[cos φ, −sin φ], [sin φ, cos φ]]
KrausSet unitary_y(double phi);

// {|0⟩⟨0|, |0⟩⟨1|}
KrausSet reset_to_zero();

}  // namespace slp
