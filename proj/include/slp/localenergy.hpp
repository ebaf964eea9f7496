// localenergy.hpp: energy extracted by a local channel, its per-eigenstate
// decomposition, the quadratic form behind it, and the maximum over channels
// (local energy Ω∘) by closed forms and by direct search.

#pragma once

#include "slp/channels.hpp"
#include "slp/models.hpp"
#include "slp/response.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace slp {

// Tr[Hρ] − Tr[H (G⊗I)(ρ)]
double delta_e(const SystemModel& model, const ComplexMatrix& rho, const KrausSet& ks);

// Energy lost from eigenstate k: Σ_{k'≠k} (E_k − E_k') Σ_μ |⟨E_k'|K_μ|E_k⟩|².
double delta_e_k(const SystemModel& model, int k, const KrausSet& ks);

// Coefficients of the qubit-channel energy pattern
//   ΔE = (1−η)u†u − (1+η)t†t + ξ(s†v + v†s)/2 + μ(u†t + t†u)/2 − ξ,
// recovered from W by least squares modulo the completeness constraints.
struct PairCoefficients {
    double eta = 0.0;
    double xi = 0.0;
    double mu = 0.0;
    double residual = 0.0;       // fit with μ free
    double tied_eta = 0.0;       // fit with μ = ξ
    double tied_xi = 0.0;
    double tied_residual = 0.0;
};

PairCoefficients fit_pair_pattern(const ComplexMatrix& w, double c0);

// η = 2δ0/m, ξ = γ²κ²δ0/m + κδ1, μ = γκ²δ0/m + γκδ1
PairCoefficients pair_coefficients(double kappa, double gamma, PairDeltas deltas);

struct BilinearEnergyForm {
    ComplexMatrix w;  // energy after the channel is Σ_μ k_μ† W k_μ
    double c0 = 0.0;  // Tr[Hρ]
    Bipartition dims;
    std::optional<PairCoefficients> pair;  // qubit subsystems only

    double delta_e(const KrausSet& ks) const;
};

// W assembled by evaluating the energy functional on pairs of operator-basis
// elements |a⟩⟨b| ⊗ I, independent of the block formula in response.hpp.
BilinearEnergyForm bilinear_form(const SystemModel& model, const ComplexMatrix& rho);
BilinearEnergyForm bilinear_form(const SystemModel& model, const Eigenmixture& mix);

// Wrap a response matrix (from either kernel) with its fit.
BilinearEnergyForm form_from_response(ComplexMatrix w, double c0, Bipartition dims);

enum class OmegaBranch { interior, boundary };

OmegaBranch omega_branch(double eta, double xi);

// Unclamped interior expression √((1−η²+ξ²)/(1−η²)) − ξ − η.
double omega_interior(double eta, double xi);

// Closed-form local energy of the pair pattern with μ = ξ, clamped at zero.
double omega_closed(double eta, double xi);

struct AnisoMaximum {
    double value = 0.0;  // max ω, clamped at zero
    double raw = 0.0;    // unclamped max ω
    double alpha = 0.0;
    double beta = 0.0;
    double grad_norm = 0.0;
};

// ω(α,β) = (1−η)sin²α − (1+η)sin²β + |ξ|cosα cosβ + |μ|sinα sinβ − ξ
double omega_angles(double eta, double xi, double mu, double alpha, double beta);

// Global maximum of ω by a 513² grid followed by Newton polish.
AnisoMaximum omega_aniso(double eta, double xi, double mu);

struct OracleOptions {
    int n_ops = 0;  // 0 means d_c²
    int restarts = 64;
    std::uint64_t seed = 0;
    int max_iterations = 10000;
    double grad_tol = 1e-9;
    // A restart stops as soon as it exceeds this value; remaining restarts
    // are skipped. Used by yes/no passivity decisions.
    double stop_above = std::numeric_limits<double>::infinity();
};

struct OracleResult {
    double best = 0.0;  // best ΔE found
    KrausSet channel;
    int restarts = 0;
    long iterations = 0;  // summed over restarts
    bool converged = false;  // the winning restart met the gradient tolerance
    bool stopped_early = false;  // stop_above was reached
    std::vector<double> per_restart;
};

// Riemannian ascent of ΔE over stacked Kraus isometries, best over restarts.
OracleResult oracle_maximize(const ComplexMatrix& w, double c0, int sub_dim, const OracleOptions& opts);
OracleResult oracle_maximize(const SystemModel& model, const ComplexMatrix& rho, const OracleOptions& opts);

// Single-unitary extraction from ρ' = ρ + r(|E2⟩⟨E0| + h.c.) on the γ = 1 pair.
struct CoherenceEvaluation {
    double eta = 0.0;
    double xi = 0.0;
    double a = 0.0;           // A = (2/κ)√((m−2)/m)(2 + (m+κ)(κ+1))
    double printed = 0.0;     // (2 sin²φ/(mκ)) [rA cot φ − η − 2ξ]
    double corrected = 0.0;   // 2 sin²φ [rC cot φ − η − ξ], C from the general coherent expression
    double direct = 0.0;      // delta_e on ρ' with K = exp(−iφσ^y)
};

CoherenceEvaluation coherence_delta_e(double kappa, const Eigenmixture& base, double r, double phi);

// Smallest φ ∈ (0, π/2) beyond which the corrected expression turns negative;
// every φ below it extracts energy when r > 0.
double coherence_witness_limit(double kappa, const Eigenmixture& base, double r);

}  // namespace slp
