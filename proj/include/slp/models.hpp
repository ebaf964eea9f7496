// models.hpp: Hamiltonians of the spin systems studied here and the states
// built on their eigenbases (eigenmixtures, Gibbs states, coherent perturbations).

#pragma once

#include "slp/qcore.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace slp {

enum class ModelKind { pair, chain, xxx, custom };

std::string_view to_string(ModelKind kind) noexcept;

// Sign of the nearest-neighbour σ^xσ^x term in the ring. Antiferromagnetic
// (+κ) is the default; the ferromagnetic ring is kept for comparison runs.
enum class Coupling { antiferro, ferro };

struct ModelParams {
    double kappa = 0.0;
    double gamma = 1.0;
    int n = 2;
    Coupling coupling = Coupling::antiferro;
};

struct SystemModel {
    ModelKind kind = ModelKind::custom;
    ModelParams params;
    HermitianOperator hamiltonian;
    Bipartition dims;   // distinguished particle ⊗ rest
    bool negated = false;

    int dim() const noexcept { return hamiltonian.dim(); }
    double pair_m() const;  // √(γ²κ²+4), pair models only
};

SystemModel build_pair(double kappa, double gamma);
SystemModel build_chain(int n, double kappa, Coupling coupling = Coupling::antiferro);
SystemModel build_xxx();
SystemModel build_custom(const RealVector& energies, const ComplexMatrix& basis, Bipartition dims);

// Same system with H → −H; extraction problems on it are injection problems
// on the original.
SystemModel negate(const SystemModel& model);

// Temperature in energy units. Infinity is an explicit state, not a large float.
class Temperature {
public:
    static Temperature finite(double t);
    static Temperature infinite() noexcept { return Temperature(); }

    bool is_infinite() const noexcept { return infinite_; }
    double value() const noexcept;
    double beta() const noexcept { return infinite_ ? 0.0 : 1.0 / t_; }

private:
    Temperature() = default;
    double t_ = 0.0;
    bool infinite_ = true;
};

struct PairDeltas {
    double delta0 = 0.0;  // p(−m) − p(+m)
    double delta1 = 0.0;  // p(−κ) − p(+κ)
};

struct Eigenmixture {
    RealVector populations;  // aligned with the ascending eigenbasis
    std::optional<PairDeltas> deltas;

    static Eigenmixture from_populations(const RealVector& p);
    double p(int k) const { return populations(k); }
};

// Indices in the ascending eigenbasis of the −m, −κ, +κ, +m levels.
std::array<int, 4> pair_level_order(const SystemModel& model);

PairDeltas pair_deltas(const SystemModel& model, const Eigenmixture& mix);

// An eigenmixture with the given differences (|δ0| + |δ1| ≤ 1); leftover
// weight is shared equally by the two level pairs.
Eigenmixture pair_mixture(const SystemModel& model, PairDeltas deltas);

Eigenmixture gibbs(const SystemModel& model, Temperature t);

// Closed-form Gibbs differences for a pair: δ0 = 2 sinh(m/T)/Z, δ1 = 2 sinh(κ/T)/Z.
PairDeltas gibbs_pair_deltas(double kappa, double m, Temperature t);

ComplexMatrix density(const SystemModel& model, const Eigenmixture& mix);

struct CoherentState {
    Eigenmixture base;
    double r = 0.0;
    ComplexMatrix rho;  // ρ + r(|E2⟩⟨E0| + |E0⟩⟨E2|)
};

CoherentState coherent_perturb(const SystemModel& model, const Eigenmixture& base, double r);

}  // namespace slp
