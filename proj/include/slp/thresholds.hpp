// thresholds.hpp: population thresholds and critical temperatures.

#pragma once

#include "slp/localenergy.hpp"
#include "slp/response.hpp"

#include <string>
#include <vector>

namespace slp {

struct PairThreshold {
    double delta_star = 0.0;          // positive root of (κ²+κm+2)δ² − κmδ − m²/2
    double p_star = 0.0;              // (1+δ*)/2
    double delta_star_printed = 0.0;  // (κ + √(3m²+2κm−8)) / (2(m²+κm−2)), no factor m
    double p_star_printed = 0.0;
};

// Corner of the passive region of the γ = 1 pair on the edge δ1 = δ0 − 1.
PairThreshold threshold_pair(double kappa);

struct ThresholdOptions {
    int k_worst = -1;       // restrict the adversarial level; -1 scans all excited levels
    double tol = 1e-8;      // passivity decision on the oracle maximum
    double p_tol = 1e-6;    // bisection width in p0
    OracleOptions oracle{0, 16, 0, 10000, 1e-9};
};

struct GeneralThreshold {
    double p_star = 1.0;
    int worst_level = -1;      // level whose vertex set p_star
    double worst_gain = 0.0;   // oracle maximum just below p_star at that level
    int evaluations = 0;       // oracle calls
};

// Least ground population p0 such that every eigenmixture with that much
// ground weight is strongly locally passive, from vertex states
// p0|E_0⟩⟨E_0| + (1−p0)|E_k⟩⟨E_k|. Throws NotApplicable unless the ground state
// is nondegenerate and fully entangled.
GeneralThreshold threshold_general(const SystemModel& model, const ThresholdOptions& opts = {});

// Same on −H: least top population q* at which no local channel can add energy.
GeneralThreshold charging_threshold(const SystemModel& model, const ThresholdOptions& opts = {});

// Largest local energy of the vertex state p0|E_0⟩ + (1−p0)|E_k⟩ (oracle).
double vertex_gain(const EigenResponse& resp, int k, double p0, const OracleOptions& opts);

enum class TStarMethod { automatic, closed_condition, omega_maximizer, oracle };

std::string_view to_string(TStarMethod m) noexcept;

struct CriticalTemperatureOptions {
    TStarMethod method = TStarMethod::automatic;
    double rel_tol = 1e-6;
    double t_start = 1e-3;
    double t_floor = 1e-10;
    double t_ceiling = 1e6;
    double omega_tol = 1e-9;    // omega-maximizer decision
    double oracle_tol = 1e-6;   // oracle decision
    OracleOptions oracle{0, 16, 0, 10000, 1e-9};
};

struct CriticalTemperature {
    double t_star = 0.0;  // 0, finite, or +inf
    double t_lo = 0.0;    // passive side of the bracket
    double t_hi = 0.0;    // non-passive side (inf when none found)
    TStarMethod method = TStarMethod::automatic;
    bool certified = false;  // analytic sign certificate held (T* = inf)
    std::string note;
};

CriticalTemperature critical_temperature(const SystemModel& model, const CriticalTemperatureOptions& opts = {});

// Decision margin used by critical_temperature at temperature t; positive
// means the Gibbs state has local energy. The closed condition reports
// (1−η²) − ηξ, the other methods their maximum minus the method tolerance.
double gibbs_local_energy(const SystemModel& model, Temperature t, TStarMethod method,
                          const CriticalTemperatureOptions& opts);

// Fit of the two-qubit Heisenberg pattern
//   ΔE = −A u†u − B t†t − C(2 − s†v − v†s)
// to a response matrix; all of A, B, C ≥ 0 certifies ΔE ≤ 0 for every channel.
struct SignCertificate {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual = 0.0;
    bool holds = false;
};

SignCertificate heisenberg_sign_certificate(const ComplexMatrix& w, double c0);

// Pattern-fit result for one chain point.
struct ChainPoint {
    int n = 0;
    double kappa = 0.0;
    double t_star = 0.0;
    double eta = 0.0;   // at T*
    double xi = 0.0;
    double residual = 0.0;  // worst fit residual seen while solving
};

std::vector<ChainPoint> chain_critical_curve(const std::vector<int>& sizes, const std::vector<double>& kappas,
                                             Coupling coupling = Coupling::antiferro, double rel_tol = 1e-6);

}  // namespace slp
