#include "slp/thresholds.hpp"

#include "pattern_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace slp {

PairThreshold threshold_pair(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw Error(ErrorCode::BadParameter, "threshold_pair needs kappa > 0");
    }
    const double m = std::sqrt(kappa * kappa + 4.0);
    const double a = kappa * kappa + kappa * m + 2.0;
    const double b = -kappa * m;
    const double c = -0.5 * m * m;
    PairThreshold out;
    out.delta_star = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
    out.p_star = 0.5 * (1.0 + out.delta_star);
    out.delta_star_printed =
        (kappa + std::sqrt(3.0 * m * m + 2.0 * kappa * m - 8.0)) / (2.0 * (m * m + kappa * m - 2.0));
    out.p_star_printed = 0.5 * (1.0 + out.delta_star_printed);
    return out;
}

double vertex_gain(const EigenResponse& resp, int k, double p0, const OracleOptions& opts) {
    const ComplexMatrix w = p0 * resp.level(0) + (1.0 - p0) * resp.level(k);
    // Tr[Hρ] equals Tr over the subsystem-identity channel, i.e. the trace of W's
    // "identity" quadratic form: vec(I)† W vec(I).
    const int c = resp.dims().sub;
    ComplexVector id = ComplexVector::Zero(c * c);
    for (int i = 0; i < c; ++i) id(i * c + i) = 1.0;
    const double c0 = id.dot(w * id).real();
    return oracle_maximize(w, c0, c, opts).best;
}

namespace {

void require_theorem_hypotheses(const SystemModel& model, const char* what) {
    const EigenstateClass cls = ground_state_classify(model.hamiltonian, model.dims);
    if (!cls.nondegenerate) {
        throw Error(ErrorCode::NotApplicable, std::string(what) + " state is degenerate");
    }
    if (!cls.fully_entangled) {
        throw Error(ErrorCode::NotApplicable, std::string(what) + " state is not fully entangled");
    }
}

GeneralThreshold threshold_impl(const SystemModel& model, const ThresholdOptions& opts) {
    const int d = model.dim();
    const EigenResponse resp = eigen_response(model.hamiltonian, model.dims);
    std::vector<int> levels;
    if (opts.k_worst >= 0) {
        if (opts.k_worst == 0 || opts.k_worst >= d) {
            throw Error(ErrorCode::IndexOutOfRange, "k_worst must name an excited level");
        }
        levels.push_back(opts.k_worst);
    } else {
        for (int k = 1; k < d; ++k) levels.push_back(k);
    }
    OracleOptions oracle = opts.oracle;
    oracle.stop_above = opts.tol;

    GeneralThreshold out;
    int failing = -1;
    double failing_gain = 0.0;
    auto passive = [&](double p0) {
        // try the level that failed last time first
        std::vector<int> order = levels;
        if (failing >= 0) {
            auto it = std::find(order.begin(), order.end(), failing);
            if (it != order.end()) std::rotate(order.begin(), it, it + 1);
        }
        for (int k : order) {
            ++out.evaluations;
            const double g = vertex_gain(resp, k, p0, oracle);
            if (g > opts.tol) {
                failing = k;
                failing_gain = g;
                return false;
            }
        }
        return true;
    };

    double lo = 1.0 / d;
    double hi = 1.0;
    if (passive(lo)) {
        out.p_star = lo;
        return out;
    }
    out.worst_level = failing;
    out.worst_gain = failing_gain;
    while (hi - lo > opts.p_tol) {
        const double mid = 0.5 * (lo + hi);
        if (passive(mid)) {
            hi = mid;
        } else {
            lo = mid;
            out.worst_level = failing;
            out.worst_gain = failing_gain;
        }
    }
    out.p_star = hi;
    return out;
}

}  // namespace

GeneralThreshold threshold_general(const SystemModel& model, const ThresholdOptions& opts) {
    require_theorem_hypotheses(model, "ground");
    return threshold_impl(model, opts);
}

GeneralThreshold charging_threshold(const SystemModel& model, const ThresholdOptions& opts) {
    const SystemModel flipped = negate(model);
    require_theorem_hypotheses(flipped, "top");
    return threshold_impl(flipped, opts);
}

std::string_view to_string(TStarMethod m) noexcept {
    switch (m) {
        case TStarMethod::automatic: return "automatic";
        case TStarMethod::closed_condition: return "closed-condition";
        case TStarMethod::omega_maximizer: return "omega-maximizer";
        case TStarMethod::oracle: return "oracle";
    }
    return "unknown";
}

SignCertificate heisenberg_sign_certificate(const ComplexMatrix& w, double c0) {
    using namespace detail;
    const ComplexMatrix pu = slot_matrix({{U, U}}, -1.0);
    const ComplexMatrix pt = slot_matrix({{T, T}}, -1.0);
    const ComplexMatrix psv = slot_matrix({{S, V}, {V, S}}, 1.0);
    const PatternFit fit = fit_qubit_pattern(w, c0, ComplexMatrix::Zero(4, 4), {pu, pt, psv}, {0.0, 0.0, -2.0});
    SignCertificate out;
    out.a = fit.coef(0);
    out.b = fit.coef(1);
    out.c = fit.coef(2);
    out.residual = fit.residual;
    constexpr double kSlack = 1e-12;
    out.holds = out.residual <= 1e-9 && out.a >= -kSlack && out.b >= -kSlack && out.c >= -kSlack;
    return out;
}

namespace {

bool is_pair_like(const SystemModel& model) {
    return !model.negated && (model.kind == ModelKind::pair || (model.kind == ModelKind::chain && model.params.n == 2));
}

TStarMethod resolve_method(const SystemModel& model, TStarMethod requested) {
    if (requested != TStarMethod::automatic) return requested;
    if (model.kind == ModelKind::chain && !model.negated) return TStarMethod::closed_condition;
    if (model.kind == ModelKind::pair && !model.negated) {
        return model.params.gamma == 1.0 ? TStarMethod::closed_condition : TStarMethod::omega_maximizer;
    }
    return TStarMethod::oracle;
}

// Local-energy probe of Gibbs states; the eigen-response is built once.
class GibbsProbe {
public:
    GibbsProbe(const SystemModel& model, TStarMethod method, const CriticalTemperatureOptions& opts)
        : model_(model), method_(method), opts_(opts) {
        const bool pair_like = is_pair_like(model);
        if (method == TStarMethod::omega_maximizer && !pair_like) {
            throw Error(ErrorCode::NotApplicable, "omega-maximizer needs a two-spin pair");
        }
        if (method == TStarMethod::closed_condition) {
            if (model.dims.sub != 2 || model.negated) {
                throw Error(ErrorCode::NotApplicable, "closed condition needs a qubit subsystem");
            }
            if (model.kind == ModelKind::pair && model.params.gamma != 1.0) {
                throw Error(ErrorCode::NotApplicable, "closed condition holds for isotropic coupling only");
            }
        }
        if (!(method == TStarMethod::omega_maximizer ||
              (method == TStarMethod::closed_condition && model.kind == ModelKind::pair))) {
            resp_ = eigen_response(model.hamiltonian, model.dims);
        }
    }

    // Positive means energy can be extracted locally from the Gibbs state.
    double operator()(Temperature t) {
        const Eigenmixture mix = gibbs(model_, t);
        switch (method_) {
            case TStarMethod::closed_condition: {
                double eta, xi;
                if (model_.kind == ModelKind::pair) {
                    const PairCoefficients pc = pair_coefficients(model_.params.kappa, 1.0, *mix.deltas);
                    eta = pc.eta;
                    xi = pc.xi;
                } else {
                    const PairCoefficients pc = fit_pair_pattern(resp_->mix(mix.populations), c0(mix));
                    worst_residual_ = std::max(worst_residual_, pc.tied_residual);
                    eta = pc.tied_eta;
                    xi = pc.tied_xi;
                }
                last_eta_ = eta;
                last_xi_ = xi;
                if (eta < 0.0 || xi < 0.0) return std::max(omega_closed(eta, xi), 1e-300);
                return (1.0 - eta * eta) - eta * xi;
            }
            case TStarMethod::omega_maximizer: {
                const PairDeltas d = mix.deltas ? *mix.deltas : pair_deltas(model_, mix);
                const PairCoefficients pc = pair_coefficients(model_.params.kappa, model_.params.gamma, d);
                return omega_aniso(pc.eta, pc.xi, pc.mu).raw - opts_.omega_tol;
            }
            case TStarMethod::oracle:
            case TStarMethod::automatic: {
                OracleOptions o = opts_.oracle;
                o.stop_above = opts_.oracle_tol;
                const ComplexMatrix w = resp_->mix(mix.populations);
                const double c = c0(mix);
                if (model_.dims.sub == 2 && model_.dim() == 4) {
                    const SignCertificate cert = heisenberg_sign_certificate(w, c);
                    certificate_ok_ = certificate_ok_ && cert.holds;
                }
                return oracle_maximize(w, c, model_.dims.sub, o).best - opts_.oracle_tol;
            }
        }
        return 0.0;
    }

    double worst_residual() const { return worst_residual_; }
    bool certificate_ok() const { return certificate_ok_ && model_.dims.sub == 2 && model_.dim() == 4; }
    double last_eta() const { return last_eta_; }
    double last_xi() const { return last_xi_; }

private:
    double c0(const Eigenmixture& mix) const { return mix.populations.dot(model_.hamiltonian.energies()); }

    const SystemModel& model_;
    TStarMethod method_;
    const CriticalTemperatureOptions& opts_;
    std::optional<EigenResponse> resp_;
    double worst_residual_ = 0.0;
    bool certificate_ok_ = true;
    double last_eta_ = 0.0;
    double last_xi_ = 0.0;
};

CriticalTemperature solve_t_star(const SystemModel& model, GibbsProbe& probe, TStarMethod method,
                                 const CriticalTemperatureOptions& opts) {
    CriticalTemperature out;
    out.method = method;
    const EigenstateClass cls = ground_state_classify(model.hamiltonian, model.dims);
    if (!cls.nondegenerate || !cls.fully_entangled) {
        out.note = cls.nondegenerate ? "ground state separable" : "ground state degenerate";
        return out;
    }
    auto active = [&](double t) { return probe(Temperature::finite(t)) > 0.0; };

    double lo, hi;
    if (active(opts.t_start)) {
        hi = opts.t_start;
        lo = hi / 10.0;
        while (active(lo)) {
            hi = lo;
            if (lo <= opts.t_floor) {
                out.t_hi = hi;
                out.note = "no passive temperature above floor";
                return out;
            }
            lo /= 10.0;
        }
    } else {
        const double factor = method == TStarMethod::oracle ? 10.0 : 2.0;
        lo = opts.t_start;
        hi = lo * factor;
        while (!active(hi)) {
            lo = hi;
            if (hi >= opts.t_ceiling) {
                out.t_lo = lo;
                out.t_hi = std::numeric_limits<double>::infinity();
                if (probe(Temperature::infinite()) > 0.0) {
                    out.t_star = lo;
                    out.note = "crossing lies beyond the temperature ceiling";
                    return out;
                }
                out.t_star = std::numeric_limits<double>::infinity();
                out.certified = probe.certificate_ok();
                out.note = out.certified ? "sign certificate holds at every probed temperature"
                                         : "no crossing up to the ceiling; not certified";
                return out;
            }
            hi = std::min(hi * factor, opts.t_ceiling);
        }
    }
    while (hi / lo - 1.0 > opts.rel_tol) {
        const double mid = std::sqrt(lo * hi);
        if (active(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.t_lo = lo;
    out.t_hi = hi;
    out.t_star = std::sqrt(lo * hi);
    return out;
}

}  // namespace

double gibbs_local_energy(const SystemModel& model, Temperature t, TStarMethod method,
                          const CriticalTemperatureOptions& opts) {
    const TStarMethod m = resolve_method(model, method);
    GibbsProbe probe(model, m, opts);
    return probe(t);
}

CriticalTemperature critical_temperature(const SystemModel& model, const CriticalTemperatureOptions& opts) {
    const TStarMethod method = resolve_method(model, opts.method);
    GibbsProbe probe(model, method, opts);
    return solve_t_star(model, probe, method, opts);
}

std::vector<ChainPoint> chain_critical_curve(const std::vector<int>& sizes, const std::vector<double>& kappas,
                                             Coupling coupling, double rel_tol) {
    std::vector<ChainPoint> out(sizes.size() * kappas.size());
    CriticalTemperatureOptions opts;
    opts.method = TStarMethod::closed_condition;
    opts.rel_tol = rel_tol;
    const int total = static_cast<int>(out.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (int idx = 0; idx < total; ++idx) {
        const int n = sizes[static_cast<std::size_t>(idx) / kappas.size()];
        const double kappa = kappas[static_cast<std::size_t>(idx) % kappas.size()];
        const SystemModel model = build_chain(n, kappa, coupling);
        // chain_critical_curve always fits the pattern, even for N = 2
        SystemModel as_chain = model;
        as_chain.kind = ModelKind::custom;
        GibbsProbe probe(as_chain, TStarMethod::closed_condition, opts);
        const CriticalTemperature ct = solve_t_star(as_chain, probe, TStarMethod::closed_condition, opts);
        ChainPoint p;
        p.n = n;
        p.kappa = kappa;
        p.t_star = ct.t_star;
        if (std::isfinite(ct.t_star) && ct.t_star > 0.0) probe(Temperature::finite(ct.t_star));
        p.eta = probe.last_eta();
        p.xi = probe.last_xi();
        p.residual = probe.worst_residual();
        out[static_cast<std::size_t>(idx)] = p;
    }
    return out;
}

}  // namespace slp
