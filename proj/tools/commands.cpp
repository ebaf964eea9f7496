#include "commands.hpp"

#include "slp/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace slpass {

using namespace slp;

Json to_json(const RunConfig& c) {
    Json j = Json::object();
    j["command"] = c.command;
    j["model"] = c.model;
    j["kappa"] = c.kappa;
    j["gamma"] = c.gamma;
    j["n"] = c.n;
    j["coupling"] = c.coupling;
    j["temperature"] = c.temperature;
    j["populations"] = c.populations;
    j["r"] = c.r;
    j["phi"] = c.phi;
    j["restarts"] = c.restarts;
    j["n_ops"] = c.n_ops;
    j["seed"] = c.seed;
    j["format"] = c.format;
    j["resolution"] = c.resolution;
    j["oracle"] = c.oracle;
    j["general"] = c.general;
    j["family"] = c.family;
    j["gammas"] = c.gammas;
    j["sizes"] = c.sizes;
    j["kappa_min"] = c.kappa_min;
    j["kappa_max"] = c.kappa_max;
    j["kappa_steps"] = c.kappa_steps;
    return j;
}

namespace {

struct BadConfig : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SystemModel make_model(const RunConfig& c) {
    const Coupling coupling = c.coupling == "ferro" ? Coupling::ferro : Coupling::antiferro;
    if (c.coupling != "ferro" && c.coupling != "antiferro") throw BadConfig("--coupling must be antiferro or ferro");
    if (c.model == "pair") return build_pair(c.kappa, c.gamma);
    if (c.model == "chain") return build_chain(c.n, c.kappa, coupling);
    if (c.model == "xxx") return build_xxx();
    throw BadConfig("unknown model '" + c.model + "'");
}

Temperature parse_temperature(const std::string& s) {
    if (s == "inf") return Temperature::infinite();
    std::size_t used = 0;
    double t = 0.0;
    try {
        t = std::stod(s, &used);
    } catch (const std::exception&) {
        throw BadConfig("cannot parse temperature '" + s + "'");
    }
    if (used != s.size()) throw BadConfig("cannot parse temperature '" + s + "'");
    return Temperature::finite(t);
}

OracleOptions oracle_options(const RunConfig& c) {
    if (c.restarts < 1) throw BadConfig("--restarts must be at least 1");
    OracleOptions o;
    o.restarts = c.restarts;
    o.n_ops = c.n_ops;
    o.seed = c.seed;
    return o;
}

SweepResult new_result(const RunConfig& c, std::vector<std::string> columns) {
    SweepResult r;
    r.columns = std::move(columns);
    r.config = to_json(c);
    r.seed = c.seed;
    return r;
}

// Writes to --out or stdout; the svg callback is used for --format svg.
template <class Svg>
void emit(const RunConfig& c, const SweepResult& r, Svg svg) {
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw BadConfig("cannot open output file " + c.out);
    }
    std::ostream& os = c.out.empty() ? std::cout : file;
    if (c.format == "csv") {
        write_csv(os, r);
    } else if (c.format == "json") {
        os << to_json(r).dump(2) << '\n';
    } else if (c.format == "svg") {
        svg(os);
    } else {
        throw BadConfig("--format must be csv, json or svg");
    }
}

void emit(const RunConfig& c, const SweepResult& r) {
    emit(c, r, [&](std::ostream&) { throw BadConfig("svg output is not available for " + c.command); });
}

void require_text_format(const RunConfig& c) {
    if (c.format != "csv" && c.format != "json") throw BadConfig("--format must be csv or json here");
}

template <class F>
int guarded(F body) {
    try {
        return body();
    } catch (const BadConfig& e) {
        std::cerr << "slpass: " << e.what() << '\n';
        return bad_config;
    } catch (const Error& e) {
        std::cerr << "slpass: " << e.what() << '\n';
        return bad_config;
    }
}

}  // namespace

int cmd_spectrum(const RunConfig& c) {
    return guarded([&] {
        const SystemModel m = make_model(c);
        const EigenstateClass cls = ground_state_classify(m.hamiltonian, m.dims);
        SweepResult r = new_result(c, {"k", "energy"});
        for (int k = 0; k < m.dim(); ++k) r.add_row({static_cast<std::int64_t>(k), m.hamiltonian.energy(k)});
        r.extra["model"] = model_to_json(m);
        r.extra["ground_nondegenerate"] = cls.nondegenerate;
        r.extra["ground_fully_entangled"] = cls.fully_entangled;
        r.extra["ground_gap"] = cls.gap;
        r.extra["ground_schmidt_rank"] = cls.schmidt_rank;
        if (m.kind == ModelKind::chain && m.params.n == 2) {
            r.extra["convention"] = "N=2 chain uses the single-bond pair Hamiltonian";
        }
        emit(c, r);
        return ok;
    });
}

int cmd_omega_grid(const RunConfig& c) {
    return guarded([&] {
        if (c.model != "pair" || c.gamma != 1.0) throw BadConfig("omega-grid needs an isotropic pair (gamma = 1)");
        if (c.resolution < 3) throw BadConfig("--resolution must be at least 3");
        const SystemModel pair = build_pair(c.kappa, 1.0);
        std::vector<std::string> cols{"delta0", "delta1", "omega", "branch", "masked"};
        if (c.oracle) cols.insert(cols.begin() + 3, "oracle");
        SweepResult r = new_result(c, cols);
        const int n = c.resolution;
        std::vector<std::vector<Cell>> rows(static_cast<std::size_t>(n * n));
        const OracleOptions opts = oracle_options(c);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
        for (int idx = 0; idx < n * n; ++idx) {
            const double d0 = -1.0 + 2.0 * (idx / n) / (n - 1);
            const double d1 = -1.0 + 2.0 * (idx % n) / (n - 1);
            std::vector<Cell> row{d0, d1};
            if (std::abs(d0) + std::abs(d1) > 1.0 + 1e-12) {
                row.emplace_back(std::nan(""));
                if (c.oracle) row.emplace_back(std::nan(""));
                row.emplace_back(std::string());
                row.emplace_back(std::int64_t{1});
            } else {
                const PairCoefficients pc = pair_coefficients(c.kappa, 1.0, {d0, d1});
                row.emplace_back(omega_closed(pc.eta, pc.xi));
                if (c.oracle) {
                    const Eigenmixture mix = pair_mixture(pair, {d0, d1});
                    row.emplace_back(std::max(0.0, oracle_maximize(pair, density(pair, mix), opts).best));
                }
                row.emplace_back(
                    std::string(omega_branch(pc.eta, pc.xi) == OmegaBranch::interior ? "interior" : "boundary"));
                row.emplace_back(std::int64_t{0});
            }
            rows[static_cast<std::size_t>(idx)] = std::move(row);
        }
        for (auto& row : rows) r.add_row(std::move(row));
        const PairThreshold th = threshold_pair(c.kappa);
        r.extra["delta_star"] = th.delta_star;
        r.extra["p_star"] = th.p_star;

        std::vector<std::pair<double, double>> path;
        for (int i = 0; i <= 200; ++i) {
            const double t = std::pow(10.0, -2.0 + 4.0 * i / 200.0);
            const PairDeltas d = gibbs_pair_deltas(c.kappa, pair.pair_m(), Temperature::finite(t));
            path.emplace_back(d.delta0, d.delta1);
        }
        emit(c, r, [&](std::ostream& os) { write_omega_svg(os, r, path); });
        return ok;
    });
}

int cmd_critical_temp(const RunConfig& c) {
    return guarded([&] {
        if (c.kappa_steps < 1 || !(c.kappa_max >= c.kappa_min) || !(c.kappa_min > 0.0)) {
            throw BadConfig("need 0 < kappa-min <= kappa-max and kappa-steps >= 1");
        }
        std::vector<double> kappas;
        for (int i = 0; i <= c.kappa_steps; ++i) {
            kappas.push_back(c.kappa_min + (c.kappa_max - c.kappa_min) * i / c.kappa_steps);
        }
        if (c.family == "chain") {
            for (int n : c.sizes) {
                if (n < 2 || n > 12) throw BadConfig("chain sizes must lie in 2..12");
            }
            const Coupling coupling = c.coupling == "ferro" ? Coupling::ferro : Coupling::antiferro;
            const auto pts = chain_critical_curve(c.sizes, kappas, coupling);
            SweepResult r = new_result(c, {"n", "kappa", "t_star", "eta", "xi", "residual"});
            for (const auto& p : pts) {
                r.add_row({static_cast<std::int64_t>(p.n), p.kappa, p.t_star, p.eta, p.xi, p.residual});
            }
            r.extra["method"] = "closed-condition";
            r.extra["rel_tol"] = 1e-6;
            emit(c, r, [&](std::ostream& os) { write_curve_svg(os, r, "kappa", "t_star", "n"); });
            return ok;
        }
        if (c.family != "pair") throw BadConfig("--family must be pair or chain");
        const std::size_t nk = kappas.size();
        std::vector<CriticalTemperature> res(c.gammas.size() * nk);
        for (double g : c.gammas) {
            if (!(g >= 0.0 && g <= 1.0)) throw BadConfig("gamma values must lie in [0, 1]");
        }
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
        for (int idx = 0; idx < static_cast<int>(res.size()); ++idx) {
            const double g = c.gammas[static_cast<std::size_t>(idx) / nk];
            const double k = kappas[static_cast<std::size_t>(idx) % nk];
            res[static_cast<std::size_t>(idx)] = critical_temperature(build_pair(k, g));
        }
        SweepResult r = new_result(c, {"gamma", "kappa", "t_star", "t_lo", "t_hi", "method", "note"});
        Json inset = Json::array();
        for (std::size_t gi = 0; gi < c.gammas.size(); ++gi) {
            const double g = c.gammas[gi];
            double first = std::nan("");
            std::size_t lowest = 0;
            for (std::size_t ki = 0; ki < nk; ++ki) {
                const auto& ct = res[gi * nk + ki];
                r.add_row({g, kappas[ki], ct.t_star, ct.t_lo, ct.t_hi, std::string(to_string(ct.method)), ct.note});
                if (std::isnan(first) && ct.t_star <= 1e-4) first = kappas[ki];
                if (ct.t_star < res[gi * nk + lowest].t_star) lowest = ki;
            }
            // The dip towards T* = 0 can fall between grid points; narrow in on
            // it by ternary search around the lowest grid value.
            double dip_kappa = kappas[lowest], dip_t = res[gi * nk + lowest].t_star;
            if (std::isnan(first) && nk >= 3) {
                double a = kappas[lowest == 0 ? 0 : lowest - 1];
                double b = kappas[std::min(lowest + 1, nk - 1)];
                auto tstar = [g](double k) { return critical_temperature(build_pair(k, g)).t_star; };
                for (int it = 0; it < 60 && b - a > 1e-9 && std::isnan(first); ++it) {
                    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                    const double f1 = tstar(m1), f2 = tstar(m2);
                    if (f1 < dip_t) dip_kappa = m1, dip_t = f1;
                    if (f2 < dip_t) dip_kappa = m2, dip_t = f2;
                    if (dip_t <= 1e-4) first = dip_kappa;
                    if (f1 < f2) b = m2;
                    else a = m1;
                }
            }
            Json entry = Json::object();
            entry["gamma"] = g;
            entry["kappa_first_below_1e-4"] = std::isnan(first) ? Json(nullptr) : Json(first);
            entry["kappa_dip"] = dip_kappa;
            entry["t_star_at_dip"] = dip_t;
            entry["kappa_degenerate"] = g < 1.0 ? Json(2.0 / std::sqrt(1.0 - g * g)) : Json("inf");
            inset.push_back(std::move(entry));
        }
        r.extra["inset"] = std::move(inset);
        r.extra["rel_tol"] = 1e-6;
        emit(c, r, [&](std::ostream& os) { write_curve_svg(os, r, "kappa", "t_star", "gamma"); });
        return ok;
    });
}

int cmd_local_energy(const RunConfig& c) {
    return guarded([&] {
        require_text_format(c);
        const SystemModel m = make_model(c);
        const bool have_pops = !c.populations.empty();
        const bool have_temp = !c.temperature.empty();
        if (have_pops == have_temp) throw BadConfig("give exactly one of --populations or --temperature");
        Eigenmixture mix;
        if (have_pops) {
            if (static_cast<int>(c.populations.size()) != m.dim()) {
                throw BadConfig("--populations needs " + std::to_string(m.dim()) + " values");
            }
            mix = Eigenmixture::from_populations(Eigen::Map<const RealVector>(c.populations.data(), m.dim()));
        } else {
            mix = gibbs(m, parse_temperature(c.temperature));
        }
        const bool coherent = c.r != 0.0;
        if (coherent && !(m.kind == ModelKind::pair && c.gamma == 1.0)) {
            throw BadConfig("coherent states are defined for the isotropic pair");
        }
        const ComplexMatrix rho = coherent ? coherent_perturb(m, mix, c.r).rho : density(m, mix);

        Json report = Json::object();
        report["config"] = to_json(c);
        report["config_hash"] = config_hash(report["config"]);
        report["tool_version"] = kToolVersion;
        Json methods = Json::object();
        std::vector<double> values;
        const bool pair_like = m.kind == ModelKind::pair || (m.kind == ModelKind::chain && m.params.n == 2);
        if (!coherent && pair_like) {
            const PairCoefficients pc = pair_coefficients(m.params.kappa, m.params.gamma, pair_deltas(m, mix));
            if (m.params.gamma == 1.0) {
                methods["closed"] = omega_closed(pc.eta, pc.xi);
                values.push_back(methods["closed"]);
            }
            const AnisoMaximum a = omega_aniso(pc.eta, pc.xi, pc.mu);
            methods["omega_maximizer"] = a.value;
            values.push_back(a.value);
            report["eta"] = pc.eta;
            report["xi"] = pc.xi;
            report["mu"] = pc.mu;
        } else if (!coherent && m.kind == ModelKind::chain) {
            const BilinearEnergyForm f = bilinear_form(m, mix);
            if (f.pair && f.pair->tied_residual <= 1e-9) {
                methods["closed"] = omega_closed(f.pair->tied_eta, f.pair->tied_xi);
                values.push_back(methods["closed"]);
                report["eta"] = f.pair->tied_eta;
                report["xi"] = f.pair->tied_xi;
                report["fit_residual"] = f.pair->tied_residual;
            }
        }
        const OracleResult orc = oracle_maximize(m, rho, oracle_options(c));
        methods["oracle"] = std::max(0.0, orc.best);
        values.push_back(methods["oracle"]);
        report["oracle_converged"] = orc.converged;
        report["methods"] = methods;

        constexpr double kPassiveTol = 1e-8, kAgreeTol = 1e-6;
        const double hi = *std::max_element(values.begin(), values.end());
        const double lo = *std::min_element(values.begin(), values.end());
        const bool agree = hi - lo <= kAgreeTol;
        bool energy_ordered = !coherent;
        for (int k = 1; k < m.dim() && energy_ordered; ++k) {
            if (mix.p(k) > mix.p(k - 1) + 1e-12 &&
                m.hamiltonian.energy(k) > m.hamiltonian.energy(k - 1) + m.hamiltonian.cluster_tolerance()) {
                energy_ordered = false;
            }
        }
        report["sl_passive"] = hi <= kPassiveTol;
        report["passive"] = energy_ordered;
        report["methods_agree"] = agree;
        if (coherent) {
            try {
                const double limit = coherence_witness_limit(m.params.kappa, mix, c.r);
                report["witness_phi_limit"] = limit;
                report["witness_phi"] = 0.5 * limit;
                report["witness_delta_e"] = coherence_delta_e(m.params.kappa, mix, c.r, 0.5 * limit).direct;
            } catch (const Error& e) {
                report["witness_note"] = e.what();
            }
        }

        std::ofstream file;
        if (!c.out.empty()) file.open(c.out);
        std::ostream& os = c.out.empty() ? std::cout : file;
        if (c.format == "json") {
            os << report.dump(2) << '\n';
        } else {
            os << std::setprecision(10);
            for (auto it = methods.begin(); it != methods.end(); ++it) {
                os << "omega[" << it.key() << "] = " << it->get<double>() << '\n';
            }
            os << "SL-passive: " << (report["sl_passive"].get<bool>() ? "true" : "false") << '\n'
               << "passive: " << (energy_ordered ? "true" : "false") << '\n'
               << "methods agree: " << (agree ? "true" : "false") << '\n';
            if (report.contains("witness_phi")) {
                os << "witness phi = " << report["witness_phi"].get<double>()
                   << " (dE = " << report["witness_delta_e"].get<double>() << ")\n";
            }
        }
        if (!agree) {
            std::cerr << "slpass: methods disagree by " << hi - lo << '\n';
            return method_disagreement;
        }
        return ok;
    });
}

int cmd_threshold(const RunConfig& c) {
    return guarded([&] {
        require_text_format(c);
        Json report = Json::object();
        report["config"] = to_json(c);
        report["config_hash"] = config_hash(report["config"]);
        report["tool_version"] = kToolVersion;
        if (c.model == "pair" && c.gamma == 1.0) {
            const PairThreshold th = threshold_pair(c.kappa);
            report["delta_star"] = th.delta_star;
            report["p_star"] = th.p_star;
            report["delta_star_printed"] = th.delta_star_printed;
            report["p_star_printed"] = th.p_star_printed;
            report["discrepancy"] =
                "printed delta* lacks a factor m = sqrt(kappa^2+4); the quadratic-root value is used";
        }
        if (c.general) {
            const SystemModel m = make_model(c);
            ThresholdOptions opts;
            opts.oracle = oracle_options(c);
            if (c.restarts == 64) opts.oracle.restarts = 16;
            for (const char* which : {"general", "charging"}) {
                try {
                    const GeneralThreshold g = std::string(which) == "general" ? threshold_general(m, opts)
                                                                              : charging_threshold(m, opts);
                    Json e = Json::object();
                    e["threshold"] = g.p_star;
                    e["worst_level"] = g.worst_level;
                    e["oracle_calls"] = g.evaluations;
                    report[which] = std::move(e);
                } catch (const Error& e) {
                    report[which] = std::string("not applicable: ") + e.what();
                }
            }
        }
        std::ofstream file;
        if (!c.out.empty()) file.open(c.out);
        std::ostream& os = c.out.empty() ? std::cout : file;
        if (c.format == "json") {
            os << report.dump(2) << '\n';
        } else {
            for (auto it = report.begin(); it != report.end(); ++it) {
                if (it.key() == "config") continue;
                os << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
            }
        }
        return ok;
    });
}

int cmd_coherence(const RunConfig& c) {
    return guarded([&] {
        std::vector<double> p = c.populations.empty() ? std::vector<double>{0.95, 0.0, 0.05, 0.0} : c.populations;
        if (p.size() != 4) throw BadConfig("--populations needs 4 values");
        const Eigenmixture base = Eigenmixture::from_populations(Eigen::Map<const RealVector>(p.data(), 4));
        const CoherenceEvaluation ev = coherence_delta_e(c.kappa, base, c.r, c.phi);
        SweepResult r = new_result(c, {"kappa", "r", "phi", "eta", "xi", "a", "printed", "corrected", "direct"});
        r.add_row({c.kappa, c.r, c.phi, ev.eta, ev.xi, ev.a, ev.printed, ev.corrected, ev.direct});
        try {
            r.extra["witness_phi_limit"] = coherence_witness_limit(c.kappa, base, c.r);
        } catch (const Error& e) {
            r.extra["witness_phi_limit"] = std::string("not applicable: ") + e.what();
        }
        r.extra["printed_minus_direct"] = ev.printed - ev.direct;
        emit(c, r);
        return ok;
    });
}

int cmd_oracle_compare(const RunConfig& c) {
    return guarded([&] {
        if (c.model != "pair" || c.gamma != 1.0) throw BadConfig("oracle-compare needs an isotropic pair");
        if (c.resolution < 3) throw BadConfig("--resolution must be at least 3");
        const SystemModel pair = build_pair(c.kappa, 1.0);
        const OracleOptions opts = oracle_options(c);
        const int n = c.resolution;
        std::vector<std::vector<Cell>> rows(static_cast<std::size_t>(n * n));
        std::vector<double> diffs(rows.size(), 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
        for (int idx = 0; idx < n * n; ++idx) {
            const double d0 = -1.0 + 2.0 * (idx / n) / (n - 1);
            const double d1 = -1.0 + 2.0 * (idx % n) / (n - 1);
            if (std::abs(d0) + std::abs(d1) > 1.0 + 1e-12) {
                rows[static_cast<std::size_t>(idx)] = {d0, d1, std::nan(""), std::nan(""), std::nan(""),
                                                       std::int64_t{0}, std::int64_t{1}};
                continue;
            }
            const Eigenmixture mix = pair_mixture(pair, {d0, d1});
            const PairCoefficients pc = pair_coefficients(c.kappa, 1.0, *mix.deltas);
            const double closed = omega_closed(pc.eta, pc.xi);
            const OracleResult o = oracle_maximize(pair, density(pair, mix), opts);
            const double best = std::max(0.0, o.best);
            diffs[static_cast<std::size_t>(idx)] = std::abs(best - closed);
            rows[static_cast<std::size_t>(idx)] = {d0, d1, closed, best, best - closed,
                                                   std::int64_t{o.converged ? 1 : 0}, std::int64_t{0}};
        }
        SweepResult r = new_result(c, {"delta0", "delta1", "closed", "oracle", "diff", "converged", "masked"});
        for (auto& row : rows) r.add_row(std::move(row));
        const double worst = *std::max_element(diffs.begin(), diffs.end());
        r.extra["max_abs_diff"] = worst;
        r.extra["agreement_tol"] = 1e-6;
        emit(c, r);
        if (worst > 1e-6) {
            std::cerr << "slpass: oracle and closed form differ by " << worst << '\n';
            return method_disagreement;
        }
        return ok;
    });
}

}  // namespace slpass
