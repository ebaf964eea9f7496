#include "commands.hpp"
#include "slp/error.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>

using slpass::RunConfig;

namespace {

void model_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--model", c.model, "pair, chain or xxx")->check(CLI::IsMember({"pair", "chain", "xxx"}));
    app->add_option("--kappa", c.kappa, "field strength");
    app->add_option("--gamma", c.gamma, "anisotropy in [0, 1]");
    app->add_option("--n", c.n, "chain length");
    app->add_option("--coupling", c.coupling, "antiferro or ferro");
}

void oracle_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--restarts", c.restarts, "oracle restarts");
    app->add_option("--n-ops", c.n_ops, "Kraus operators (0 means d^2)");
    app->add_option("--seed", c.seed, "base seed");
}

void output_flags(CLI::App* app, RunConfig& c) {
    app->add_option("--out", c.out, "output file (default stdout)");
    app->add_option("--format", c.format, "csv, json or svg");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strong-local passivity toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", slp::kToolVersion);
    RunConfig c;
    std::map<CLI::App*, std::function<int(const RunConfig&)>> dispatch;

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and ground-state classification");
    model_flags(spectrum, c);
    output_flags(spectrum, c);
    dispatch[spectrum] = slpass::cmd_spectrum;

    auto* grid = app.add_subcommand("omega-grid", "local energy over the (delta0, delta1) diamond");
    grid->add_option("--kappa", c.kappa, "field strength");
    grid->add_option("--resolution", c.resolution, "grid points per axis");
    grid->add_flag("--oracle", c.oracle, "add an oracle column");
    oracle_flags(grid, c);
    output_flags(grid, c);
    dispatch[grid] = slpass::cmd_omega_grid;

    auto* ct = app.add_subcommand("critical-temp", "critical temperature curves");
    ct->add_option("--family", c.family, "pair or chain");
    ct->add_option("--gammas", c.gammas, "anisotropies (pair family)")->delimiter(',');
    ct->add_option("--sizes", c.sizes, "chain lengths (chain family)")->delimiter(',');
    ct->add_option("--kappa-min", c.kappa_min);
    ct->add_option("--kappa-max", c.kappa_max);
    ct->add_option("--kappa-steps", c.kappa_steps);
    ct->add_option("--coupling", c.coupling, "antiferro or ferro");
    output_flags(ct, c);
    dispatch[ct] = slpass::cmd_critical_temp;

    auto* le = app.add_subcommand("local-energy", "maximal local energy of one state");
    model_flags(le, c);
    le->add_option("--temperature", c.temperature, "Gibbs temperature or inf");
    le->add_option("--populations", c.populations, "eigenbasis populations")->delimiter(',');
    le->add_option("--r", c.r, "coherence between the ground and second excited level");
    oracle_flags(le, c);
    output_flags(le, c);
    dispatch[le] = slpass::cmd_local_energy;

    auto* th = app.add_subcommand("threshold", "ground-population thresholds");
    model_flags(th, c);
    th->add_flag("--general", c.general, "also run the oracle thresholds");
    oracle_flags(th, c);
    output_flags(th, c);
    dispatch[th] = slpass::cmd_threshold;

    auto* co = app.add_subcommand("coherence", "local energy of a coherent pair state");
    co->add_option("--kappa", c.kappa);
    co->add_option("--populations", c.populations, "four populations")->delimiter(',');
    co->add_option("--r", c.r);
    co->add_option("--phi", c.phi);
    output_flags(co, c);
    dispatch[co] = slpass::cmd_coherence;

    auto* oc = app.add_subcommand("oracle-compare", "oracle against the closed form on a grid");
    oc->add_option("--kappa", c.kappa);
    oc->add_option("--resolution", c.resolution);
    oracle_flags(oc, c);
    output_flags(oc, c);
    dispatch[oc] = slpass::cmd_oracle_compare;

    auto* ve = app.add_subcommand("verify", "run the acceptance checks");
    ve->add_flag("--list", c.list, "list the checks");
    ve->add_option("--only", c.only, "criterion ids")->delimiter(',');
    ve->add_flag("--corrupt-tolerance", c.corrupt_tolerance, "zero every tolerance (self-test)");
    ve->add_option("--seed", c.seed, "seed override");
    dispatch[ve] = slpass::cmd_verify;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : slpass::bad_config;
    }
    for (auto& [sub, fn] : dispatch) {
        if (sub->parsed()) {
            c.command = sub->get_name();
            try {
                return fn(c);
            } catch (const slp::Error& e) {
                std::cerr << "slpass: " << e.what() << '\n';
                return slpass::bad_config;
            }
        }
    }
    return slpass::bad_config;
}
