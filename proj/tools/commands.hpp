#pragma once

#include "slp/sweep.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slpass {

enum Exit : int { ok = 0, verification_failed = 1, bad_config = 2, method_disagreement = 3 };

struct RunConfig {
    std::string command;
    std::string model = "pair";  // pair | chain | xxx
    double kappa = 2.0;
    double gamma = 1.0;
    int n = 2;
    std::string coupling = "antiferro";
    std::string temperature;           // number or "inf"; empty when unused
    std::vector<double> populations;   // ascending eigenbasis order
    double r = 0.0;
    double phi = 0.1;
    int restarts = 64;
    int n_ops = 0;
    std::uint64_t seed = 0;
    std::string out;                   // empty: stdout
    std::string format = "csv";        // csv | json | svg
    int resolution = 41;
    bool oracle = false;               // omega-grid: add an oracle column
    bool general = false;              // threshold: also run the oracle thresholds
    std::string family = "pair";       // critical-temp: pair | chain
    std::vector<double> gammas{1.0};
    std::vector<int> sizes{2, 3, 4, 5, 6};
    double kappa_min = 0.5;
    double kappa_max = 4.0;
    int kappa_steps = 36;
    // verify
    bool list = false;
    std::vector<int> only;
    bool corrupt_tolerance = false;
};

slp::Json to_json(const RunConfig& c);

int cmd_spectrum(const RunConfig& c);
int cmd_omega_grid(const RunConfig& c);
int cmd_critical_temp(const RunConfig& c);
int cmd_local_energy(const RunConfig& c);
int cmd_threshold(const RunConfig& c);
int cmd_coherence(const RunConfig& c);
int cmd_oracle_compare(const RunConfig& c);
int cmd_verify(const RunConfig& c);

}  // namespace slpass
