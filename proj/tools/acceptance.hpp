// acceptance.hpp: the end-to-end checks behind `slpass verify` and the
// slp_acceptance test binary. One check per acceptance criterion.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace slp::acceptance {

struct Settings {
    std::uint64_t seed = 20240517;
    double tol_scale = 1.0;  // multiplies every pinned tolerance; 0 corrupts them
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Check {
    int id;
    std::string name;
    std::function<Outcome(const Settings&)> run;
};

const std::vector<Check>& checks();

// Runs the selected checks (all when ids is empty), one line each, and
// returns the number of failures.
int run(const std::vector<int>& ids, const Settings& s, std::ostream& os);

void list(std::ostream& os);

}  // namespace slp::acceptance
