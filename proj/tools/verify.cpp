#include "acceptance.hpp"
#include "commands.hpp"

#include <iostream>

namespace slpass {

int cmd_verify(const RunConfig& c) {
    if (c.list) {
        slp::acceptance::list(std::cout);
        return ok;
    }
    for (int id : c.only) {
        if (id < 1 || id > static_cast<int>(slp::acceptance::checks().size())) {
            std::cerr << "slpass: no criterion " << id << '\n';
            return bad_config;
        }
    }
    slp::acceptance::Settings s;
    if (c.seed != 0) s.seed = c.seed;
    if (c.corrupt_tolerance) s.tol_scale = 0.0;
    const int failures = slp::acceptance::run(c.only, s, std::cout);
    return failures == 0 ? ok : verification_failed;
}

}  // namespace slpass
