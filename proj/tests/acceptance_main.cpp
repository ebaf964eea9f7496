// Runs the acceptance checks; `--only N[,M...]` selects criteria.
#include "acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            for (std::string tok; std::getline(ss, tok, ',');) ids.push_back(std::stoi(tok));
        } else {
            std::cerr << "usage: slp_acceptance [--only N[,M...]]\n";
            return 2;
        }
    }
    return slp::acceptance::run(ids, {}, std::cout) == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
