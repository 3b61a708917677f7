// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Optional arguments select criteria by number.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "modelattice/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > modelattice::kCriteriaCount) {
            std::cerr << "usage: acceptance [criterion numbers 1.." << modelattice::kCriteriaCount << "]\n";
            return 2;
        }
        ids.push_back(id);
    }
    if (ids.empty())
        for (int i = 1; i <= modelattice::kCriteriaCount; ++i) ids.push_back(i);

    int failed = 0;
    for (int id : ids) {
        const auto res = modelattice::run_criterion(id);
        std::cout << res.line() << std::endl;
        if (!res.pass) ++failed;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
