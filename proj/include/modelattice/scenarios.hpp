#pragma once

// Executable checks of the three axioms (atoms, cloning, continuous densities)
// against each canonical mode class.

#include <string>
#include <vector>

#include <json.hpp>

#include "modelattice/measure.hpp"
#include "modelattice/mode_check.hpp"
#include "modelattice/quantifier.hpp"

namespace modelattice {

struct ScenarioCase {
    std::string label;
    CheckReport report;
    bool ok = false;
};

struct ScenarioSuite {
    std::string name;  // "AP", "CP" or "LP"
    std::vector<ScenarioCase> cases;
    bool ok() const;
};

struct AxiomScenarioReport {
    ClassId cls = ClassId::s;
    std::vector<ScenarioSuite> suites;
    bool ok() const;
    nlohmann::json to_json() const;
    std::string text() const;
};

// 1/2 delta_0 + 1/2 U[1, 3].
Measure1D ap_measure();
// Density (1/2) x^(-1/2) on (0, 1).
Measure1D cp_base_measure();
// alpha * base + (1 - alpha) * base(. - 2).
Measure1D cp_clone_measure(double alpha = 0.49);
// Continuous two-peak densities: triangular hats at -1 and 1 with half-width 1/2.
Measure1D lp_measure(double left_height = 1.0, double right_height = 1.0);

// Whether 0 is a mode of cp_base_measure() for the class. The constant
// approximating sequence at 0 is beaten by u_n = r_n, so exactly the classes
// comparing the constant sequence against the supremum fail.
bool cp_base_origin_is_mode(ClassId cls);

AxiomScenarioReport axiom_scenarios(ClassId cls, const EvalConfig& cfg = {});

}  // namespace modelattice
