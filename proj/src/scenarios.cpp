#include "modelattice/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace modelattice {

namespace {

PoolSpec scenario_pools(std::vector<double> cps) {
    PoolSpec p;
    p.ns = {geometric_seq(0.5, 1.0, 0.0, "2^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n"),
            exp_linear_seq(0.0, 1.0, 0.0, "e^-n")};
    p.as_offsets = {geometric_seq(0.5, 1.0, 0.0, "2^-n"), geometric_seq(0.5, -1.0, 0.0, "-2^-n"),
                    geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n")};
    p.cp = std::move(cps);
    p.cs_offsets = {geometric_seq(0.5, 1.0, 0.0, "2^-n"), geometric_seq(0.5, -1.0, 0.0, "-2^-n"),
                    exp_linear_seq(0.0, 1.0, 0.0, "e^-n")};
    return p;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

ScenarioCase run_case(const std::string& suite, const Measure1D& mu, double u, ClassId cls, Claim claim,
                      const PoolSpec& pools, const EvalConfig& cfg, const std::string& what) {
    Certificate c;
    c.example = suite;
    c.cls = cls;
    c.u = u;
    c.claim = claim;
    c.pools = pools;
    c.cfg = cfg;
    ScenarioCase sc;
    sc.label = what + ": " + fmt(u) + (claim == Claim::IsMode ? " is a mode" : " is not a mode");
    sc.report = verify_certificate(mu, c);
    sc.ok = sc.report.verdict == Verdict::Pass;
    return sc;
}

ScenarioSuite ap_suite(ClassId cls, const EvalConfig& cfg) {
    ScenarioSuite s{"AP", {}};
    const Measure1D mu = ap_measure();
    const PoolSpec p = scenario_pools({0.0, 1.0, 2.0, 3.0, 1.5, -1.0, 0.5});
    s.cases.push_back(run_case("AP", mu, 0.0, cls, Claim::IsMode, p, cfg, "atom"));
    for (double u : {2.0, 1.0, 1.5, 3.0, -1.0})
        s.cases.push_back(run_case("AP", mu, u, cls, Claim::IsNotMode, p, cfg, "atom"));
    return s;
}

ScenarioSuite cp_suite(ClassId cls, const EvalConfig& cfg) {
    ScenarioSuite s{"CP", {}};
    const Measure1D mu = cp_base_measure();
    const Measure1D nu = cp_clone_measure(0.49);
    const Claim base = cp_base_origin_is_mode(cls) ? Claim::IsMode : Claim::IsNotMode;
    const PoolSpec pm = scenario_pools({0.5, 0.25, 0.9, 1.5, -0.5});
    const PoolSpec pn = scenario_pools({0.0, 2.0, 0.5, 2.5, 1.5, 3.5});
    s.cases.push_back(run_case("CP", mu, 0.0, cls, base, pm, cfg, "base measure"));
    // Cloning with weight 0.49 < 1/2 moves the mode set onto the heavier copy.
    s.cases.push_back(run_case("CP", nu, 2.0, cls, base, pn, cfg, "clone, heavier copy"));
    s.cases.push_back(run_case("CP", nu, 0.0, cls, Claim::IsNotMode, pn, cfg, "clone, lighter copy"));
    s.cases.push_back(run_case("CP", nu, 2.5, cls, Claim::IsNotMode, pn, cfg, "clone, interior point"));
    return s;
}

ScenarioSuite lp_suite(ClassId cls, const EvalConfig& cfg) {
    ScenarioSuite s{"LP", {}};
    const PoolSpec p = scenario_pools({-1.0, 1.0, 0.0, 0.75, -1.2, 1.3});
    const Measure1D sym = lp_measure(1.0, 1.0);
    for (double u : {-1.0, 1.0}) s.cases.push_back(run_case("LP", sym, u, cls, Claim::IsMode, p, cfg, "equal peaks"));
    for (double u : {0.0, 0.75, -1.2}) s.cases.push_back(run_case("LP", sym, u, cls, Claim::IsNotMode, p, cfg, "equal peaks"));
    const Measure1D asym = lp_measure(1.0, 1.5);
    s.cases.push_back(run_case("LP", asym, 1.0, cls, Claim::IsMode, p, cfg, "unequal peaks"));
    s.cases.push_back(run_case("LP", asym, -1.0, cls, Claim::IsNotMode, p, cfg, "unequal peaks"));
    return s;
}

}  // namespace

Measure1D ap_measure() {
    Component d = atom(Point(0.0), 0.5);
    Component u = uniform_interval(1.0, 3.0, 0.25);
    return Measure1D::from_components({d, u}, {}, 0.0, "half atom, half uniform");
}

Measure1D cp_base_measure() {
    return Measure1D::from_components({power_singularity(Point(0.0), 0.5, 0.5, 1.0, true)}, {}, 0.0, "x^-1/2 / 2 on (0,1)");
}

Measure1D cp_clone_measure(double alpha) {
    const Measure1D mu = cp_base_measure();
    return Measure1D::convex_combine(alpha, mu, mu.translate(2.0));
}

Measure1D lp_measure(double left_height, double right_height) {
    return Measure1D::from_components({triangular(Point(-1.0), left_height, 0.5), triangular(Point(1.0), right_height, 0.5)},
                                      {}, 0.0, "two hats");
}

bool cp_base_origin_is_mode(ClassId cls) { return cls != ClassId::s && cls != ClassId::ps; }

bool ScenarioSuite::ok() const {
    return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const ScenarioCase& c) { return c.ok; });
}

bool AxiomScenarioReport::ok() const {
    return !suites.empty() && std::all_of(suites.begin(), suites.end(), [](const ScenarioSuite& s) { return s.ok(); });
}

nlohmann::json AxiomScenarioReport::to_json() const {
    nlohmann::json j{{"class", class_name(cls)}, {"ok", ok()}, {"suites", nlohmann::json::array()}};
    for (const auto& s : suites) {
        nlohmann::json js{{"name", s.name}, {"ok", s.ok()}, {"cases", nlohmann::json::array()}};
        for (const auto& c : s.cases)
            js["cases"].push_back({{"label", c.label}, {"ok", c.ok}, {"verdict", verdict_name(c.report.verdict)}});
        j["suites"].push_back(js);
    }
    return j;
}

std::string AxiomScenarioReport::text() const {
    std::ostringstream os;
    for (const auto& s : suites) {
        os << class_name(cls) << " " << s.name << ": " << (s.ok() ? "pass" : "FAIL") << "\n";
        for (const auto& c : s.cases)
            if (!c.ok) os << "  " << c.label << " -> " << verdict_name(c.report.verdict) << "\n";
    }
    return os.str();
}

AxiomScenarioReport axiom_scenarios(ClassId cls, const EvalConfig& cfg) {
    AxiomScenarioReport r;
    r.cls = cls;
    r.suites.push_back(ap_suite(r.cls, cfg));
    r.suites.push_back(cp_suite(r.cls, cfg));
    r.suites.push_back(lp_suite(r.cls, cfg));
    return r;
}

}  // namespace modelattice
