#include "modelattice/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "modelattice/ell2.hpp"
#include "modelattice/examples.hpp"
#include "modelattice/gaussian.hpp"
#include "modelattice/lattice.hpp"
#include "modelattice/mode_check.hpp"
#include "modelattice/quantifier.hpp"
#include "modelattice/scenarios.hpp"

namespace modelattice {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kClosedFormTol = 1e-9;

// Wall-clock budgets per criterion, in seconds.
constexpr double kBudget[kCriteriaCount] = {1, 1, 5, 1, 1, 1, 1, 10, 30, 10, 10, 5, 300, 30};

const char* const kTitle[kCriteriaCount] = {
    "enumeration counts",        "class membership",         "lattice laws",
    "quotient lattices",         "PS-not-GW oscillation",    "PGS-not-GS traces",
    "WP-not-PW-PGS traces",      "WGAP-not-GWAP bounds",     "separation matrix",
    "merging property failure",  "axiom scenario suites",    "l2 lattice measure",
    "Gaussian constructions",    "ball-mass property suites"};

std::string fmt(double x, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion_counts(CriterionResult& res) {
    const auto all = enumerate_definitions();
    std::set<ModeDefinition> normal_forms;
    std::set<ClassId> classes;
    for (const auto& d : all) normal_forms.insert(logical_normal_form(d));
    // One meaningful string per logical class: the table representative.
    long meaningful = 0;
    for (const auto& row : emit_table()) {
        if (!row.meaningful) continue;
        ++meaningful;
        classes.insert(canonical_class(row.definition));
    }
    res.data = {{"grammatical", all.size()},
                {"normal_forms", normal_forms.size()},
                {"meaningful", meaningful},
                {"classes", classes.size()}};
    res.pass = all.size() == 282 && normal_forms.size() == 144 && meaningful == 21 && classes.size() == 10;
    res.detail = std::to_string(all.size()) + " strings, " + std::to_string(normal_forms.size()) + " normal forms, " +
                 std::to_string(meaningful) + " meaningful, " + std::to_string(classes.size()) + " classes";
}

void criterion_membership(CriterionResult& res) {
    bool ok = true;
    std::set<ModeDefinition> listed;
    std::string problem;
    for (ClassId c : kAllClasses) {
        const auto members = class_members(c);
        const auto def = class_definition(c);
        if (std::find(members.begin(), members.end(), def) == members.end()) {
            ok = false;
            problem = "designated string missing for " + class_name(c);
        }
        for (const auto& m : members) {
            listed.insert(m);
            if (!elimination_verdict(m).meaningful || canonical_class(m) != c) {
                ok = false;
                problem = m.ascii() + " does not map to " + class_name(c);
            }
        }
        const auto letter = letter_notation(def);
        if (!letter || *letter != class_name(c)) {
            ok = false;
            problem = "letter notation of " + def.ascii();
        }
        res.data["members"][class_name(c)] = members.size();
    }
    std::set<ModeDefinition> meaningful;
    for (const auto& row : emit_table())
        if (row.meaningful) meaningful.insert(row.definition);
    long invariance_failures = 0;
    for (const auto& d : enumerate_definitions()) {
        const auto v = elimination_verdict(d);
        auto same = [&](const ModeDefinition& e) {
            const auto w = elimination_verdict(e);
            return w.meaningful == v.meaningful && w.rule == v.rule;
        };
        bool inv = same(logical_normal_form(d));
        for (const auto& e : logical_class_members(d)) inv = inv && same(e);
        if (!inv) {
            ++invariance_failures;
            if (problem.empty()) problem = "verdict not invariant at " + d.ascii();
        }
    }
    ok = ok && invariance_failures == 0 && listed == meaningful && listed.size() == 21;
    res.data["listed"] = listed.size();
    res.data["invariance_failures"] = invariance_failures;
    res.pass = ok;
    res.detail = ok ? "21 strings onto 10 classes; verdicts constant on logical classes" : problem;
}

void criterion_lattice(CriterionResult& res) {
    const ClassLattice L = build_main_lattice();
    const LatticeReport rep = validate_lattice(L);
    const SeparatingFamily fam = min_separating_family(L);
    const auto ds = downsets(L);
    bool all_downsets = !fam.family.empty();
    for (const auto& f : fam.family) {
        auto sorted = f;
        std::sort(sorted.begin(), sorted.end());
        all_downsets = all_downsets && std::find(ds.begin(), ds.end(), sorted) != ds.end();
    }
    std::set<int> ruled(fam.sizes_ruled_out.begin(), fam.sizes_ruled_out.end());
    const bool smaller_ruled_out = ruled == std::set<int>{1, 2, 3, 4, 5};
    res.data = {{"nodes", L.size()},
                {"triples_checked", rep.triples_checked},
                {"separating_family_size", fam.size},
                {"sizes_ruled_out", fam.sizes_ruled_out}};
    res.pass = rep.ok() && rep.triples_checked >= 1000 && L.size() == 10 && fam.size == 6 &&
               separates(L, fam.family) && all_downsets && smaller_ruled_out;
    std::map<std::string, long> violated;
    std::string example;
    for (const auto& v : rep.violations) {
        ++violated[v.law];
        if (example.empty()) {
            example = v.law + " at (";
            for (std::size_t i = 0; i < v.witnesses.size(); ++i) example += (i ? ", " : "") + v.witnesses[i];
            example += ")";
        }
    }
    for (const auto& [law, count] : violated) res.data["violations"][law] = count;
    std::string laws = "poset " + std::string(rep.partial_order ? "ok" : "FAILS") + ", lattice " +
                       (rep.lattice ? "ok" : "FAILS") + ", complete " + (rep.complete ? "ok" : "FAILS") +
                       ", distributive " + (rep.distributive ? "ok" : "FAILS");
    if (!violated.empty()) {
        laws += " (";
        bool first = true;
        for (const auto& [law, count] : violated) {
            laws += (first ? "" : ", ") + std::to_string(count) + " " + law + " violations";
            first = false;
        }
        laws += ", first " + example + ")";
    }
    res.detail = std::to_string(rep.triples_checked) + " triples: " + laws + "; minimum separating family of size " +
                 std::to_string(fam.size) + (separates(L, fam.family) && all_downsets && smaller_ruled_out ? " verified" : " NOT verified");
}

void criterion_quotients(CriterionResult& res) {
    const std::vector<int> expected = {6, 5, 8, 4, 3, 4, 2, 3, 1, 3, 1};
    const auto checks = check_all_quotients();
    std::vector<int> nodes;
    bool all_ok = checks.size() == expected.size();
    for (const auto& c : checks) {
        nodes.push_back(c.nodes);
        all_ok = all_ok && c.ok();
        res.data["scenarios"].push_back({{"name", c.name}, {"nodes", c.nodes}, {"ok", c.ok()}});
    }
    res.pass = all_ok && nodes == expected;
    std::ostringstream os;
    for (std::size_t i = 0; i < nodes.size(); ++i) os << (i ? "," : "{") << nodes[i];
    os << "}";
    res.detail = "node counts " + os.str();
}

void criterion_ps_not_gw(CriterionResult& res) {
    const Measure1D mu = example_measure(ExampleId::PSNotGW);
    const double a = 3.0 / (2.0 * std::sqrt(2.0)), b = 1.0 / a;
    bool pair_ok = true;
    double lo = kInf, hi = -kInf, worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
        const double x = ratio(mu, Point(-2.0), Point(2.0), std::ldexp(1.0, -2 * n));
        const double y = ratio(mu, Point(-2.0), Point(2.0), std::ldexp(1.0, -2 * n - 1));
        const double e1 = std::max(std::abs(x - a), std::abs(y - b));
        const double e2 = std::max(std::abs(x - b), std::abs(y - a));
        const double e = std::min(e1, e2);
        worst = std::max(worst, e);
        pair_ok = pair_ok && e <= kClosedFormTol;
        lo = std::min({lo, x, y});
        hi = std::max({hi, x, y});
    }
    res.data = {{"min_ratio", lo}, {"max_ratio", hi}, {"max_error", worst}};
    res.pass = pair_ok && lo < 1.0 && hi > 1.0;
    res.detail = "ratios in {" + fmt(lo, 10) + ", " + fmt(hi, 10) + "}, max error " + fmt(worst, 3);
}

bool run_bundle_checks(const ExampleBundle& b, ClassId cls, nlohmann::json& out, std::string& failure) {
    const auto it = b.checks.find(cls);
    if (it == b.checks.end() || it->second.empty()) {
        failure = "no checks for " + class_name(cls);
        return false;
    }
    bool ok = true;
    for (const auto& c : it->second) {
        const auto r = run_trace_check(b.measure, c);
        out.push_back({{"label", r.label}, {"ok", r.ok}, {"worst_n", r.worst_n}, {"worst_value", r.worst_value}});
        if (!r.ok && failure.empty()) failure = r.label + " at n = " + std::to_string(r.worst_n);
        ok = ok && r.ok;
    }
    return ok;
}

void criterion_pgs_not_gs(CriterionResult& res) {
    const ExampleBundle b = build_example(ExampleId::PGSNotGS);
    std::string failure;
    nlohmann::json traces = nlohmann::json::array();
    // Witness along R_n = 4^-2n against the sup, challengers along S_n = 4^-(2n+1).
    const bool witness = run_bundle_checks(b, ClassId::pgs, traces, failure);
    const bool challengers = run_bundle_checks(b, ClassId::gs, traces, failure);
    bool within_range = true;
    for (const auto& [cls, checks] : b.checks)
        for (const auto& c : checks) within_range = within_range && c.n_to <= 15;
    res.data["traces"] = traces;
    res.pass = witness && challengers && within_range;
    res.detail = res.pass ? std::to_string(traces.size()) + " traces hold for n <= 15" : failure;
}

void criterion_wp(CriterionResult& res) {
    const Measure1D mu = example_measure(ExampleId::WPNotPWPGS);
    const int points = 1000;
    const double lmin = std::log(1e-12), lmax = std::log(1e-2);
    double worst = 0.0;
    long incompat_cases = 0, incompat_failures = 0;
    for (int i = 0; i < points; ++i) {
        const double lr = lmin + (lmax - lmin) * i / (points - 1);
        const double r = std::exp(lr);
        double q[3];
        for (int k = 0; k < 3; ++k) {
            const double v = 2.0 * (k + 1);
            q[k] = ratio(mu, Point(0.0), Point(v), r);
            const double expected = 1.0 + kWpAlpha * std::sin(std::log(r) - 2.0 * v * kPi / 3.0);
            worst = std::max(worst, std::abs(q[k] - expected));
        }
        for (int k = 0; k < 3; ++k) {
            const double a = q[(k + 1) % 3], b = q[(k + 2) % 3];
            if (a >= 1.0 - 1e-6 && b >= 1.0 - 1e-6) {
                ++incompat_cases;
                if (!(q[k] < 1.0 - kWpAlpha / 2.0 + 1e-6)) ++incompat_failures;
            }
        }
    }
    res.data = {{"points", points}, {"max_error", worst}, {"incompatibility_cases", incompat_cases},
                {"incompatibility_failures", incompat_failures}};
    res.pass = worst <= kClosedFormTol && incompat_cases > 0 && incompat_failures == 0;
    res.detail = "max trace error " + fmt(worst, 3) + "; " + std::to_string(incompat_cases) +
                 " grid points with two ratios >= 1, " + std::to_string(incompat_failures) + " violations";
}

void criterion_wgap(CriterionResult& res) {
    const GammaReport g = gamma_grid(20, 100, 9);
    const ExampleBundle b = build_example(ExampleId::WGAPNotGWAP);
    std::string failure;
    nlohmann::json traces = nlohmann::json::array();
    const bool challengers = run_bundle_checks(b, ClassId::gwap, traces, failure);
    res.data = {{"gamma", g.to_json()}, {"traces", traces}};
    res.pass = g.probes >= 10000 && g.gamma_ok && g.max_gamma <= 8.0 && g.ratio_ok && challengers;
    res.detail = std::to_string(g.probes) + " probes, max gamma " + fmt(g.max_gamma) + ", max ratio " +
                 fmt(g.max_ratio) + (challengers ? "; challenger ratios <= 9/10" : "; " + failure);
}

void criterion_matrix(CriterionResult& res) {
    const SeparationMatrix m = run_separation_matrix();
    bool all_downsets = m.rows.size() == 7;
    for (const auto& r : m.rows) all_downsets = all_downsets && r.downset;
    res.data = m.to_json();
    res.pass = m.ok() && all_downsets;
    long matched = 0;
    for (const auto& r : m.rows) matched += r.matches ? 1 : 0;
    res.detail = std::to_string(matched) + "/" + std::to_string(m.rows.size()) + " rows match; rows are downsets: " +
                 (all_downsets ? "yes" : "no");
}

void criterion_merging(CriterionResult& res) {
    const MergingReport m = merging_property_report();
    long first = 0, second = 0;
    for (const auto& c : m.cases) {
        if (c.label.rfind("PS-not-GW", 0) == 0) ++first;
        if (c.label.rfind("SuspensionExt", 0) == 0) ++second;
    }
    res.data = m.to_json();
    res.pass = m.ok() && first > 0 && second > 0;
    res.detail = std::to_string(m.cases.size()) + " cases (" + std::to_string(first) + " PS-not-GW, " +
                 std::to_string(second) + " SuspensionExt)";
}

void criterion_axioms(CriterionResult& res) {
    long passed = 0;
    std::string failed;
    for (ClassId c : kAllClasses) {
        const AxiomScenarioReport rep = axiom_scenarios(c);
        res.data[class_name(c)] = rep.ok();
        if (rep.ok())
            ++passed;
        else
            failed += (failed.empty() ? "" : ", ") + class_name(c);
    }
    res.pass = passed == 10;
    res.detail = std::to_string(passed) + "/10 classes pass AP, CP and LP" + (failed.empty() ? "" : " (failed: " + failed + ")");
}

void criterion_ell2(CriterionResult& res, std::uint64_t seed) {
    const ell2::LatticeMeasure mu;
    const ell2::LatticeSuiteReport rep = ell2::run_lattice_suite(mu, seed, 100, 50, 30);
    res.data = rep.to_json();
    res.pass = rep.ok() && rep.optimal_checks == 100 && rep.sequences == 50 &&
               rep.worst_factor >= (1.0 / mu.zeta()) * (1.0 - 1e-12);
    res.detail = "mass " + fmt(rep.total_mass, 15) + ", " + std::to_string(rep.optimal_agree) + "/" +
                 std::to_string(rep.optimal_checks) + " optimal centres agree, " + std::to_string(rep.sequences_ok) +
                 "/" + std::to_string(rep.sequences) + " sequences improved, worst factor " + fmt(rep.worst_factor);
}

void criterion_gaussian(CriterionResult& res, const AcceptanceOptions& opt, std::uint64_t seed) {
    gaussian::GaussianSpec spec;
    spec.dim = opt.gaussian_dim;
    spec.samples = opt.gaussian_samples;
    spec.seed = seed;
    const gaussian::ShiftCheck shift = gaussian::cameron_martin_shift_check(spec, 6.0, 1.0, 10);
    const auto centres = gaussian::sample_centres(seed + 17, 20, 0.3, 1.0);
    const gaussian::DominanceCheck dom = gaussian::origin_dominance_check(spec, 1.0, centres, 0);
    const gaussian::ConstructionReport cons = gaussian::run_gauss_e_not_ps(spec, 2);
    bool ratios_below_one = cons.steps.size() == 2;
    double worst_upper = 0.0;
    for (const auto& s : cons.steps)
        for (const auto& r : s.radii) {
            worst_upper = std::max(worst_upper, r.ratio_upper);
            ratios_below_one = ratios_below_one && r.ratio_upper < 1.0;
        }
    res.data = {{"spec", spec.to_json()}, {"shift", shift.to_json()}, {"dominance", dom.to_json()},
                {"e_not_ps", cons.to_json()}};
    res.pass = shift.verdict == gaussian::McVerdict::Pass && dom.verdict == gaussian::McVerdict::Pass &&
               cons.verdict() == gaussian::McVerdict::Pass && ratios_below_one;
    res.detail = "shift " + gaussian::mc_verdict_name(shift.verdict) + ", dominance at " +
                 std::to_string(centres.size()) + " centres " + gaussian::mc_verdict_name(dom.verdict) +
                 ", E-not-PS n <= 2 " + gaussian::mc_verdict_name(cons.verdict()) + " (ratio upper bound <= " +
                 fmt(worst_upper, 4) + ")";
}

void criterion_properties(CriterionResult& res, const AcceptanceOptions& opt, std::uint64_t seed) {
    const PropertySuiteReport rep = run_property_suites(seed, opt.property_probes);
    res.data = rep.to_json();
    res.pass = rep.ok();
    long failing = 0, vacuous = 0;
    std::string first;
    for (const auto& o : rep.outcomes) {
        if (o.vacuous) ++vacuous;
        if (!o.ok()) {
            ++failing;
            if (first.empty())
                first = o.property + " on " + o.measure + (o.first_failure.empty() ? "" : ": " + o.first_failure);
        }
    }
    res.detail = std::to_string(rep.outcomes.size()) + " property/measure pairs, " + std::to_string(failing) +
                 " failing, " + std::to_string(vacuous) + " vacuous" + (first.empty() ? "" : "; " + first);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string CriterionResult::line() const {
    char head[160];
    std::snprintf(head, sizeof head, "%s %2d  %-26s [%.2f s / %.0f s]  ", pass ? "PASS" : "FAIL", id, title.c_str(),
                  seconds, budget_seconds);
    return head + detail;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    if (id < 1 || id > kCriteriaCount) throw std::out_of_range("criterion id must lie in 1.." + std::to_string(kCriteriaCount));
    CriterionResult res;
    res.id = id;
    res.title = kTitle[id - 1];
    res.budget_seconds = kBudget[id - 1];
    const std::uint64_t seed = opt.seed ? opt.seed : gaussian::default_seed();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        switch (id) {
            case 1: criterion_counts(res); break;
            case 2: criterion_membership(res); break;
            case 3: criterion_lattice(res); break;
            case 4: criterion_quotients(res); break;
            case 5: criterion_ps_not_gw(res); break;
            case 6: criterion_pgs_not_gs(res); break;
            case 7: criterion_wp(res); break;
            case 8: criterion_wgap(res); break;
            case 9: criterion_matrix(res); break;
            case 10: criterion_merging(res); break;
            case 11: criterion_axioms(res); break;
            case 12: criterion_ell2(res, seed); break;
            case 13: criterion_gaussian(res, opt, seed); break;
            case 14: criterion_properties(res, opt, seed); break;
        }
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = std::string("exception: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.seconds > res.budget_seconds) {
        res.pass = false;
        res.detail += " (over the time budget)";
    }
    return res;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opt) {
    std::vector<CriterionResult> out;
    for (int id : ids) out.push_back(run_criterion(id, opt));
    return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    std::vector<int> ids;
    for (int i = 1; i <= kCriteriaCount; ++i) ids.push_back(i);
    return run_acceptance(ids, opt);
}

// ---------------------------------------------------------------------------
// Property suites

std::vector<NamedMeasure> shipped_measures() {
    std::vector<NamedMeasure> out;
    for (ExampleId id : matrix_examples()) out.push_back({example_name(id), example_measure(id)});
    out.push_back({example_name(ExampleId::SuspensionExt), example_measure(ExampleId::SuspensionExt)});
    out.push_back({"ap", ap_measure()});
    out.push_back({"cp-base", cp_base_measure()});
    out.push_back({"cp-clone", cp_clone_measure()});
    out.push_back({"lp-symmetric", lp_measure(1.0, 1.0)});
    out.push_back({"lp-asymmetric", lp_measure(1.0, 2.0)});
    return out;
}

namespace {

struct Probe {
    Point u;
    double r = 1.0;
};

class ProbeSource {
public:
    ProbeSource(const Measure1D& mu, std::uint64_t seed) : mu_(mu), rng_(seed) {
        const auto h = mu.support_hull();
        lo_ = std::max(h.first, -8.0) - 0.5;
        hi_ = std::min(h.second, 8.0) + 0.5;
    }

    // Radius log-uniform in [1e-6, 1]; centre uniform over the hull, near a
    // sup candidate, or exactly one radius away from one.
    Probe next() {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Probe p;
        p.r = std::pow(10.0, -6.0 * unit(rng_));
        const double mode = unit(rng_);
        if (mode < 0.7) {
            p.u = Point(lo_ + (hi_ - lo_) * unit(rng_));
            return p;
        }
        auto cands = mu_.sup_candidates(p.r);
        cands.erase(std::remove_if(cands.begin(), cands.end(),
                                   [](const Point& c) { return !std::isfinite(c.value()) || std::abs(c.value()) > 8.5; }),
                    cands.end());
        if (cands.empty()) {
            p.u = Point(lo_ + (hi_ - lo_) * unit(rng_));
            return p;
        }
        std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
        Point c = cands[pick(rng_)];
        // Keep |offset| >= |fine| so that the jitter added to the offset is
        // resolved at the precision of the offset.
        if (std::abs(c.fine) > std::abs(c.offset)) c = Point(c.anchor + c.fine, c.offset);
        if (mode < 0.85)
            p.u = Point(c.anchor, c.offset + p.r * (4.0 * unit(rng_) - 2.0), c.fine);
        else
            p.u = Point(c.anchor, c.offset + (unit(rng_) < 0.5 ? -p.r : p.r), c.fine);
        return p;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    const Measure1D& mu_;
    std::mt19937_64 rng_;
    double lo_ = -1.0, hi_ = 1.0;
};

std::string describe(const Probe& p) {
    std::ostringstream os;
    os.precision(17);
    os << "u = " << p.u.anchor << " + " << p.u.offset << " + " << p.u.fine << ", r = " << p.r;
    return os.str();
}

PropertyOutcome outcome(const std::string& property, const std::string& measure) {
    PropertyOutcome o;
    o.property = property;
    o.measure = measure;
    return o;
}

void record(PropertyOutcome& o, const std::string& why) {
    ++o.failures;
    if (o.first_failure.empty()) o.first_failure = why;
}

double mass(const Measure1D& mu, const Point& u, double r) { return mu.ball_mass(u, r).value; }

// r -> mu(B(u, r)) is left-continuous for open balls.
PropertyOutcome left_continuity(const NamedMeasure& nm, std::uint64_t seed, int probes) {
    PropertyOutcome o = outcome("left-continuity in r", nm.name);
    ProbeSource src(nm.measure, seed);
    for (int i = 0; i < probes; ++i) {
        const Probe p = src.next();
        ++o.probes;
        ++o.applicable;
        const double m = mass(nm.measure, p.u, p.r);
        double prev = -1.0;
        bool monotone = true;
        for (int k = 4; k <= 44; ++k) {
            const double mk = mass(nm.measure, p.u, p.r * (1.0 - std::ldexp(1.0, -k)));
            if (mk < prev - 1e-13) monotone = false;
            prev = mk;
        }
        if (!monotone)
            record(o, "masses not nondecreasing, " + describe(p));
        else if (m - prev > 1e-6 || prev > m + 1e-13)
            record(o, "gap " + fmt(m - prev, 3) + ", " + describe(p));
    }
    return o;
}

// u -> mu(B(u, r)) is lower semicontinuous for open balls.
PropertyOutcome lower_semicontinuity(const NamedMeasure& nm, std::uint64_t seed, int probes) {
    PropertyOutcome o = outcome("lower semicontinuity in u", nm.name);
    ProbeSource src(nm.measure, seed);
    for (int i = 0; i < probes; ++i) {
        const Probe p = src.next();
        ++o.probes;
        ++o.applicable;
        const double m = mass(nm.measure, p.u, p.r);
        for (double sign : {-1.0, 1.0}) {
            const double eps = sign * p.r * std::ldexp(1.0, -60);
            const Point v(p.u.anchor, p.u.offset + eps, p.u.fine);
            const double mv = mass(nm.measure, v, p.r);
            if (mv < m - 1e-7) {
                record(o, "deficit " + fmt(m - mv, 3) + " at shift " + fmt(eps, 3) + ", " + describe(p));
                break;
            }
        }
    }
    return o;
}

// Around a point where cell averages of the density stay bounded by C on
// every scale, balls of radius r near the point carry at most 2 C r.
PropertyOutcome lebesgue_bound(const NamedMeasure& nm, std::uint64_t seed, int probes) {
    PropertyOutcome o = outcome("Lebesgue-point 2Cr bound", nm.name);
    ProbeSource src(nm.measure, seed);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    constexpr int kCells = 32;
    constexpr int kScales = 10;  // window half-widths R 16^-j, j < kScales
    constexpr int kBalls = 30;
    constexpr double kResolution = 1e-13;
    for (int i = 0; i < probes; ++i) {
        const Probe p = src.next();
        ++o.probes;
        const double R = p.r;
        // Component frames agree on absolute positions only to about one ulp,
        // so lengths below this floor are not resolved.
        const double floor = kResolution * std::max(1.0, std::abs(p.u.value()));
        double C0 = 0.0, Cmax = 0.0;
        for (int j = 0; j < kScales; ++j) {
            const double half = R * std::pow(16.0, -j);
            if (2.0 * half / kCells < floor) break;
            const double w = 2.0 * half / kCells;
            double cmax = 0.0;
            for (int c = 0; c < kCells; ++c) {
                const double a = -half + c * w;
                cmax = std::max(cmax, nm.measure.interval_mass(p.u, a, a + w) / w);
            }
            if (j == 0) C0 = cmax;
            Cmax = std::max(Cmax, cmax);
        }
        if (!(C0 > 0.0) || Cmax > 1.5 * C0) continue;
        ++o.applicable;
        const double C = 1.1 * Cmax;
        for (int n = 1; n <= kBalls; ++n) {
            const double rn = R / 512.0 * std::ldexp(1.0, -n);
            if (rn < floor) break;
            const Point un(p.u.anchor, p.u.offset + rn * sym(src.rng()), p.u.fine);
            const double m = mass(nm.measure, un, rn);
            if (m > 2.0 * C * rn) {
                record(o, "mass " + fmt(m, 6) + " > 2Cr = " + fmt(2.0 * C * rn, 6) + " at n = " + std::to_string(n) + ", shift " + fmt(un.offset - p.u.offset, 17) + ", " +
                              describe(p));
                break;
            }
        }
    }
    return o;
}

struct UnimodalPiece {
    Component comp;
    double centre = 0.0;  // local coordinate of the symmetry centre
    double scale = 1.0;   // half-width of the local support, 1 for atoms
};

std::vector<Component> collect_components(const nlohmann::json& doc) {
    std::vector<Component> out;
    if (doc.contains("transform")) {
        for (const char* key : {"measure", "first", "second"})
            if (doc.contains(key)) {
                auto sub = collect_components(doc.at(key));
                out.insert(out.end(), sub.begin(), sub.end());
            }
        return out;
    }
    if (doc.contains("components"))
        for (const auto& c : doc.at("components")) out.push_back(component_from_json(c));
    if (doc.contains("lazy_families"))
        for (const auto& f : doc.at("lazy_families")) {
            const LazyFamily fam = family_from_json(f);
            for (long k = fam.k_min; k < fam.k_min + 5; ++k) out.push_back(fam.at(k));
        }
    return out;
}

std::optional<UnimodalPiece> as_symmetric_unimodal(const Component& c) {
    const auto [lo, hi] = c.local_support();
    UnimodalPiece u{c, 0.0, std::max(hi - lo, 1e-300) / 2.0};
    if (c.kind == "atom") {
        u.scale = 1.0;
        return u;
    }
    if (c.kind == "triangular") return u;
    if (c.kind == "uniform" || c.kind == "step_block") {
        u.centre = 0.5 * (lo + hi);
        return u;
    }
    if (c.kind == "power" && c.params.value("sided", std::string()) == "two") return u;
    if (c.kind == "knot" && c.params.value("s", 0.0) >= c.params.value("q", 1.0)) return u;
    return std::nullopt;
}

// For a symmetric unimodal law the ball around the centre is heaviest.
PropertyOutcome centre_dominance(const NamedMeasure& nm, std::uint64_t seed, int probes) {
    PropertyOutcome o = outcome("symmetric-unimodal centre dominance", nm.name);
    std::vector<UnimodalPiece> pieces;
    for (const auto& c : collect_components(nm.measure.to_json()))
        if (auto u = as_symmetric_unimodal(c)) pieces.push_back(*u);
    if (pieces.empty()) {
        o.vacuous = true;
        return o;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    for (int i = 0; i < probes; ++i) {
        const UnimodalPiece& p = pieces[pick(rng)];
        ++o.probes;
        ++o.applicable;
        const double r = p.scale * std::pow(10.0, 1.0 - 7.0 * unit(rng));
        const double d = p.scale * (4.0 * unit(rng) - 2.0);
        const double at_centre = p.comp.raw_mass(p.centre, -r, r);
        const double off = p.comp.raw_mass(p.centre + d, -r, r);
        if (off > at_centre + 1e-12)
            record(o, p.comp.kind + ": offset " + fmt(d, 6) + " radius " + fmt(r, 6) + " gives " + fmt(off, 10) + " > " +
                          fmt(at_centre, 10));
    }
    return o;
}

}  // namespace

bool PropertySuiteReport::ok() const {
    if (outcomes.empty()) return false;
    return std::all_of(outcomes.begin(), outcomes.end(), [](const PropertyOutcome& o) { return o.ok(); });
}

nlohmann::json PropertySuiteReport::to_json() const {
    nlohmann::json j{{"ok", ok()}, {"outcomes", nlohmann::json::array()}};
    for (const auto& o : outcomes)
        j["outcomes"].push_back({{"property", o.property},
                                 {"measure", o.measure},
                                 {"probes", o.probes},
                                 {"applicable", o.applicable},
                                 {"failures", o.failures},
                                 {"vacuous", o.vacuous},
                                 {"first_failure", o.first_failure},
                                 {"ok", o.ok()}});
    return j;
}

PropertySuiteReport run_property_suites(std::uint64_t seed, int probes) {
    if (probes <= 0) throw std::invalid_argument("probes must be positive");
    PropertySuiteReport rep;
    std::uint64_t s = seed;
    for (const auto& nm : shipped_measures()) {
        rep.outcomes.push_back(left_continuity(nm, ++s, probes));
        rep.outcomes.push_back(lower_semicontinuity(nm, ++s, probes));
        rep.outcomes.push_back(lebesgue_bound(nm, ++s, probes));
        rep.outcomes.push_back(centre_dominance(nm, ++s, probes));
    }
    return rep;
}

}  // namespace modelattice
