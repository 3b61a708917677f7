#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "modelattice/mode_check.hpp"
#include "modelattice/scenarios.hpp"

using namespace modelattice;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Measure1D unit_uniform() { return Measure1D::from_components({uniform_interval(0.0, 1.0, 1.0)}); }

PoolSpec simple_pools() {
    PoolSpec p;
    p.ns = {geometric_seq(0.5, 1.0, 0.0, "2^-n"), geometric_seq(0.25, 1.0, 0.0, "4^-n")};
    p.as_offsets = {geometric_seq(0.5, 1.0, 0.0, "2^-n"), geometric_seq(0.5, -1.0, 0.0, "-2^-n")};
    p.cp = {0.25, 0.5, 0.75};
    p.cs_offsets = {geometric_seq(0.5, 1.0, 0.0, "2^-n")};
    return p;
}

}  // namespace

TEST_CASE("sequence generators", "[mode]") {
    const auto g = geometric_seq(0.5, 3.0, 1.0);
    REQUIRE(g.value(2) == 0.75);
    REQUIRE(g.point(2).anchor == 1.0);
    REQUIRE(g.point(2).offset == 0.75);
    REQUIRE(constant_seq(2.0).is_constant());
    REQUIRE(constant_seq(2.0).point(7).value() == 2.0);
    REQUIRE_THAT(exp_linear_seq(0.0, 1.0).value(3), WithinRel(std::exp(-3.0), 1e-15));
    REQUIRE(retarget(g, 5.0).point(1).anchor == 5.0);
    REQUIRE(truth_name(Truth::Unknown) == "unknown");
}

TEST_CASE("ratio traces and liminf estimates", "[mode]") {
    const auto mu = unit_uniform();
    const auto r = geometric_seq(0.5, 0.25);
    for (double v : ratio_trace(mu, constant_seq(0.5), TraceTarget::sup(), r, 30)) REQUIRE_THAT(v, WithinAbs(1.0, 1e-12));
    for (double v : ratio_trace(mu, constant_seq(0.0), TraceTarget::sup(), r, 30)) REQUIRE_THAT(v, WithinAbs(0.5, 1e-12));
    // Centre 2^-n with radius 2^-(n+1): the ball stays inside [0, 1].
    const auto t = ratio_trace(mu, geometric_seq(0.5), TraceTarget::of(constant_seq(0.5)), geometric_seq(0.5, 0.5), 20);
    for (double v : t) REQUIRE_THAT(v, WithinAbs(1.0, 1e-12));
    // Radius 2^-n reaches past 0, so only three quarters of the ball carries mass.
    const auto h = ratio_trace(mu, geometric_seq(0.5, 0.5), TraceTarget::of(constant_seq(0.5)), geometric_seq(0.5), 20);
    for (double v : h) REQUIRE_THAT(v, WithinAbs(0.75, 1e-12));

    const auto c = liminf_estimate(std::vector<double>(20, 0.7), 8);
    REQUIRE(c.estimate == 0.7);
    REQUIRE(c.trend == "constant");

    std::vector<double> alt;
    for (int i = 0; i < 24; ++i) alt.push_back(i % 2 ? 1.2 : 0.8);
    const auto a = liminf_estimate(alt, 12);
    REQUIRE_THAT(a.estimate, WithinAbs(0.8, 1e-15));
    REQUIRE(a.trend == "periodic");
    REQUIRE(a.period == 2);

    std::vector<double> up;
    for (int n = 1; n <= 30; ++n) up.push_back(1.0 - 1.0 / n);
    const auto u = liminf_estimate(up, 10);
    REQUIRE(u.trend == "monotone-increasing");
    REQUIRE(u.estimate <= 1.0);
    REQUIRE(u.estimate >= up[static_cast<std::size_t>(u.window_from - 1)]);
}

TEST_CASE("fixed radius modes", "[mode]") {
    const auto u = fixed_radius_modes(unit_uniform(), 0.25);
    REQUIRE_THAT(u.mass, WithinAbs(0.5, 1e-14));
    REQUIRE(u.intervals.size() == 1);
    REQUIRE_THAT(u.intervals[0].first, WithinAbs(0.25, 1e-12));
    REQUIRE_THAT(u.intervals[0].second, WithinAbs(0.75, 1e-12));

    // Two half atoms at +-2r/3: full mass only for |u| < r/3, which contains 0.
    const double r = 0.3;
    const auto two = Measure1D::from_components({atom(Point(-2 * r / 3), 0.5), atom(Point(2 * r / 3), 0.5)});
    const auto m = fixed_radius_modes(two, r);
    REQUIRE_THAT(m.mass, WithinAbs(1.0, 1e-14));
    bool contains_zero = false;
    for (auto [a, b] : m.intervals)
        if (a <= 0.0 && 0.0 <= b) {
            contains_zero = true;
            REQUIRE_THAT(a, WithinAbs(-r / 3, 1e-12));
            REQUIRE_THAT(b, WithinAbs(r / 3, 1e-12));
        }
    for (double p : m.points)
        if (p == 0.0) contains_zero = true;
    REQUIRE(contains_zero);
}

TEST_CASE("quantifier evaluation on the uniform law", "[mode]") {
    EvalConfig cfg;
    cfg.N = 30;
    ModeEvaluator ev(unit_uniform(), make_pools(0.5, simple_pools(), cfg), cfg);
    for (ClassId c : kAllClasses) REQUIRE(ev.evaluate(class_definition(c), 0.5).truth == Truth::True);

    ModeEvaluator edge(unit_uniform(), make_pools(0.0, simple_pools(), cfg), cfg);
    const auto s = edge.evaluate(class_definition(ClassId::s), 0.0);
    REQUIRE(s.truth == Truth::False);
    REQUIRE(s.decisive_leaf.has_value());
    REQUIRE_THAT(s.decisive_leaf->estimate, WithinAbs(0.5, 1e-9));
    REQUIRE(edge.sup_mass(0.125) == Catch::Approx(0.25));
}

TEST_CASE("certificates and trace checks", "[mode]") {
    const auto mu = unit_uniform();
    TraceCheck tc;
    tc.label = "centre of U[0,1]";
    tc.u = constant_seq(0.5);
    tc.v = TraceTarget::sup();
    tc.r = geometric_seq(0.5, 0.25);
    tc.kind = TraceCheck::Kind::Equals;
    tc.value = 1.0;
    tc.n_to = 20;
    const auto res = run_trace_check(mu, tc);
    REQUIRE(res.ok);
    REQUIRE(res.values.size() == 20);

    tc.value = 0.9;
    REQUIRE_FALSE(run_trace_check(mu, tc).ok);

    Certificate cert;
    cert.example = "uniform";
    cert.cls = ClassId::pw;
    cert.u = 0.5;
    cert.pools = simple_pools();
    cert.claim = Claim::IsMode;
    cert.cfg.N = 30;
    const auto rep = verify_certificate(mu, cert);
    REQUIRE(rep.verdict == Verdict::Pass);
    REQUIRE(rep.to_json().at("verdict") == "Pass");
    cert.claim = Claim::IsNotMode;
    REQUIRE(verify_certificate(mu, cert).verdict == Verdict::Fail);
}

TEST_CASE("OM functional check on a triangular density", "[mode]") {
    // f(x) = 1 - |x| on [-1, 1]; I = -log f.
    const auto mu = Measure1D::from_components({triangular(Point(0.0), 1.0, 1.0)});
    const std::vector<double> E = {0.0, 0.5, -0.25};
    std::vector<double> I;
    for (double x : E) I.push_back(-std::log(1.0 - std::fabs(x)));
    const auto rep = om_check(mu, E, I, {3.0}, geometric_seq(0.5, 0.1), 30, 1e-6);
    REQUIRE(rep.ok);
    REQUIRE_FALSE(rep.pairs.empty());
    for (const auto& p : rep.pairs) REQUIRE_THAT(p.observed, WithinRel(p.expected, 1e-6));

    // A wrong functional is rejected.
    std::vector<double> wrong = I;
    wrong[1] += 0.5;
    REQUIRE_FALSE(om_check(mu, E, wrong, {}, geometric_seq(0.5, 0.1), 30, 1e-6).ok);
}

TEST_CASE("CASIO check", "[mode]") {
    const auto mu = unit_uniform();
    const std::vector<SequenceGen> as = {constant_seq(0.5), geometric_seq(0.5, 1.0, 0.5)};
    const std::vector<SequenceGen> rs = {geometric_seq(0.5), geometric_seq(0.25)};
    const auto good = casio_check(mu, 0.5, as, rs, 30, 1e-9);
    REQUIRE(good.ok);
    REQUIRE(good.entries.size() == 4);
    // At the boundary point 0 the ratio against u_n = r_n stays at 1/2.
    const auto bad = casio_check(mu, 0.0, {geometric_seq(0.5)}, {geometric_seq(0.5)}, 30, 1e-9);
    REQUIRE_FALSE(bad.ok);
}

TEST_CASE("axiom scenarios for every class", "[mode][scenarios]") {
    REQUIRE_THAT(ap_measure().ball_mass(Point(0.0), 0.1).value, WithinAbs(0.5, 1e-14));
    REQUIRE_THAT(cp_base_measure().ball_mass(Point(0.0), 0.25).value, WithinAbs(0.5, 1e-14));
    REQUIRE_THAT(cp_clone_measure(0.49).total_mass(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(lp_measure(1.0, 2.0).total_mass(), WithinAbs(1.0, 1e-12));
    for (ClassId c : kAllClasses) {
        const auto rep = axiom_scenarios(c);
        INFO(rep.text());
        REQUIRE(rep.suites.size() == 3);
        REQUIRE(rep.ok());
    }
}
