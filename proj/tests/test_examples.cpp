#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "modelattice/examples.hpp"

using namespace modelattice;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::set<ClassId> classes(std::initializer_list<const char*> names) {
    std::set<ClassId> out;
    for (const char* n : names) out.insert(class_from_name(n));
    return out;
}

const std::map<ExampleId, std::set<ClassId>>& expected_rows() {
    static const std::map<ExampleId, std::set<ClassId>> rows = {
        {ExampleId::ENotPGS, classes({"e", "w", "pw", "wp", "gwap", "wgap"})},
        {ExampleId::WNotEPGS, classes({"w", "pw", "wp", "gwap", "wgap"})},
        {ExampleId::PSNotGW, classes({"ps", "pgs", "pw", "wp", "gwap", "wgap"})},
        {ExampleId::PGSNotGS, classes({"pgs", "gwap", "wgap"})},
        {ExampleId::WPNotPWPGS, classes({"wp", "gwap", "wgap"})},
        {ExampleId::GSNotWP, classes({"gs", "pgs", "gwap", "wgap"})},
        {ExampleId::WGAPNotGWAP, classes({"wgap"})},
    };
    return rows;
}

}  // namespace

TEST_CASE("example names round trip", "[examples]") {
    REQUIRE(all_examples().size() == 11);
    for (ExampleId id : all_examples()) REQUIRE(parse_example(example_name(id)) == id);
    REQUIRE_FALSE(parse_example("no-such-example").has_value());
    REQUIRE(matrix_examples().size() == 7);
    REQUIRE_FALSE(is_one_dimensional(ExampleId::GaussENotPS));
    REQUIRE_THROWS_AS(build_example(ExampleId::GaussENotPS), std::invalid_argument);
    REQUIRE_THROWS_AS(build_example(ExampleId::L2NoOptimalAS), std::invalid_argument);
}

TEST_CASE("pinned free parameters are admissible", "[examples]") {
    const double bound = 1.0 / (3.0 / (2.0 * std::sqrt(2.0)) - 1.0);
    REQUIRE_THAT(bound, WithinAbs(16.49, 0.005));
    REQUIRE(kSuspensionBeta > bound);
    REQUIRE(kWpAlpha > 0.0);
    REQUIRE(kWpAlpha < 1.0 / 3.0);
    REQUIRE(kPgsC == -0.125);
}

TEST_CASE("every example measure is a probability measure", "[examples]") {
    for (ExampleId id : all_examples()) {
        if (!is_one_dimensional(id)) continue;
        INFO(example_name(id));
        REQUIRE_THAT(example_measure(id).total_mass(), WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("separation matrix equals the frozen rows", "[examples]") {
    const auto M = run_separation_matrix();
    REQUIRE(M.rows.size() == 7);
    for (const auto& row : M.rows) {
        INFO(example_name(row.id));
        REQUIRE(row.observed == expected_rows().at(row.id));
        REQUIRE(row.expected == expected_rows().at(row.id));
        REQUIRE(row.matches);
        REQUIRE(row.downset);
        REQUIRE(row.cells.size() == 10);
    }
    REQUIRE(M.ok());
    const std::string csv = M.to_csv();
    REQUIRE(csv.find("PS-not-GW") != std::string::npos);
    REQUIRE(M.to_json().size() == 7);
}

TEST_CASE("certificates per example", "[examples]") {
    const auto b = build_example(ExampleId::GSNotWP);
    const auto certs = example_certificates(b);
    REQUIRE(certs.size() == 10);
    for (const auto& c : certs)
        REQUIRE((c.claim == Claim::IsMode) == (b.expected.count(c.cls) == 1));
    const auto v = verify_example(ExampleId::PSNotGW);
    REQUIRE(v.ok);
    REQUIRE(v.to_json().at("ok") == true);
}

TEST_CASE("gamma ratio on the block structure", "[examples]") {
    // A ball well inside the dense block of C_3 sees no even-indexed mass.
    REQUIRE(gamma_ratio(0.125, std::ldexp(1.0, -14)) == 0.0);

    // Direct sum over the blocks as an independent route.
    const auto fam = families::wgap_blocks(0.0, 1.0, 1.0);
    auto direct = [&](double u, double r) {
        double odd = 0.0, even = 0.0;
        for (long k = 1; k <= 60; ++k) {
            const auto c = fam.at(k);
            const double d = u - c.center.value();
            const double m = c.raw_mass(d, -r, r) * c.weight;
            (k % 2 ? odd : even) += m;
        }
        return even / odd;
    };
    for (auto [u, r] : std::vector<std::pair<double, double>>{{0.125, 0.05}, {0.13, 0.1}, {0.5, 0.25}, {0.03, 0.02}}) {
        INFO("u = " << u << " r = " << r);
        REQUIRE_THAT(gamma_ratio(u, r), WithinRel(direct(u, r), 1e-9));
    }

    const auto g = gamma_grid(10, 20, 5);
    REQUIRE(g.probes >= 10 * 20);
    REQUIRE(g.gamma_ok);
    REQUIRE(g.max_gamma <= 8.0);
    REQUIRE(g.ratio_ok);
    REQUIRE(g.max_ratio <= 0.9);
    REQUIRE_THROWS_AS(gamma_grid(0, 1), std::invalid_argument);
}

TEST_CASE("merging failures", "[examples]") {
    const auto rep = merging_property_report();
    REQUIRE(rep.ok());
    bool ps = false, susp = false, identity = false;
    for (const auto& c : rep.cases) {
        INFO(c.label);
        REQUIRE(c.ok);
        if (c.label.rfind("PS-not-GW", 0) == 0) ps = true;
        if (c.label.rfind("SuspensionExt", 0) == 0) susp = true;
        if (c.label.find("whole line") != std::string::npos) identity = true;
    }
    REQUIRE(ps);
    REQUIRE(susp);
    REQUIRE(identity);
    REQUIRE(rep.text().find("PS-not-GW") != std::string::npos);
}
