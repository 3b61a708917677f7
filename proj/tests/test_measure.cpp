#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "modelattice/examples.hpp"
#include "modelattice/measure.hpp"

using namespace modelattice;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Measure1D unit_uniform() { return Measure1D::from_components({uniform_interval(0.0, 1.0, 1.0)}); }

// Piecewise linear centred mass through (r0 q^k, F0 s^k), evaluated directly.
double knot_oracle(double r0, double q, double F0, double s, double r) {
    if (r <= 0.0) return 0.0;
    if (r >= r0) return F0;
    double hi = r0, fhi = F0;
    while (hi * q > r) {
        hi *= q;
        fhi *= s;
    }
    const double lo = hi * q, flo = fhi * s;
    return flo + (fhi - flo) * (r - lo) / (hi - lo);
}

}  // namespace

TEST_CASE("mass ratio conventions", "[measure]") {
    REQUIRE(mass_ratio(0.0, 0.0) == 1.0);
    REQUIRE(std::isinf(mass_ratio(1.0, 0.0)));
    REQUIRE(mass_ratio(1.0, 2.0) == 0.5);
}

TEST_CASE("atoms inside, outside and on the boundary of an open ball", "[measure]") {
    const auto mu = Measure1D::from_components({atom(Point(0.0), 0.25), atom(Point(1.0), 0.75)});
    REQUIRE_THAT(mu.normalizer().Z, WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(mu.ball_mass(Point(0.0), 0.5).value, WithinAbs(0.25, 1e-15));
    REQUIRE_THAT(mu.ball_mass(Point(0.5), 0.5).value, WithinAbs(0.0, 1e-15));  // both atoms on the boundary
    REQUIRE_THAT(mu.ball_mass(Point(0.5), 0.5000001).value, WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(mu.sup_ball_mass(0.1).mass, WithinAbs(0.75, 1e-15));
    // An atom of weight 1 with a tiny offset is still resolved.
    const auto d = Measure1D::from_components({atom(Point(1.0, 0x1p-80))});
    REQUIRE(d.ball_mass(Point(1.0), 0x1p-81).value == 0.0);
    REQUIRE(d.ball_mass(Point(1.0), 0x1p-79).value == 1.0);
}

TEST_CASE("uniform law: ball masses and sup", "[measure]") {
    const auto mu = unit_uniform();
    for (double r : {1e-9, 1e-3, 0.1, 0.25, 0.49}) {
        REQUIRE_THAT(mu.ball_mass(Point(0.5), r).value, WithinRel(2.0 * r, 1e-12));
        REQUIRE_THAT(mu.sup_ball_mass(r).mass, WithinRel(2.0 * r, 1e-12));
        REQUIRE_THAT(mu.ball_mass(Point(0.0), r).value, WithinRel(r, 1e-12));
        REQUIRE_THAT(ratio(mu, Point(0.3), Sup{}, r), WithinAbs(r <= 0.3 ? 1.0 : (0.3 + r) / (2 * r), 1e-12));
    }
    REQUIRE_THAT(mu.sup_ball_mass(0.75).mass, WithinAbs(1.0, 1e-15));
    REQUIRE(ratio(mu, Point(5.0), Point(6.0), 0.1) == 1.0);  // 0/0
    REQUIRE(std::isinf(ratio(mu, Point(0.5), Point(6.0), 0.1)));
}

TEST_CASE("power singularity has closed-form interval masses", "[measure]") {
    // 1/4 |x|^{-1/2} on [-1, 1] has unit mass and centred mass sqrt(r).
    const auto mu = Measure1D::from_components({power_singularity(Point(0.0), 0.5, 0.25, 1.0, false)});
    REQUIRE_THAT(mu.normalizer().Z, WithinAbs(1.0, 1e-14));
    for (double r : {1e-12, 1e-6, 0.01, 0.3, 0.99}) REQUIRE_THAT(mu.ball_mass(Point(0.0), r).value, WithinRel(std::sqrt(r), 1e-12));

    const Component c = power_singularity(Point(0.0), 0.3, 0.7, 2.0, false);
    auto prim = [](double x) { return 0.7 * std::pow(x, 0.7) / 0.7; };
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.1, 0.5}, {1e-8, 1e-3}, {0.5, 3.0}, {-0.4, 0.2}}) {
        const double ca = std::clamp(a, -2.0, 2.0), cb = std::clamp(b, -2.0, 2.0);
        const double want = (ca >= 0.0) ? prim(cb) - prim(ca) : prim(-ca) + prim(cb);
        REQUIRE_THAT(c.raw_mass(0.0, a, b), WithinRel(want, 1e-12));
    }

    const Component right = power_singularity(Point(0.0), 0.5, 0.5, 1.0, true);
    REQUIRE_THAT(right.raw_mass(0.0, -1.0, 0.0), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(right.centered_mass(0.25), WithinRel(0.5, 1e-12));
}

TEST_CASE("knot singularity interpolates linearly between knots", "[measure]") {
    const double r0 = 0.5, q = 0.25, F0 = 1.0, s = 0.4;
    const Component c = knot_singularity(Point(0.0), r0, q, F0, s);
    const KnotPiece k{r0, q, F0, s};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-30.0, std::log(0.6));
    for (int i = 0; i < 500; ++i) {
        const double r = std::exp(U(rng));
        const double want = knot_oracle(r0, q, F0, s, r);
        REQUIRE_THAT(knot_centered_mass(k, r), WithinRel(want, 1e-12));
        REQUIRE_THAT(c.centered_mass(r), WithinRel(want, 1e-11));
    }
    // One-sided intervals carry half of the increment of F.
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1e-4, 1e-2}, {0.01, 0.3}, {0.2, 0.45}}) {
        const double want = 0.5 * (knot_oracle(r0, q, F0, s, b) - knot_oracle(r0, q, F0, s, a));
        REQUIRE_THAT(c.raw_mass(0.0, a, b), WithinRel(want, 1e-11));
        REQUIRE_THAT(c.raw_mass(0.0, -b, -a), WithinRel(want, 1e-11));
    }
    REQUIRE_THROWS_AS(knot_singularity(Point(0.0), 1.0, 2.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("trig and triangular laws", "[measure]") {
    const Component t = trig_singularity(Point(0.0), 0.3, 0.0);
    REQUIRE_THAT(t.mass(), WithinAbs(1.0, 1e-10));
    for (double r : {1e-10, 1e-5, 0.01, 0.2}) {
        const double want = std::min(1.0, std::sqrt(2.0 * r) / (1.0 + 0.3 * std::sin(std::log(r))));
        REQUIRE_THAT(t.centered_mass(r), WithinRel(want, 1e-10));
    }
    REQUIRE_THROWS_AS(trig_singularity(Point(0.0), 0.5, 0.0), std::invalid_argument);

    const Component tri = triangular(Point(1.0), 2.0, 0.5);
    REQUIRE_THAT(tri.mass(), WithinAbs(1.0, 1e-14));
    for (double r : {0.01, 0.1, 0.4}) REQUIRE_THAT(tri.centered_mass(r), WithinRel(2 * 2.0 * (r - r * r / 1.0), 1e-12));
}

TEST_CASE("step train blocks carry closed-form masses", "[measure]") {
    // Two-sided 1/2 |x|^{-1/2} on |x| <= 1/16 at -1/8 (mass 1/2) plus blocks of mass 2 * 4^-k.
    const auto mu = example_measure(ExampleId::PGSNotGS);
    const double Z = 0.5 + 2.0 / 3.0;
    REQUIRE_THAT(mu.normalizer().Z, WithinRel(Z, 1e-12));
    REQUIRE_THAT(mu.total_mass(), WithinAbs(1.0, 1e-12));
    for (int k = 1; k <= 40; ++k) {
        const double u = std::ldexp(1.0, -k), R = std::ldexp(1.0, -4 * k);
        REQUIRE_THAT(mu.ball_mass(Point(u), R).value, WithinRel(2.0 * std::ldexp(1.0, -2 * k) / Z, 1e-12));
    }
}

TEST_CASE("alternating ratio of the knot-train example", "[measure]") {
    const auto mu = example_measure(ExampleId::PSNotGW);
    const double hi = 3.0 / (2.0 * std::sqrt(2.0));
    for (int n = 1; n <= 12; ++n) {
        const double a = ratio(mu, Point(-2.0), Point(2.0), std::ldexp(1.0, -2 * n));
        const double b = ratio(mu, Point(-2.0), Point(2.0), std::ldexp(1.0, -2 * n - 1));
        REQUIRE_THAT(std::min(a, b), WithinRel(1.0 / hi, 1e-9));
        REQUIRE_THAT(std::max(a, b), WithinRel(hi, 1e-9));
    }
}

TEST_CASE("translation, restriction and mixtures", "[measure][property]") {
    const auto mu = Measure1D::from_components(
        {power_singularity(Point(0.0), 0.5, 0.25, 1.0, false), atom(Point(2.0), 0.5)});
    const auto moved = mu.translate(3.5);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> Uu(-2.0, 3.0), Ur(-12.0, 0.5);
    for (int i = 0; i < 300; ++i) {
        const double u = Uu(rng), r = std::pow(10.0, Ur(rng));
        REQUIRE_THAT(moved.ball_mass(Point(u + 3.5), r).value, WithinAbs(mu.ball_mass(Point(u), r).value, 1e-12));
    }

    const auto half = unit_uniform().restrict({{0.0, 0.5}});
    REQUIRE_THAT(half.ball_mass(Point(0.25), 0.125).value, WithinAbs(0.5, 1e-14));
    REQUIRE_THAT(half.ball_mass(Point(0.75), 0.2).value, WithinAbs(0.0, 1e-14));

    const auto mix = Measure1D::convex_combine(0.3, unit_uniform(), Measure1D::from_components({atom(Point(5.0))}));
    REQUIRE_THAT(mix.ball_mass(Point(0.5), 0.1).value, WithinAbs(0.3 * 0.2, 1e-14));
    REQUIRE_THAT(mix.ball_mass(Point(5.0), 0.1).value, WithinAbs(0.7, 1e-14));
    REQUIRE_THAT(mix.sup_ball_mass(0.1).mass, WithinAbs(0.7, 1e-14));
}

TEST_CASE("JSON documents round trip", "[measure]") {
    const nlohmann::json doc = {
        {"label", "mix"},
        {"components",
         {{{"kind", "uniform"}, {"a", 0}, {"b", 2}, {"height", 0.5}},
          {{"kind", "power"}, {"center", 4}, {"p", 0.5}, {"coeff", 0.25}, {"truncation", 1}},
          {{"kind", "atom"}, {"center", -1}, {"weight", 0.5}}}}};
    const auto mu = measure_from_json(doc);
    REQUIRE(mu.label() == "mix");
    REQUIRE_THAT(mu.normalizer().Z, WithinAbs(2.5, 1e-14));
    const auto back = measure_from_json(mu.to_json());
    for (double u : {-1.0, 0.5, 4.0, 4.3})
        for (double r : {1e-6, 0.1, 1.0})
            REQUIRE_THAT(back.ball_mass(Point(u), r).value, WithinAbs(mu.ball_mass(Point(u), r).value, 1e-14));

    const auto t = measure_from_json({{"transform", "translate"}, {"b", 1.0}, {"measure", doc}});
    REQUIRE_THAT(t.ball_mass(Point(0.0), 0.1).value, WithinAbs(0.2, 1e-14));

    for (ExampleId id : matrix_examples()) {
        const auto m = example_measure(id);
        const auto rt = measure_from_json(m.to_json());
        for (double r : {1e-3, 0.05})
            REQUIRE_THAT(rt.sup_ball_mass(r).mass, WithinRel(m.sup_ball_mass(r).mass, 1e-12));
    }

    REQUIRE_THROWS_AS(measure_from_json(nlohmann::json::object()), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_from_json({{"components", {{{"kind", "blob"}}}}}), std::invalid_argument);
    REQUIRE_THROWS_AS(measure_from_json({{"transform", "spin"}}), std::invalid_argument);
    REQUIRE_THROWS_AS(component_from_json({{"kind", "atom"}, {"center", 0}, {"weight", -1}}), std::invalid_argument);
}
