#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "modelattice/acceptance.hpp"
#include "modelattice/measure.hpp"

using namespace modelattice;

TEST_CASE("property suites hold on every shipped measure", "[properties]") {
    for (std::uint64_t seed : {0ull, 1ull}) {
        const auto rep = run_property_suites(seed, 300);
        REQUIRE(rep.outcomes.size() == 4 * shipped_measures().size());
        for (const auto& o : rep.outcomes) {
            INFO(o.property << " on " << o.measure << ": " << o.first_failure);
            REQUIRE(o.ok());
        }
        REQUIRE(rep.ok());
    }
}

TEST_CASE("the suite reports a failure on a bad outcome", "[properties]") {
    PropertyOutcome o;
    o.applicable = 5;
    o.failures = 1;
    REQUIRE_FALSE(o.ok());
    o.failures = 0;
    REQUIRE(o.ok());
    o.applicable = 0;
    REQUIRE_FALSE(o.ok());
    o.vacuous = true;
    REQUIRE(o.ok());
}

TEST_CASE("sup ball mass dominates a grid search and is attained", "[properties]") {
    std::mt19937_64 rng(3);
    for (const auto& nm : shipped_measures()) {
        const auto& mu = nm.measure;
        auto [lo, hi] = mu.support_hull();
        lo = std::max(lo, -8.0);
        hi = std::min(hi, 8.0);
        for (double r : {0.5, 0.1, 1e-2, 1e-4}) {
            INFO(nm.name << " r = " << r);
            const auto sup = mu.sup_ball_mass(r);
            REQUIRE(sup.mass <= 1.0 + 1e-12);
            REQUIRE_FALSE(sup.argmax.empty());
            REQUIRE(mu.ball_mass(sup.argmax.front(), r).value >= sup.mass * (1.0 - 1e-9));
            const int steps = 4000;
            double grid = 0.0;
            for (int i = 0; i <= steps; ++i) {
                const double u = lo - r + (hi - lo + 2 * r) * i / steps;
                grid = std::max(grid, mu.ball_mass(Point(u), r).value);
            }
            std::uniform_real_distribution<double> U(lo - r, hi + r);
            for (int i = 0; i < 500; ++i) grid = std::max(grid, mu.ball_mass(Point(U(rng)), r).value);
            REQUIRE(grid <= sup.mass * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("ball masses are monotone in r and additive over adjacent intervals", "[properties]") {
    std::mt19937_64 rng(5);
    for (const auto& nm : shipped_measures()) {
        const auto& mu = nm.measure;
        auto [lo, hi] = mu.support_hull();
        lo = std::max(lo, -8.0);
        hi = std::min(hi, 8.0);
        std::uniform_real_distribution<double> U(lo, hi), L(-10.0, 0.0), T(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            INFO(nm.name);
            const double u = U(rng);
            const double r1 = std::pow(10.0, L(rng)), r2 = r1 * (1.0 + 3.0 * T(rng));
            const double m1 = mu.ball_mass(Point(u), r1).value, m2 = mu.ball_mass(Point(u), r2).value;
            REQUIRE(m1 >= 0.0);
            REQUIRE(m2 <= 1.0 + 1e-12);
            REQUIRE(m1 <= m2 + 1e-13);
            // (u - r2, u + r2) = (u - r2, u + c] + (u + c, u + r2); the split point
            // is random, so an atom sitting exactly on it has probability zero.
            const double c = -r2 + 2 * r2 * T(rng);
            const double whole = mu.interval_mass(Point(u), -r2, r2);
            const double parts = mu.interval_mass(Point(u), -r2, c) + mu.interval_mass(Point(u), c, r2);
            REQUIRE(std::fabs(whole - parts) <= 1e-12);
        }
    }
}
