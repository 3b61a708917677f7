#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "modelattice/ell2.hpp"
#include "modelattice/gaussian.hpp"

using namespace modelattice;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Best segment of annulus i for radius r by direct comparison of all masses,
// ties resolved towards the smaller j.
int argmax_segment(double theta, double zeta, int i, double r) {
    int best = i;
    double best_mass = -1.0;
    for (int j = i; j <= 400; ++j) {
        const double Rj = std::pow(theta, 2 * j) / 2.0;
        const double m = std::pow(zeta, i) * std::pow(theta, -j) * 2.0 * std::min(r, Rj);
        if (m > best_mass * (1.0 + 1e-12)) {
            best_mass = m;
            best = j;
        }
    }
    return best;
}

gaussian::GaussianSpec small_spec(long samples = 4000) {
    gaussian::GaussianSpec s;
    s.dim = 40;
    s.samples = samples;
    s.seed = 12345;
    return s;
}

}  // namespace

TEST_CASE("lattice measure closed forms", "[ell2]") {
    const ell2::LatticeMeasure mu;  // theta = 1/2, zeta = 1/8
    const double th = 0.5, ze = 0.125;
    REQUIRE_THAT(mu.Z(), WithinRel(ze * th / ((1 - th) * (1 - ze * th)), 1e-15));
    REQUIRE_THAT(mu.total_mass(), WithinAbs(1.0, 1e-13));
    for (int i = 1; i <= 12; ++i) {
        REQUIRE_THAT(mu.annulus_mass(i), WithinRel(mu.annulus_mass_by_sum(i), 1e-12));
        REQUIRE_THAT(mu.outer_tail_mass(i), WithinRel(std::pow(ze * th, i - 1), 1e-14));
        REQUIRE_THAT(mu.R(i), WithinRel(std::pow(th, 2 * i) / 2, 1e-15));
        REQUIRE_THAT(mu.alpha(i), WithinRel(4 * std::pow(th, 2 * i) / (1 - th * th), 1e-15));
        if (i >= 2) REQUIRE(mu.separation_holds(i));
    }
    // Ball masses: uniform density on each segment.
    for (int i = 1; i <= 4; ++i)
        for (int j = i; j <= i + 6; ++j)
            for (double f : {0.1, 0.5, 1.0}) {
                const double r = f * mu.R(i);
                const double want = mu.segment_mass(i, j) * std::min(2 * r, 2 * mu.R(j)) / (2 * mu.R(j));
                REQUIRE_THAT(mu.ball_mass({i, j}, r), WithinRel(want, 1e-12));
            }
    REQUIRE_THROWS_AS(mu.ball_mass({2, 3}, 2 * mu.R(2)), std::domain_error);
    REQUIRE_THROWS_AS(mu.ball_mass({3, 2}, 1e-6), std::domain_error);
    REQUIRE_THROWS_AS(ell2::LatticeMeasure(0.5, 0.2), std::invalid_argument);

    // Axis balls agree with the segment formula when centred on the segment.
    REQUIRE_THAT(mu.axis_ball_mass(3, mu.alpha(2), mu.R(3) / 2), WithinRel(mu.ball_mass({2, 3}, mu.R(3) / 2), 1e-12));
}

TEST_CASE("optimal centre matches direct maximisation", "[ell2]") {
    for (auto [th, ze] : std::vector<std::pair<double, double>>{{0.5, 0.125}, {0.4, 0.05}}) {
        const ell2::LatticeMeasure mu(th, ze);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int i = 1; i <= 4; ++i)
            for (int k = 0; k < 200; ++k) {
                const double r = mu.R(i) * std::pow(10.0, -12.0 * U(rng));
                const auto c = mu.optimal_center(i, r);
                INFO("theta " << th << " i " << i << " r " << r);
                REQUIRE(c.i == i);
                REQUIRE(c.j == argmax_segment(th, ze, i, r));
                REQUIRE(c == mu.brute_force_center(i, r));
            }
    }
}

TEST_CASE("moving to the previous annulus improves every term by 1/zeta", "[ell2]") {
    const ell2::LatticeMeasure mu;
    std::mt19937_64 rng(4);
    std::vector<ell2::LatticeIndex> centres;
    std::vector<double> radii;
    ell2::random_approximating_sequence(mu, rng, 25, centres, radii);
    REQUIRE(centres.size() == 25);
    for (std::size_t n = 0; n < centres.size(); ++n) {
        REQUIRE(radii[n] <= mu.R(centres[n].i) * (1 + 1e-12));
        if (n) REQUIRE(centres[n].i >= centres[n - 1].i);
    }
    const auto rep = ell2::improve_sequence(mu, centres, radii);
    REQUIRE(rep.ok);
    REQUIRE(rep.converges);  // the improved sequence still leaves every annulus
    for (std::size_t n = 0; n < centres.size(); ++n) {
        if (centres[n].i > 1) {
            REQUIRE(rep.improved[n] == ell2::LatticeIndex{centres[n].i - 1, centres[n].j});
            REQUIRE_THAT(rep.factors[n], WithinRel(1.0 / mu.zeta(), 1e-12));
        }
    }
    REQUIRE_THAT(rep.min_factor_replaced, WithinRel(8.0, 1e-12));
}

TEST_CASE("lattice suite and dominant centres", "[ell2]") {
    const ell2::LatticeMeasure mu;
    const auto rep = ell2::run_lattice_suite(mu, 1, 40, 10, 20);
    REQUIRE(rep.ok());
    REQUIRE(rep.worst_factor >= 8.0);
    REQUIRE(rep.optimal_agree == rep.optimal_checks);
    int prev_i = 0;
    for (int k = 3; k <= 63; k += 4) {
        const auto c = mu.dominant_center(std::ldexp(1.0, -k));
        REQUIRE(c.i <= c.j);
        REQUIRE(c.i >= prev_i);
        prev_i = c.i;
    }
    REQUIRE(prev_i > 1);
}

TEST_CASE("Gaussian helpers", "[ell2][gaussian]") {
    // Euler-Maclaurin tail of sum k^-2 beyond M.
    const int M = 1000000;
    double s = 0.0;
    for (int k = M; k > 50; --k) s += 1.0 / (double(k) * k);
    s += 1.0 / M - 0.5 / (double(M) * M) + 1.0 / (6.0 * double(M) * M * M);
    REQUIRE_THAT(gaussian::tail_variance(50), WithinRel(s, 1e-10));

    std::vector<double> x(5, 0.0);
    x[0] = 2.0;
    REQUIRE_THAT(gaussian::neg_tau(x.data(), 5, 3), WithinAbs(2.0, 1e-15));
    REQUIRE_FALSE(gaussian::in_A(x.data(), 5, 3));
    x[1] = 0.5;  // 1/2 * 4 * 0.25 = 0.5
    REQUIRE_THAT(gaussian::neg_tau(x.data(), 5, 3), WithinAbs(2.5, 1e-15));
    x[2] = 1.0;  // adds 1/2 * 9 -> capped at 1
    REQUIRE_THAT(gaussian::neg_tau(x.data(), 5, 3), WithinAbs(3.0, 1e-15));
    REQUIRE(gaussian::in_A(x.data(), 5, 3));
    REQUIRE(gaussian::mc_verdict_name(gaussian::McVerdict::Pass) == "Pass");
}

TEST_CASE("small-sample Gaussian estimates", "[ell2][gaussian]") {
    const auto spec = small_spec();
    const auto zero = gaussian::cameron_martin_shift_check(spec, 0.0, 1.0);
    REQUIRE(zero.verdict == gaussian::McVerdict::Pass);
    REQUIRE(zero.shifted.point == zero.origin.point);

    const auto big = gaussian::mc_ball_mass(spec, {}, 10.0);
    REQUIRE(big.hi >= 0.999);
    REQUIRE(big.point <= 1.0 + 1e-12);

    // Mirror centres carry equal mass; independent estimates must agree.
    std::vector<double> c(3, 0.0), m(3, 0.0);
    c[0] = 0.8;
    m[0] = -0.8;
    const auto a = gaussian::mc_ball_mass(spec, c, 1.0, {}, 3);
    const auto b = gaussian::mc_ball_mass(spec, m, 1.0, {}, 4);
    REQUIRE(std::abs(a.point - b.point) <= std::hypot(a.half_width(), b.half_width()) * 1.5);
    const auto o = gaussian::mc_ball_mass(spec, {}, 1.0, {}, 5);
    REQUIRE(o.point > a.point);

    const auto centres = gaussian::sample_centres(9, 5, 0.3, 1.0);
    REQUIRE(centres.size() == 5);
    for (const auto& v : centres) {
        double n2 = 0.0;
        for (double t : v) n2 += t * t;
        REQUIRE(std::sqrt(n2) >= 0.3 - 1e-12);
        REQUIRE(std::sqrt(n2) <= 1.0 + 1e-12);
    }
    REQUIRE(gaussian::origin_dominance_check(spec, 1.0, centres).verdict != gaussian::McVerdict::Fail);
}
