#include "modelattice/ell2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace modelattice::ell2 {

namespace {

constexpr double kTieTol = 1e-12;
constexpr int kMaxIndex = 480;  // theta^(2j) stays a normal double for theta >= 1/2

double ipow(double x, int k) { return std::pow(x, static_cast<double>(k)); }

void require_index(const LatticeIndex& c) {
    if (c.i < 1 || c.j < c.i || c.j > kMaxIndex)
        throw std::domain_error("lattice index must satisfy 1 <= i <= j <= " + std::to_string(kMaxIndex));
}

}  // namespace

LatticeMeasure::LatticeMeasure(double theta, double zeta) : theta_(theta), zeta_(zeta) {
    if (!(theta > 0.0 && theta <= 0.5)) throw std::invalid_argument("theta must lie in (0, 1/2]");
    if (!(zeta > 0.0 && zeta <= theta / 4.0)) throw std::invalid_argument("zeta must lie in (0, theta/4]");
    Z_ = zeta * theta / ((1.0 - theta) * (1.0 - zeta * theta));
}

double LatticeMeasure::R(int j) const { return ipow(theta_, 2 * j) / 2.0; }

double LatticeMeasure::alpha(int i) const { return 4.0 * ipow(theta_, 2 * i) / (1.0 - theta_ * theta_); }

double LatticeMeasure::segment_mass(int i, int j) const {
    require_index({i, j});
    return ipow(zeta_, i) * ipow(theta_, j) / Z_;
}

double LatticeMeasure::annulus_mass(int i) const {
    const double q = zeta_ * theta_;
    return ipow(q, i - 1) - ipow(q, i);
}

double LatticeMeasure::annulus_mass_by_sum(int i) const {
    long double s = 0.0L;
    for (int j = i; j <= std::min(i + 200, kMaxIndex); ++j) s += segment_mass(i, j);
    return static_cast<double>(s);
}

double LatticeMeasure::outer_tail_mass(int i) const { return ipow(zeta_ * theta_, i - 1); }

double LatticeMeasure::total_mass() const {
    long double s = 0.0L;
    for (int i = 1; i <= 60; ++i) {
        long double row = 0.0L;
        for (int j = std::min(i + 200, kMaxIndex); j >= i; --j) row += segment_mass(i, j);
        s += row;
    }
    return static_cast<double>(s);
}

double LatticeMeasure::ball_mass(const LatticeIndex& c, double r) const {
    require_index(c);
    if (!(r > 0.0)) throw std::domain_error("radius must be positive");
    if (r > R(c.i) * (1.0 + kTieTol))
        throw std::domain_error("ball radius exceeds R_i; closed form unsupported");
    return ipow(zeta_, c.i) * 2.0 * ipow(theta_, -c.j) * std::min(r, R(c.j)) / Z_;
}

double LatticeMeasure::axis_ball_mass(int j, double t, double r) const {
    if (j < 1 || j > kMaxIndex) throw std::domain_error("axis index out of range");
    if (!(r > 0.0)) throw std::domain_error("radius must be positive");
    int best = 1;
    for (int i = 1; i <= j; ++i)
        if (std::abs(t - alpha(i)) < std::abs(t - alpha(best))) best = i;
    const double lo = alpha(best) - R(j), hi = alpha(best) + R(j);
    if (r > R(best) * (1.0 + kTieTol) || t + r < lo || t - r > hi)
        throw std::domain_error("ball does not meet exactly one segment; closed form unsupported");
    const double len = std::max(0.0, std::min(t + r, hi) - std::max(t - r, lo));
    return ipow(zeta_, best) * ipow(theta_, -j) * len / Z_;
}

double LatticeMeasure::annulus_gap(int i) const {
    if (i < 2) throw std::domain_error("annulus gap needs i >= 2");
    return (alpha(i - 1) - R(i - 1)) - (alpha(i) + R(i));
}

bool LatticeMeasure::separation_holds(int i) const {
    return annulus_gap(i) > 2.0 * R(i - 1) && std::sqrt(2.0) * alpha(i) > 3.0 * R(i);
}

LatticeIndex LatticeMeasure::optimal_center(int i, double r) const {
    require_index({i, i});
    if (!(r > 0.0) || r > R(i) * (1.0 + kTieTol)) throw std::domain_error("optimal_center requires 0 < r <= R_i");
    // On [R_{j+1}/theta, R_j/theta) segment j wins; the left endpoint is a tie
    // with j + 1, resolved towards j.
    for (int j = i + 1; j < kMaxIndex; ++j) {
        const double lo = R(j + 1) / theta_, hi = R(j) / theta_;
        if (r >= lo * (1.0 - kTieTol) && r < hi * (1.0 - kTieTol)) return {i, j};
        if (r >= hi * (1.0 - kTieTol)) break;
    }
    if (r < R(kMaxIndex - 1)) throw std::domain_error("radius below resolvable range");
    return {i, i};
}

LatticeIndex LatticeMeasure::brute_force_center(int i, double r) const {
    require_index({i, i});
    if (!(r > 0.0) || r > R(i) * (1.0 + kTieTol)) throw std::domain_error("brute_force_center requires 0 < r <= R_i");
    int J = i;
    while (J < kMaxIndex && R(J) > r) ++J;
    LatticeIndex best{i, i};
    double best_mass = ball_mass(best, r);
    for (int j = i + 1; j <= std::min(J + 2, kMaxIndex); ++j) {
        const double m = ball_mass({i, j}, r);
        if (m > best_mass * (1.0 + kTieTol)) {
            best_mass = m;
            best = {i, j};
        }
    }
    return best;
}

LatticeIndex LatticeMeasure::dominant_center(double r) const {
    if (!(r > 0.0) || r > R(1)) throw std::domain_error("dominant_center requires 0 < r <= R_1");
    int jn = 1;
    while (jn + 1 < kMaxIndex && r <= R(jn + 1)) ++jn;
    int in = 1;
    for (int k = 1; k <= jn; ++k)
        if (ipow(zeta_, k) >= std::pow(theta_, jn / 2.0)) in = k;
    return {in, jn};
}

nlohmann::json ImprovementReport::to_json() const {
    nlohmann::json j{{"replaced", replaced}, {"min_factor_replaced", min_factor_replaced},
                     {"converges", converges}, {"ok", ok}, {"improved", nlohmann::json::array()}};
    for (const auto& c : improved) j["improved"].push_back({c.i, c.j});
    return j;
}

ImprovementReport improve_sequence(const LatticeMeasure& mu, const std::vector<LatticeIndex>& centers,
                                   const std::vector<double>& radii) {
    if (centers.size() != radii.size()) throw std::invalid_argument("centers and radii differ in length");
    ImprovementReport rep;
    rep.ok = true;
    rep.min_factor_replaced = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < centers.size(); ++n) {
        const LatticeIndex c = centers[n];
        const LatticeIndex d = c.i > 1 ? LatticeIndex{c.i - 1, c.j} : c;
        const double f = mu.ball_mass(d, radii[n]) / mu.ball_mass(c, radii[n]);
        rep.improved.push_back(d);
        rep.factors.push_back(f);
        if (d != c) {
            ++rep.replaced;
            rep.min_factor_replaced = std::min(rep.min_factor_replaced, f);
            if (f < (1.0 / mu.zeta()) * (1.0 - 1e-12)) rep.ok = false;
        } else if (f != 1.0) {
            rep.ok = false;
        }
    }
    if (rep.replaced == 0) rep.min_factor_replaced = 0.0;
    // The modified indices differ from the originals by at most one, so they
    // still leave every bounded set of annuli.
    rep.converges = !centers.empty() && rep.improved.back().i + 1 >= centers.back().i &&
                    centers.back().i > centers.front().i;
    return rep;
}

void random_approximating_sequence(const LatticeMeasure& mu, std::mt19937_64& rng, int length,
                                   std::vector<LatticeIndex>& centers, std::vector<double>& radii) {
    std::uniform_int_distribution<int> start(1, 3), step(0, 1), extra(0, 6);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    centers.clear();
    radii.clear();
    int i = start(rng);
    for (int n = 0; n < length; ++n) {
        if (n > 0) i += step(rng);
        if (n == length - 1 && i == centers.front().i) ++i;
        const int j = i + extra(rng);
        centers.push_back({i, j});
        radii.push_back(mu.R(i) * std::pow(10.0, -4.0 * frac(rng)));
    }
}

bool LatticeSuiteReport::ok() const {
    return mass_ok && optimal_checks > 0 && optimal_agree == optimal_checks && sequences > 0 &&
           sequences_ok == sequences && separation_ok;
}

nlohmann::json LatticeSuiteReport::to_json() const {
    return {{"total_mass", total_mass},       {"mass_ok", mass_ok},       {"optimal_checks", optimal_checks},
            {"optimal_agree", optimal_agree}, {"sequences", sequences},   {"sequences_ok", sequences_ok},
            {"worst_factor", worst_factor},   {"separation_ok", separation_ok}, {"ok", ok()}};
}

LatticeSuiteReport run_lattice_suite(const LatticeMeasure& mu, std::uint64_t seed, int radii, int sequences,
                                     int length) {
    LatticeSuiteReport rep;
    rep.total_mass = mu.total_mass();
    rep.mass_ok = std::abs(rep.total_mass - 1.0) <= 1e-12;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_i(1, 6);
    std::uniform_real_distribution<double> expo(0.0, 8.0);
    for (int k = 0; k < radii; ++k) {
        const int i = pick_i(rng);
        const double r = mu.R(i) * std::pow(10.0, -expo(rng));
        ++rep.optimal_checks;
        if (mu.optimal_center(i, r) == mu.brute_force_center(i, r)) ++rep.optimal_agree;
    }

    rep.worst_factor = std::numeric_limits<double>::infinity();
    for (int s = 0; s < sequences; ++s) {
        std::vector<LatticeIndex> c;
        std::vector<double> r;
        random_approximating_sequence(mu, rng, length, c, r);
        const ImprovementReport ir = improve_sequence(mu, c, r);
        ++rep.sequences;
        if (ir.ok && ir.converges && ir.replaced > 0) ++rep.sequences_ok;
        if (ir.replaced > 0) rep.worst_factor = std::min(rep.worst_factor, ir.min_factor_replaced);
    }

    rep.separation_ok = true;
    for (int i = 2; i <= 20; ++i) rep.separation_ok = rep.separation_ok && mu.separation_holds(i);
    return rep;
}

}  // namespace modelattice::ell2
