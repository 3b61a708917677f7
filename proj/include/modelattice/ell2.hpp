#ifndef MODELATTICE_ELL2_HPP
#define MODELATTICE_ELL2_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

namespace modelattice::ell2 {

// Centre alpha_i e_j of the segment B_{i,j}; requires 1 <= i <= j.
struct LatticeIndex {
    int i = 1;
    int j = 1;
    bool operator==(const LatticeIndex& o) const { return i == o.i && j == o.j; }
    bool operator!=(const LatticeIndex& o) const { return !(*this == o); }
};

// Annuli of uniform segments in l^2: segment j of annulus i is
// theta^j * Uniform[-R_j, R_j] along e_j, centred at alpha_i e_j, and
// annulus i carries weight zeta^i / Z.
class LatticeMeasure {
public:
    explicit LatticeMeasure(double theta = 0.5, double zeta = 0.125);

    double theta() const { return theta_; }
    double zeta() const { return zeta_; }
    double R(int j) const;
    double alpha(int i) const;
    double Z() const { return Z_; }

    double segment_mass(int i, int j) const;      // mu(B_{i,j})
    double annulus_mass(int i) const;             // closed form
    double annulus_mass_by_sum(int i) const;      // sum over segments
    double outer_tail_mass(int i) const;          // mu(union of A_k, k >= i)
    double total_mass() const;                    // summed, not closed form

    // Exact for r <= R_i; throws std::domain_error otherwise.
    double ball_mass(const LatticeIndex& c, double r) const;
    // Ball centred at t e_j on a coordinate axis. Exact when the ball meets at
    // most one segment, i.e. r <= R_i for the nearest annulus i; throws otherwise.
    double axis_ball_mass(int j, double t, double r) const;

    // Lower bound on dist(A_{i-1}, A_i) from the norm ranges of the annuli.
    double annulus_gap(int i) const;
    bool separation_holds(int i) const;  // gap > 2 R_{i-1} and sqrt(2) alpha_i > 3 R_i

    LatticeIndex optimal_center(int i, double r) const;  // requires r <= R_i
    LatticeIndex brute_force_center(int i, double r) const;

    // Centre alpha_{i_n} e_{j_n} with mass in omega(r) as r -> 0.
    LatticeIndex dominant_center(double r) const;

private:
    double theta_, zeta_, Z_;
};

struct ImprovementReport {
    std::vector<LatticeIndex> improved;
    std::vector<double> factors;  // new mass / old mass per term
    double min_factor_replaced = 0.0;
    int replaced = 0;
    bool converges = false;       // indices of the output still diverge
    bool ok = false;
    nlohmann::json to_json() const;
};

// Moves (i, j) to (i - 1, j) whenever i > 1. radii[n] must satisfy r <= R_i.
ImprovementReport improve_sequence(const LatticeMeasure& mu, const std::vector<LatticeIndex>& centers,
                                   const std::vector<double>& radii);

// Random approximating sequence of the given length with i_n nondecreasing to
// infinity and r_n <= R_{i_n}.
void random_approximating_sequence(const LatticeMeasure& mu, std::mt19937_64& rng, int length,
                                   std::vector<LatticeIndex>& centers, std::vector<double>& radii);

struct LatticeSuiteReport {
    double total_mass = 0.0;
    bool mass_ok = false;
    int optimal_checks = 0, optimal_agree = 0;
    int sequences = 0, sequences_ok = 0;
    double worst_factor = 0.0;
    bool separation_ok = false;
    bool ok() const;
    nlohmann::json to_json() const;
};

LatticeSuiteReport run_lattice_suite(const LatticeMeasure& mu, std::uint64_t seed, int radii = 100, int sequences = 50,
                                     int length = 30);

}  // namespace modelattice::ell2

#endif  // MODELATTICE_ELL2_HPP
