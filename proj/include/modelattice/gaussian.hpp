#pragma once

// Monte-Carlo ball masses for the Gaussian measure
//   mu_0 = product of N(0, k^-2), k >= 1,
// truncated to the first `dim` coordinates. Coordinates beyond `dim` are not
// carried explicitly; their squared norm is bracketed per sample, and samples
// whose ball membership depends on the unresolved part are reported as
// uncertain instead of being assigned to either side.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace modelattice::gaussian {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024ULL;

// MODELATTICE_SEED if set and parseable, otherwise kDefaultSeed.
std::uint64_t default_seed();

struct GaussianSpec {
    int dim = 200;
    long samples = 100000;
    std::uint64_t seed = kDefaultSeed;
    bool include_tail = true;
    int streams = 8;                // independent RNG streams, merged in order
    double tail_block_ratio = 1.02; // tail coordinates grouped in blocks [a, b) with b <= ratio * a
    long tail_cutoff = 100000;      // beyond this index the tail is bounded, not sampled
    double tail_deviation_x = 20.0; // Laurent-Massart parameter for the far tail (failure prob e^-x)
    double z = 1.96;                // two-sided 95% normal quantile
    nlohmann::json to_json() const;
};

// Sum over k > dim of k^-2.
double tail_variance(int dim);

struct CIEstimate {
    double point = 0.0;
    double lo = 0.0, hi = 0.0;        // includes the uncertain samples on the respective side
    double se = 0.0;                   // standard error of the certain-inside part
    long samples = 0;
    long hits = 0;                     // certainly inside
    long uncertain = 0;
    bool degenerate = false;           // fewer than 30 hits
    double uncertain_fraction() const { return samples ? double(uncertain) / double(samples) : 0.0; }
    double half_width() const { return 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    nlohmann::json to_json() const;
};

// Gaussian proposal centred at `mean`, with coordinate variances 1/(k^2 + 2 tilt)
// and the first standard deviation further multiplied by x1_scale.
struct Proposal {
    std::vector<double> mean;
    double tilt = 0.0;
    double x1_scale = 1.0;
};

// Tilt placing the proposal's mean squared distance at r^2 minus the expected
// tail; returns -1 when r^2 does not exceed the expected tail.
double choose_tilt(const GaussianSpec& spec, double r);

// log of the integrand f in int_B f dmu_0; may return -infinity.
using LogIntegrand = std::function<double(const double* x, int dim)>;

struct Query {
    std::vector<double> centre;  // zero padded to dim
    double r = 1.0;
    LogIntegrand log_f;          // empty means f = 1
};

// Per-sample contributions of one query: a counts certain-inside samples,
// b additionally the uncertain ones.
struct QuerySamples {
    std::vector<double> a, b;
    long hits = 0, uncertain = 0;
};

std::vector<QuerySamples> run_queries(const GaussianSpec& spec, const Proposal& prop, const std::vector<Query>& queries,
                                      std::uint64_t salt = 0);

CIEstimate summarize(const QuerySamples& q, double z);

// Delta-method interval for sum(num) / sum(den).
struct RatioBound {
    double point = 0.0, lo = 0.0, hi = 0.0;
};
RatioBound ratio_bound(const std::vector<double>& num, const std::vector<double>& den, double z);

// Conditional mean of f over a ball, int_B f w / int_B w, where `num` carries
// f w and `den` carries w for the same ball. Uncertain samples are assigned to
// the ball or not so as to make the ratio as small (lower) or as large (upper)
// as possible; the delta-method interval is then added on that side.
double worst_case_conditional_mean(const QuerySamples& num, const QuerySamples& den, bool lower, double z);

// int_{B(c, r)} f dmu_0 with a proposal tilted towards the ball.
CIEstimate mc_ball_mass(const GaussianSpec& spec, const std::vector<double>& centre, double r,
                        const LogIntegrand& log_f = {}, std::uint64_t salt = 0);

// x_1^2 / 2 + min(1, 1/2 sum_{k=2}^K k^2 x_k^2), i.e. -tau evaluated at x.
double neg_tau(const double* x, int dim, int K);
// Whether 1/2 sum_{k=2}^K k^2 x_k^2 >= 1.
bool in_A(const double* x, int dim, int K);

enum class McVerdict { Pass, Fail, Inconclusive };
std::string mc_verdict_name(McVerdict v);

struct ShiftCheck {
    double lambda = 0.0, r = 1.0;
    int K = 10;
    CIEstimate shifted, origin;
    double joint_half_width = 0.0;
    McVerdict verdict = McVerdict::Inconclusive;
    nlohmann::json to_json() const;
};

// Compares int over B(lambda e_1, r) and over B(0, r) of exp(-Phi) dmu_0 for
// Phi(x) = -x_1^2/2 - min(1, 1/2 sum_{k=2}^K k^2 x_k^2), using two different
// proposals and independent streams.
ShiftCheck cameron_martin_shift_check(const GaussianSpec& spec, double lambda, double r, int K = 10);

struct DominanceCase {
    std::vector<double> centre;
    CIEstimate at_origin, at_centre;
    double diff_lower = 0.0;  // lower confidence bound of mass(origin) - mass(centre)
    bool ok = false;
};

struct DominanceCheck {
    std::string name;
    double r = 1.0;
    double z = 0.0;
    std::vector<DominanceCase> cases;
    McVerdict verdict = McVerdict::Inconclusive;
    nlohmann::json to_json() const;
};

std::vector<std::vector<double>> sample_centres(std::uint64_t seed, int count, double min_norm, double max_norm,
                                                int span = 6);

// mu_0(B(0, r)) >= mu_0(B(x, r)); with K > 0 the integrand exp(-tau) is used.
DominanceCheck origin_dominance_check(const GaussianSpec& spec, double r, const std::vector<std::vector<double>>& centres,
                                      int K = 0);

struct RadiusCheck {
    double r = 0.0;
    double tilt = 0.0;
    CIEstimate ball;                 // mu_0(B(0, r))
    double p_A_lower = 0.0;          // lower bound of mu_0(A_K | B(0, r)) for the chosen K
    double ratio_point = 0.0, ratio_upper = 0.0;
    McVerdict verdict = McVerdict::Inconclusive;
    std::string note;
};

struct ConstructionStep {
    int n = 0;
    double R = 0.0;
    int K = 0;                       // 0 when no candidate met the requirement
    double r_n = 0.0;                // PS-not-S only
    double R_next = 0.0;             // PS-not-S only
    std::vector<RadiusCheck> radii;
    nlohmann::json extra = nlohmann::json::object();
    McVerdict verdict = McVerdict::Inconclusive;
    std::string note;
};

struct ConstructionReport {
    std::string example;
    GaussianSpec spec;
    int n_max = 0;
    std::vector<ConstructionStep> steps;
    McVerdict verdict() const;
    nlohmann::json to_json() const;
};

inline constexpr int kMaxConstructionN = 3;

// Centres c_n = 6 n e_1, R_n = n^-2. For sampled r in (R_{n+1}, R_n] checks
// mu(B(0, r)) / mu(B(c_n, r)) <= e^{-1/2} / (1 - 1/(3n)) < 1.
ConstructionReport run_gauss_e_not_ps(const GaussianSpec& spec, int n_max);
// Recursive choice of K_n, r_n and R_{n+1}, with the dominance of the origin
// over the bumps c_m, m <= n, at radius r_n.
ConstructionReport run_gauss_ps_not_s(const GaussianSpec& spec, int n_max);

const std::vector<int>& k_candidates();

}  // namespace modelattice::gaussian
