#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "modelattice/measure.hpp"
#include "modelattice/quantifier.hpp"

namespace modelattice {

// A sequence indexed by n = 1, 2, ... Radii (ns) use only the offset; centres
// (as, cs) and comparison points (cp) are limit + offset(n), kept apart so the
// offset survives when it is far below the resolution of the limit.
struct SequenceGen {
    enum class Kind { Geometric, ExpLinear, Explicit, Constant };

    Kind kind = Kind::Constant;
    std::string label;
    double limit = 0.0;
    std::function<double(long)> offset;  // empty for constants

    double value(long n) const { return offset ? offset(n) : 0.0; }
    Point point(long n) const { return Point(limit, value(n)); }
    bool is_constant() const { return !offset; }
    nlohmann::json to_json() const;
};

SequenceGen constant_seq(double value, std::string label = "");
// limit + scale * base^n
SequenceGen geometric_seq(double base, double scale = 1.0, double limit = 0.0, std::string label = "");
// limit + exp(a - b n)
SequenceGen exp_linear_seq(double a, double b, double limit = 0.0, std::string label = "");
SequenceGen explicit_seq(std::string label, std::function<double(long)> f, double limit = 0.0);
// Same offsets around a different limit.
SequenceGen retarget(const SequenceGen& g, double limit, const std::string& prefix = "");

enum class Truth { False, Unknown, True };
std::string truth_name(Truth t);

struct EvalConfig {
    int N = 40;
    int n0 = 0;           // first index of the tail window; 0 means N - ceil(N/4) + 1
    double tol = 1e-6;    // liminf >= 1 - tol counts as holding
    double margin = 1e-3; // liminf <= 1 - margin counts as failing

    int window_start() const;
};

// ---------------------------------------------------------------------------
// Traces

struct TraceTarget {
    std::optional<SequenceGen> seq;  // empty means the supremal ball mass
    static TraceTarget sup() { return {}; }
    static TraceTarget of(SequenceGen g) { return {std::move(g)}; }
};

// values[n - 1] = ratio(mu, u(n), v(n), r(n)) for n = 1..N.
std::vector<double> ratio_trace(const Measure1D& mu, const SequenceGen& u, const TraceTarget& v,
                                const SequenceGen& r, int N);

struct LiminfEstimate {
    double estimate = 0.0;
    double last = 0.0;
    int window_from = 1;  // 1-based
    int window_to = 0;
    std::string trend;    // constant, monotone-increasing, monotone-decreasing, periodic, divergent, oscillating
    int period = 0;       // set when trend == periodic
};

LiminfEstimate liminf_estimate(const std::vector<double>& values, int window);

// ---------------------------------------------------------------------------
// Quantifier evaluation over candidate pools

struct Context {
    std::optional<SequenceGen> ns, as, cp, cs;
};

// Candidate pools; each may depend on the variables bound so far.
struct Pools {
    std::function<std::vector<SequenceGen>(const Context&)> ns, as, cp, cs;
};

struct PoolSpec {
    std::vector<SequenceGen> ns;          // radii
    std::vector<SequenceGen> as_offsets;  // offsets added to the candidate
    std::vector<double> cp;               // comparison points (the candidate itself is dropped)
    std::vector<SequenceGen> cs_offsets;  // offsets added to the comparison point
    // Example-specific additions, given the bound context.
    std::function<std::vector<SequenceGen>(const Context&)> extra_ns, extra_as, extra_cs;
};

// Builds the pools for candidate u. Besides the listed entries the pools
// contain context-derived sequences:
//   as: the constant sequence, u + cs offset (when a cs is bound), u +- r_n (when an ns is bound);
//   ns: |o|, 4|o|, o^4, o^4/4 for a bound as offset o; |o|, |o|/4, o^2 for a bound cs offset o;
//   cs: the constant cp, cp + listed offsets, cp + as offset (when an as is bound).
Pools make_pools(double u, const PoolSpec& spec, const EvalConfig& cfg);

struct LeafResult {
    std::vector<double> window;  // ratio values for n in [n0, N]
    double estimate = 0.0;
    Truth truth = Truth::Unknown;
    std::string description;
};

struct DecisionStep {
    Quantifier quantifier;
    std::string choice;  // label of the decisive candidate, or "all k candidates"
    Truth truth = Truth::Unknown;
};

struct Evaluation {
    Truth truth = Truth::Unknown;
    std::vector<DecisionStep> path;
    std::optional<LeafResult> decisive_leaf;
    long leaves = 0;
    // Outcome per candidate of the outermost quantifier.
    std::vector<std::pair<std::string, Truth>> outer;
};

class ModeEvaluator {
public:
    ModeEvaluator(Measure1D mu, Pools pools, EvalConfig cfg = {});

    Evaluation evaluate(const ModeDefinition& d, double u);
    LeafResult leaf(double u, const Context& ctx);

    const Measure1D& measure() const { return mu_; }
    const EvalConfig& config() const { return cfg_; }
    double sup_mass(double r);

private:
    Truth walk(const ModeDefinition& d, std::size_t i, double u, Context& ctx, Evaluation& ev,
               std::vector<DecisionStep>& path, std::optional<LeafResult>& leaf_out);

    Measure1D mu_;
    Pools pools_;
    EvalConfig cfg_;
    std::map<double, double> sup_cache_;
};

// ---------------------------------------------------------------------------
// Certificates

enum class Claim { IsMode, IsNotMode };
enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

// Closed-form expectation on a single trace, checked for every n in range.
struct TraceCheck {
    enum class Kind { Equals, AtMost, AtLeast };
    std::string label;
    SequenceGen u;
    TraceTarget v;
    SequenceGen r;
    Kind kind = Kind::AtLeast;
    double value = 1.0;
    double tol = 1e-9;
    int n_from = 1;
    int n_to = 40;
};

struct Certificate {
    std::string example;
    ClassId cls = ClassId::s;
    double u = 0.0;
    Claim claim = Claim::IsMode;
    PoolSpec pools;
    std::vector<TraceCheck> expected;
    EvalConfig cfg;
    std::string note;

    nlohmann::json to_json() const;
};

struct TraceCheckResult {
    std::string label;
    bool ok = false;
    int worst_n = 0;
    double worst_value = 0.0;
    std::vector<double> values;
};

struct CheckReport {
    std::string example;
    ClassId cls = ClassId::s;
    double u = 0.0;
    Claim claim = Claim::IsMode;
    Verdict verdict = Verdict::Inconclusive;
    Evaluation evaluation;
    std::vector<TraceCheckResult> checks;
    std::string caveat;

    nlohmann::json to_json() const;
    std::string text() const;
};

CheckReport verify_certificate(const Measure1D& mu, const Certificate& cert);
TraceCheckResult run_trace_check(const Measure1D& mu, const TraceCheck& check);

// ---------------------------------------------------------------------------
// Fixed-radius modes, OM functionals, optimality of the constant sequence

struct FixedRadiusModes {
    double mass = 0.0;
    std::vector<double> points;
    std::vector<std::pair<double, double>> intervals;
};

FixedRadiusModes fixed_radius_modes(const Measure1D& mu, double r);

struct OmCheckReport {
    bool ok = true;
    struct PairResult {
        double u, v, expected, observed;
        bool ok;
    };
    struct OutsideResult {
        double v, u, last;
        bool decreasing, ok;
    };
    std::vector<PairResult> pairs;
    std::vector<OutsideResult> outside;
    nlohmann::json to_json() const;
};

// Pairs in E must converge to exp(I(v) - I(u)) within tol (relative); outside
// points must have ratio(v, u, r_n) decreasing to below outside_tol.
OmCheckReport om_check(const Measure1D& mu, const std::vector<double>& E, const std::vector<double>& I,
                       const std::vector<double>& outside, const SequenceGen& r, int N, double tol,
                       double outside_tol = 2e-2);

struct CasioReport {
    bool ok = true;
    struct Entry {
        std::string as_label, ns_label;
        LiminfEstimate estimate;
        bool ok;
    };
    std::vector<Entry> entries;
    nlohmann::json to_json() const;
};

// liminf ratio(u, u_n, r_n) >= 1 - tol for each as/ns pair.
CasioReport casio_check(const Measure1D& mu, double u, const std::vector<SequenceGen>& as_gens,
                        const std::vector<SequenceGen>& r_gens, int N, double tol);

}  // namespace modelattice
