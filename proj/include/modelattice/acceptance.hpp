#ifndef MODELATTICE_ACCEPTANCE_HPP
#define MODELATTICE_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "modelattice/measure.hpp"

namespace modelattice {

struct AcceptanceOptions {
    std::uint64_t seed = 0;          // 0 means gaussian::default_seed()
    long gaussian_samples = 100000;
    int gaussian_dim = 200;
    int property_probes = 1000;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;
    nlohmann::json data = nlohmann::json::object();

    std::string line() const;  // "PASS  3  lattice laws ..." style
};

inline constexpr int kCriteriaCount = 14;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opt = {});

// ---------------------------------------------------------------------------
// Ball-mass property suites over the shipped one-dimensional measures.

struct NamedMeasure {
    std::string name;
    Measure1D measure;
};

// The seven matrix measures, the suspension measure and the axiom scenario measures.
std::vector<NamedMeasure> shipped_measures();

struct PropertyOutcome {
    std::string property;
    std::string measure;
    long probes = 0;
    long applicable = 0;  // probes where the precondition held
    long failures = 0;
    bool vacuous = false;  // the measure has nothing the property applies to
    std::string first_failure;
    bool ok() const { return failures == 0 && (applicable > 0 || vacuous); }
};

struct PropertySuiteReport {
    std::vector<PropertyOutcome> outcomes;
    bool ok() const;
    nlohmann::json to_json() const;
};

// Left-continuity in r, lower semicontinuity in the centre, the 2 C r bound
// where the density is bounded by C, and dominance of the centre for
// symmetric unimodal components; `probes` draws per property and measure.
PropertySuiteReport run_property_suites(std::uint64_t seed, int probes);

}  // namespace modelattice

#endif  // MODELATTICE_ACCEPTANCE_HPP
