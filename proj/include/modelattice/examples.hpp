#ifndef MODELATTICE_EXAMPLES_HPP
#define MODELATTICE_EXAMPLES_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "modelattice/measure.hpp"
#include "modelattice/mode_check.hpp"
#include "modelattice/quantifier.hpp"

namespace modelattice {

enum class ExampleId {
    ENotPGS,
    WNotEPGS,
    PSNotGW,
    SuspensionExt,
    PGSNotGS,
    WPNotPWPGS,
    GSNotWP,
    WGAPNotGWAP,
    L2NoOptimalAS,
    GaussENotPS,
    GaussPSNotS
};

std::string example_name(ExampleId id);
std::optional<ExampleId> parse_example(const std::string& name);
const std::vector<ExampleId>& all_examples();
// The seven one-dimensional rows of the separation matrix.
const std::vector<ExampleId>& matrix_examples();
bool is_one_dimensional(ExampleId id);

// Free parameters pinned for reproducibility.
inline constexpr double kSuspensionBeta = 20.0;
inline constexpr double kWpAlpha = 0.3;
inline constexpr double kPgsC = -0.125;

struct ExampleBundle {
    ExampleId id = ExampleId::ENotPGS;
    Measure1D measure;
    double candidate = 0.0;        // designated point of the matrix row
    std::set<ClassId> expected;    // classes for which the candidate is a mode
    PoolSpec pools;
    std::map<ClassId, std::vector<TraceCheck>> checks;  // closed-form expectations per class
    std::string note;
};

// Throws std::invalid_argument for the sequence-space examples.
ExampleBundle build_example(ExampleId id);
Measure1D example_measure(ExampleId id);

// One certificate per class; the claim follows the expected mode set.
std::vector<Certificate> example_certificates(const ExampleBundle& b, const EvalConfig& cfg = {});

struct SeparationRow {
    ExampleId id = ExampleId::ENotPGS;
    double candidate = 0.0;
    std::vector<CheckReport> cells;  // in kAllClasses order
    std::set<ClassId> observed;      // evaluation True
    std::set<ClassId> expected;
    bool matches = false;
    bool downset = false;
    std::vector<std::string> mismatches;
};

struct SeparationMatrix {
    std::vector<SeparationRow> rows;
    bool ok() const;
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

SeparationMatrix run_separation_matrix(const EvalConfig& cfg = {});
SeparationRow run_separation_row(ExampleId id, const EvalConfig& cfg = {});

// Mass of B(u, r) on even-indexed blocks C_j divided by the mass on
// odd-indexed blocks, for the block structure at the origin.
double gamma_ratio(double u, double r);

struct GammaReport {
    long probes = 0;
    double max_gamma = 0.0;
    double max_gamma_u = 0.0, max_gamma_r = 0.0;
    long ratio_probes = 0;
    double max_ratio = 0.0;  // max of R(u, u + 1, r) over probes with r <= 1/16
    bool gamma_ok = false;
    bool ratio_ok = false;
    nlohmann::json to_json() const;
};

// Deterministic grid of u in odd C_k (k <= k_max) and r in (0, min(1/4, 1/2 - u)].
GammaReport gamma_grid(int u_per_block, int r_per_u, int k_max = 9);

struct MergingCase {
    std::string label;
    CheckReport report;
    bool ok = false;
};

struct MergingReport {
    std::vector<MergingCase> cases;
    bool ok() const;
    nlohmann::json to_json() const;
    std::string text() const;
};

MergingReport merging_property_report(const EvalConfig& cfg = {});

// Certificates plus example-specific checks (OM functional, optimality of the
// constant sequence) for the verify command.
struct VerifyResult {
    ExampleId id = ExampleId::ENotPGS;
    std::vector<CheckReport> reports;
    nlohmann::json extra = nlohmann::json::object();
    bool ok = false;
    nlohmann::json to_json() const;
};

VerifyResult verify_example(ExampleId id, const EvalConfig& cfg = {});

}  // namespace modelattice

#endif  // MODELATTICE_EXAMPLES_HPP
