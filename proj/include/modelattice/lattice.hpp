#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modelattice/quantifier.hpp"

namespace modelattice {

// Finite poset given by its nodes and the covering (Hasse) edges.
// An edge (a, b) means a lies above b: every a-mode is a b-mode.
class ClassLattice {
public:
    ClassLattice(std::vector<std::string> names, std::vector<std::pair<int, int>> covers,
                 std::vector<std::vector<std::string>> members = {});

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::vector<std::string>>& members() const { return members_; }
    int index_of(const std::string& name) const;  // throws std::out_of_range

    // Hasse edges recomputed from the order (redundant input edges dropped).
    std::vector<std::pair<int, int>> hasse() const;

    // x <= y in the lattice order, i.e. x is reachable downward from y.
    bool below(int x, int y) const { return leq_[static_cast<std::size_t>(x * size() + y)]; }

    std::optional<int> meet(int x, int y) const;
    std::optional<int> join(int x, int y) const;
    std::optional<int> top() const;
    std::optional<int> bottom() const;

    std::string to_dot(const std::string& graph_name = "modes") const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<std::string>> members_;
    std::vector<std::pair<int, int>> input_edges_;
    std::vector<char> leq_;
};

struct LawViolation {
    std::string law;
    std::vector<std::string> witnesses;
};

struct LatticeReport {
    bool partial_order = true;
    bool lattice = true;
    bool complete = true;
    bool distributive = true;
    long triples_checked = 0;
    std::vector<LawViolation> violations;

    bool ok() const { return partial_order && lattice && complete && distributive; }
};

LatticeReport validate_lattice(const ClassLattice& L);

// The ten-class implication lattice with its figure edges.
ClassLattice build_main_lattice();

struct EdgeDerivation {
    std::string from;
    std::string to;
    bool derived = false;  // false means the edge is carried as data only
    std::vector<std::string> chain;
};

// Tries to derive each main-lattice edge by sound syntactic weakenings:
// forall ns to exists ns, inserting exists as, replacing the sup comparison by
// a universal comparison point (and sequence), dropping a universal cs,
// moving an existential past a universal to its right, and same-polarity
// permutations.
std::vector<EdgeDerivation> derive_main_edges();

// All downward-closed subsets, each as a sorted list of node indices.
std::vector<std::vector<int>> downsets(const ClassLattice& L);

// Ordered pairs (x, y), x != y, with x not below y. A family separates the
// pair when some member contains y but not x.
std::vector<std::pair<int, int>> separable_pairs(const ClassLattice& L);
bool separates(const ClassLattice& L, const std::vector<std::vector<int>>& family);

struct SeparatingFamily {
    int size = 0;
    std::vector<std::vector<int>> family;
    // Every smaller family size was exhausted without success.
    std::vector<int> sizes_ruled_out;
};

SeparatingFamily min_separating_family(const ClassLattice& L);

// Quotient by a partition given as lists of node names. Throws
// std::invalid_argument for an invalid partition or when the induced relation
// is not antisymmetric. Blocks are named after their first member.
ClassLattice quotient_lattice(const ClassLattice& L, const std::vector<std::vector<std::string>>& partition);

struct QuotientScenario {
    std::string name;
    std::vector<std::vector<std::string>> partition;
    int expected_nodes = 0;
    // Covers of the scenario's figure, by block name (first member).
    std::vector<std::pair<std::string, std::string>> expected_covers;
};

const std::vector<QuotientScenario>& quotient_scenarios();
const QuotientScenario& find_scenario(const std::string& name);  // throws std::invalid_argument

struct QuotientCheck {
    std::string name;
    int nodes = 0;
    bool lattice_ok = false;    // partial order with all meets and joins
    bool distributive = false;  // reported, not required
    bool nodes_match = false;
    bool covers_match = false;
    std::string error;

    bool ok() const { return lattice_ok && nodes_match && covers_match && error.empty(); }
};

std::vector<QuotientCheck> check_all_quotients();

}  // namespace modelattice
