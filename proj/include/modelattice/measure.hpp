#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace modelattice {

// A real number stored as a sum of three doubles of decreasing magnitude.
// Sequences converging to a point keep the limit in `anchor` and the vanishing
// displacement in `offset`, so that a ball of radius 4^-160 around 1 + 2^-80
// is still resolved exactly. `fine` carries sub-offset displacements such as
// a radius added to a local breakpoint.
struct Point {
    double anchor = 0.0;
    double offset = 0.0;
    double fine = 0.0;

    constexpr Point() = default;
    constexpr Point(double a) : anchor(a) {}  // NOLINT(google-explicit-constructor)
    constexpr Point(double a, double o, double f = 0.0) : anchor(a), offset(o), fine(f) {}

    double value() const { return anchor + offset + fine; }
    // this - other, evaluated part by part.
    double minus(const Point& other) const {
        return (anchor - other.anchor) + (offset - other.offset) + (fine - other.fine);
    }
    Point shifted(double b) const { return {anchor + b, offset, fine}; }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Density pieces in coordinates local to a component centre. Each piece knows
// how to integrate itself over [x0, x1] when the length x1 - x0 is supplied
// separately (it is computed without cancellation by the caller).
struct ConstPiece { double height; };
// coeff * x^{-p} for x in (0, T]; p < 1.
struct PowerPiece { double p; double coeff; };
// Piecewise linear centred mass F with knots r_k = r0 q^k, F(r_k) = F0 s^k.
// The piece integrates F/2 (one side of a symmetric law).
struct KnotPiece { double r0, q, F0, s; };
// Centred mass F(r) = min(1, sqrt(2r) / (1 + alpha sin(log r - theta))).
struct TrigPiece { double alpha, theta, support; };
// Density h (1 - x / w) on [0, w].
struct HatPiece { double h, w; };

using PieceFn = std::variant<ConstPiece, PowerPiece, KnotPiece, TrigPiece, HatPiece>;

struct Piece {
    double a = 0.0;  // local support [a, b]
    double b = 0.0;
    // Mirrored pieces describe g(-x) for the left half of a symmetric law;
    // the integrable singularity always sits at local 0.
    bool mirror = false;
    PieceFn fn;

    double integrate(double x0, double x1, double len) const;
};

// Centred mass function of a single-piece symmetric law, used in reports.
double knot_centered_mass(const KnotPiece& k, double r);
double trig_centered_mass(const TrigPiece& t, double r);
double trig_support_radius(double alpha, double theta);

struct Component {
    std::string kind;
    Point center;
    double weight = 1.0;
    bool atom = false;
    std::vector<Piece> pieces;
    nlohmann::json params;  // as parsed or constructed, for serialization

    // Unweighted mass of the open interval (d + lo, d + hi), d = local coordinate of
    // the reference point. lo < hi are relative to that point.
    double raw_mass(double d, double lo, double hi) const;
    double mass() const { return weight * raw_mass(0.0, -kInf, kInf); }
    double centered_mass(double r) const { return weight * raw_mass(0.0, -r, r); }
    std::pair<double, double> local_support() const;
    // Local coordinates where the density changes formula.
    std::vector<double> breakpoints() const;
};

// Factories. Centres may be given as Points to keep offsets exact.
Component atom(Point center, double weight = 1.0);
Component uniform_interval(double a, double b, double height);
Component step_block(Point center, double lo, double hi, double height);
Component piecewise_constant(Point center, std::vector<double> breaks, std::vector<double> heights,
                             double weight = 1.0);
// Density coeff |x|^{-p} on |x| <= T (two sided) or on (0, T] (right sided).
Component power_singularity(Point center, double p, double coeff, double T, bool right_sided, double weight = 1.0);
Component knot_singularity(Point center, double r0, double q, double F0, double s, double weight = 1.0);
Component trig_singularity(Point center, double alpha, double theta, double weight = 1.0);
Component triangular(Point center, double height, double half_width, double weight = 1.0);

// A countable indexed family k = k_min, k_min + 1, ... of components.
struct IndexRange {
    long first = 0;
    long last = -1;                // explicit components first..last
    std::optional<long> tail_from;  // all k >= tail_from lie inside the query interval
};

struct LazyFamily {
    std::string name;
    nlohmann::json params;
    long k_min = 1;
    // Members above this index have geometry below double resolution; they are
    // skipped in explicit sums (their mass is below tail_mass(k_limit + 1)).
    long k_limit = std::numeric_limits<long>::max();
    std::function<Component(long)> at;
    std::function<double(long)> mass;
    // Sum of masses of k >= K, closed form or certified bound.
    std::function<double(long)> tail_mass;
    bool tail_exact = true;
    // Accumulation point of the family; touching() works relative to it so
    // that tiny offsets from the origin are not lost.
    double origin = 0.0;
    // Indices that may intersect the open interval origin + (lo, hi).
    std::function<IndexRange(double lo, double hi)> touching;
    // Extra candidate centres for the sup search at radius r.
    std::function<std::vector<Point>(double r)> sup_candidates;
    // Absolute interval containing every member's support.
    std::pair<double, double> hull{0.0, 0.0};
};

struct BallMassValue {
    double value = 0.0;
    bool exact = true;
};

struct SupResult {
    double mass = 0.0;
    std::vector<Point> argmax;
};

struct NormalizerValue {
    double Z = 0.0;
    double tail_bound = 0.0;
};

class Measure1D {
public:
    struct Node;

    Measure1D() = default;

    // Builds a base measure. normalizer <= 0 means "compute".
    static Measure1D from_components(std::vector<Component> comps, std::vector<LazyFamily> families = {},
                                     double normalizer = 0.0, std::string label = "");

    Measure1D translate(double b) const;
    // Restriction to a finite union of open intervals, renormalized.
    Measure1D restrict(std::vector<std::pair<double, double>> intervals) const;
    static Measure1D convex_combine(double alpha, const Measure1D& mu, const Measure1D& nu);

    // Mass of the open interval (u + lo, u + hi).
    double interval_mass(const Point& u, double lo, double hi) const;
    BallMassValue ball_mass(const Point& u, double r) const;
    SupResult sup_ball_mass(double r) const;

    // Component centres, support ends and breakpoints (absolute) used by the sup
    // search; families contribute their own candidates for the radius.
    std::vector<Point> sup_candidates(double r) const;

    NormalizerValue normalizer() const;
    double total_mass() const;

    // Absolute hull containing all mass (may be long for countable families).
    std::pair<double, double> support_hull() const;

    const std::string& label() const;
    nlohmann::json to_json() const;

    bool valid() const { return static_cast<bool>(node_); }

private:
    explicit Measure1D(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Ratio of ball masses with the conventions 0/0 = 1 and c/0 = inf.
double mass_ratio(double num, double den);

// Comparison target in ratio queries: a point or the sup over all centres.
struct Sup {};
using Target = std::variant<Point, Sup>;

double ratio(const Measure1D& mu, const Target& u, const Target& v, double r);

// JSON measure documents (see README for the schema).
Measure1D measure_from_json(const nlohmann::json& doc);
Component component_from_json(const nlohmann::json& j);
LazyFamily family_from_json(const nlohmann::json& j);

// Named family templates used by the example builders and by JSON documents.
namespace families {
// Hats at integer k >= 1 with height 2k and half width k^-3 / 2.
LazyFamily hat_train();
// Right-sided (3/4) x^{-1/4} pieces at k >= 1 truncated at 2^-k, weight 2(1 - 1/(4k)).
LazyFamily one_sided_train();
// Step blocks 4^k on [2^-k - R_k, 2^-k + R_k], R_k = 4^{-2k}, anchored at `origin`.
LazyFamily step_train(double origin = 0.0);
// Blocks rho_k on C_k anchored at `origin` with weight w(k) (weights by parity).
LazyFamily wgap_blocks(double origin, double weight_odd, double weight_even);
// Truncated knot singularities at +-(k+2) with weights 3/(2 sqrt 2) - beta^-k.
LazyFamily knot_train(double beta, bool even_on_right);
}  // namespace families

}  // namespace modelattice
