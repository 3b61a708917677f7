#include "modelattice/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/trigamma.hpp>

namespace modelattice {

// ---------------------------------------------------------------------------
// Pieces

namespace {

// Knot index k with r_{k+1} < x <= r_k, for x in (0, r0].
long knot_index(const KnotPiece& k, double x) {
    long i = static_cast<long>(std::floor(std::log(k.r0 / x) / std::log(1.0 / k.q)));
    if (i < 0) i = 0;
    auto rk = [&](long j) { return k.r0 * std::pow(k.q, static_cast<double>(j)); };
    while (i > 0 && x > rk(i)) --i;
    while (x <= rk(i + 1)) ++i;
    return i;
}

double knot_radius(const KnotPiece& k, long i) { return k.r0 * std::pow(k.q, static_cast<double>(i)); }
double knot_value(const KnotPiece& k, long i) { return k.F0 * std::pow(k.s, static_cast<double>(i)); }

double knot_slope(const KnotPiece& k, long i) {
    return (knot_value(k, i) - knot_value(k, i + 1)) / (knot_radius(k, i) - knot_radius(k, i + 1));
}

double trig_density2(const TrigPiece& t, double x) {
    // d/dx of the centred mass F, i.e. twice the one-sided density.
    const double L = std::log(x) - t.theta;
    const double D = 1.0 + t.alpha * std::sin(L);
    const double s2x = std::sqrt(2.0 * x);
    return 1.0 / (s2x * D) - s2x * t.alpha * std::cos(L) / (x * D * D);
}

}  // namespace

double knot_centered_mass(const KnotPiece& k, double r) {
    if (r <= 0.0) return 0.0;
    if (r >= k.r0) return k.F0;
    const long i = knot_index(k, r);
    const double r_hi = knot_radius(k, i), r_lo = knot_radius(k, i + 1);
    const double f_hi = knot_value(k, i), f_lo = knot_value(k, i + 1);
    return f_lo + (f_hi - f_lo) * (r - r_lo) / (r_hi - r_lo);
}

double trig_centered_mass(const TrigPiece& t, double r) {
    if (r <= 0.0) return 0.0;
    if (r >= t.support) return 1.0;
    return std::min(1.0, std::sqrt(2.0 * r) / (1.0 + t.alpha * std::sin(std::log(r) - t.theta)));
}

double trig_support_radius(double alpha, double theta) {
    auto g = [&](double r) { return std::sqrt(2.0 * r) - (1.0 + alpha * std::sin(std::log(r) - theta)); };
    double lo = 0.01, hi = 2.0;
    if (g(lo) >= 0.0 || g(hi) <= 0.0) throw std::invalid_argument("trig singularity: alpha out of range");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return hi;
}

double Piece::integrate(double x0, double x1, double len) const {
    if (mirror) {
        const double t = x0;
        x0 = -x1;
        x1 = -t;
    }
    return std::visit(
        [&](const auto& f) -> double {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ConstPiece>) {
                return f.height * len;
            } else if constexpr (std::is_same_v<F, PowerPiece>) {
                const double q = 1.0 - f.p;
                if (x0 <= 0.0) return f.coeff * std::pow(x1, q) / q;
                return f.coeff / q * std::pow(x0, q) * std::expm1(q * std::log1p(len / x0));
            } else if constexpr (std::is_same_v<F, KnotPiece>) {
                if (x0 <= 0.0) return 0.5 * knot_centered_mass(f, x1);
                const long i0 = knot_index(f, x0);
                const long i1 = knot_index(f, x1);
                if (i0 == i1) return 0.5 * knot_slope(f, i0) * len;
                if (i1 == i0 - 1) {
                    const double knot = knot_radius(f, i0);
                    return 0.5 * (knot_slope(f, i0) * (knot - x0) + knot_slope(f, i1) * (x1 - knot));
                }
                return 0.5 * (knot_centered_mass(f, x1) - knot_centered_mass(f, x0));
            } else if constexpr (std::is_same_v<F, TrigPiece>) {
                if (x0 <= 0.0) return 0.5 * trig_centered_mass(f, x1);
                if (len < 1e-3 * x0) {
                    // Short interval far from the singularity: 3-point Gauss-Legendre.
                    static const double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
                    static const double wts[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
                    double acc = 0.0;
                    for (int i = 0; i < 3; ++i) acc += wts[i] * trig_density2(f, x0 + 0.5 * len * (1.0 + nodes[i]));
                    return 0.25 * len * acc;
                }
                return 0.5 * (trig_centered_mass(f, x1) - trig_centered_mass(f, x0));
            } else {
                return len * f.h * (1.0 - (x0 + 0.5 * len) / f.w);
            }
        },
        fn);
}

// ---------------------------------------------------------------------------
// Components

double Component::raw_mass(double d, double lo, double hi) const {
    if (!(lo < hi)) return 0.0;
    double total = 0.0;
    if (atom && lo < -d && -d < hi) total += 1.0;
    for (const auto& pc : pieces) {
        const double rel_a = pc.a - d;
        const double rel_b = pc.b - d;
        const double s_lo = std::max(lo, rel_a);
        const double s_hi = std::min(hi, rel_b);
        if (!(s_lo < s_hi)) continue;
        const double len = s_hi - s_lo;
        const double x0 = s_lo == rel_a ? pc.a : d + s_lo;
        const double x1 = s_hi == rel_b ? pc.b : d + s_hi;
        total += pc.integrate(std::clamp(x0, pc.a, pc.b), std::clamp(x1, pc.a, pc.b), len);
    }
    return total;
}

std::pair<double, double> Component::local_support() const {
    double lo = atom ? 0.0 : kInf, hi = atom ? 0.0 : -kInf;
    for (const auto& pc : pieces) {
        lo = std::min(lo, pc.a);
        hi = std::max(hi, pc.b);
    }
    return {lo, hi};
}

std::vector<double> Component::breakpoints() const {
    std::vector<double> out{0.0};
    for (const auto& pc : pieces) {
        out.push_back(pc.a);
        out.push_back(pc.b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {
nlohmann::json center_json(const Point& c) {
    if (c.offset == 0.0 && c.fine == 0.0) return c.anchor;
    return nlohmann::json::array({c.anchor, c.offset});
}
}  // namespace

Component atom(Point center, double weight) {
    Component c;
    c.kind = "atom";
    c.center = center;
    c.weight = weight;
    c.atom = true;
    c.params = {{"kind", "atom"}, {"center", center_json(center)}, {"weight", weight}};
    return c;
}

Component piecewise_constant(Point center, std::vector<double> breaks, std::vector<double> heights, double weight) {
    if (breaks.size() != heights.size() + 1) throw std::invalid_argument("piecewise_constant: need one more break than heights");
    Component c;
    c.kind = "piecewise_constant";
    c.center = center;
    c.weight = weight;
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1])) throw std::invalid_argument("piecewise_constant: breaks must increase");
        if (heights[i] < 0.0) throw std::invalid_argument("piecewise_constant: negative height");
        c.pieces.push_back({breaks[i], breaks[i + 1], false, ConstPiece{heights[i]}});
    }
    c.params = {{"kind", "piecewise_constant"}, {"center", center_json(center)}, {"breaks", breaks},
                {"heights", heights}, {"weight", weight}};
    return c;
}

Component uniform_interval(double a, double b, double height) {
    Component c = piecewise_constant(Point(0.5 * (a + b)), {a - 0.5 * (a + b), b - 0.5 * (a + b)}, {height});
    c.kind = "uniform";
    c.params = {{"kind", "uniform"}, {"a", a}, {"b", b}, {"height", height}};
    return c;
}

Component step_block(Point center, double lo, double hi, double height) {
    Component c = piecewise_constant(center, {lo, hi}, {height});
    c.kind = "step_block";
    c.params = {{"kind", "step_block"}, {"center", center_json(center)}, {"lo", lo}, {"hi", hi}, {"height", height}};
    return c;
}

Component power_singularity(Point center, double p, double coeff, double T, bool right_sided, double weight) {
    if (!(p < 1.0) || !(T > 0.0) || !(coeff >= 0.0)) throw std::invalid_argument("power_singularity: need p < 1, T > 0");
    Component c;
    c.kind = "power";
    c.center = center;
    c.weight = weight;
    c.pieces.push_back({0.0, T, false, PowerPiece{p, coeff}});
    if (!right_sided) c.pieces.push_back({-T, 0.0, true, PowerPiece{p, coeff}});
    c.params = {{"kind", "power"},     {"center", center_json(center)}, {"p", p},          {"coeff", coeff},
                {"truncation", T}, {"sided", right_sided ? "right" : "two"}, {"weight", weight}};
    return c;
}

Component knot_singularity(Point center, double r0, double q, double F0, double s, double weight) {
    if (!(q > 0.0 && q < 1.0) || !(s > 0.0 && s < 1.0) || !(r0 > 0.0)) throw std::invalid_argument("knot_singularity: bad parameters");
    Component c;
    c.kind = "knot";
    c.center = center;
    c.weight = weight;
    KnotPiece k{r0, q, F0, s};
    c.pieces.push_back({0.0, r0, false, k});
    c.pieces.push_back({-r0, 0.0, true, k});
    c.params = {{"kind", "knot"}, {"center", center_json(center)}, {"r0", r0}, {"q", q}, {"F0", F0}, {"s", s},
                {"weight", weight}};
    return c;
}

Component trig_singularity(Point center, double alpha, double theta, double weight) {
    if (!(alpha > 0.0 && alpha < 1.0 / 3.0)) throw std::invalid_argument("trig_singularity: alpha must lie in (0, 1/3)");
    Component c;
    c.kind = "trig";
    c.center = center;
    c.weight = weight;
    TrigPiece t{alpha, theta, trig_support_radius(alpha, theta)};
    c.pieces.push_back({0.0, t.support, false, t});
    c.pieces.push_back({-t.support, 0.0, true, t});
    c.params = {{"kind", "trig"}, {"center", center_json(center)}, {"alpha", alpha}, {"theta", theta}, {"weight", weight}};
    return c;
}

Component triangular(Point center, double height, double half_width, double weight) {
    if (!(height > 0.0 && half_width > 0.0)) throw std::invalid_argument("triangular: need positive height and width");
    Component c;
    c.kind = "triangular";
    c.center = center;
    c.weight = weight;
    HatPiece h{height, half_width};
    c.pieces.push_back({0.0, half_width, false, h});
    c.pieces.push_back({-half_width, 0.0, true, h});
    c.params = {{"kind", "triangular"}, {"center", center_json(center)}, {"height", height},
                {"half_width", half_width}, {"weight", weight}};
    return c;
}

// ---------------------------------------------------------------------------
// Measure tree

struct Measure1D::Node {
    std::string label;
    virtual ~Node() = default;
    virtual double interval_mass(const Point& u, double lo, double hi, bool& exact) const = 0;
    virtual void candidates(double r, std::vector<Point>& out) const = 0;
    virtual std::pair<double, double> hull() const = 0;
    virtual nlohmann::json to_json() const = 0;
    virtual NormalizerValue normalizer() const { return {1.0, 0.0}; }
};

namespace {

constexpr long kMaxExplicit = 200000;

void push_component_candidates(const Component& c, double r, std::vector<Point>& out) {
    out.push_back(c.center);
    for (double b : c.breakpoints()) {
        out.emplace_back(c.center.anchor, c.center.offset, c.center.fine + b + r);
        out.emplace_back(c.center.anchor, c.center.offset, c.center.fine + b - r);
    }
}

struct BaseNode final : Measure1D::Node {
    std::vector<Component> comps;
    std::vector<LazyFamily> fams;
    double Z = 1.0;
    double tail_bound = 0.0;
    bool tails_exact = true;

    double unnormalized(const Point& u, double lo, double hi, bool& exact) const {
        double total = 0.0;
        for (const auto& c : comps) total += c.weight * c.raw_mass(u.minus(c.center), lo, hi);
        for (const auto& f : fams) {
            const double rel = u.minus(Point(f.origin));
            IndexRange ir = f.touching(rel + lo, rel + hi);
            const long first = std::max(ir.first, f.k_min);
            if (ir.last - first > kMaxExplicit) throw std::runtime_error("family '" + f.name + "': too many components touch the query");
            const long last = std::min(ir.last, f.k_limit);
            if (last < ir.last) exact = false;
            for (long k = first; k <= last; ++k) {
                const Component c = f.at(k);
                total += c.weight * c.raw_mass(u.minus(c.center), lo, hi);
            }
            if (ir.tail_from) {
                total += f.tail_mass(std::max(*ir.tail_from, f.k_min));
                exact = exact && f.tail_exact;
            }
        }
        return total;
    }

    double interval_mass(const Point& u, double lo, double hi, bool& exact) const override {
        return unnormalized(u, lo, hi, exact) / Z;
    }

    void candidates(double r, std::vector<Point>& out) const override {
        std::vector<std::pair<double, double>> supports;
        for (const auto& c : comps) {
            push_component_candidates(c, r, out);
            auto [a, b] = c.local_support();
            supports.emplace_back(c.center.value() + a, c.center.value() + b);
        }
        for (const auto& f : fams) {
            if (f.sup_candidates) {
                auto extra = f.sup_candidates(r);
                out.insert(out.end(), extra.begin(), extra.end());
            }
            supports.push_back(f.hull);
        }
        // Midpoints between neighbouring supports.
        std::sort(supports.begin(), supports.end());
        for (std::size_t i = 0; i + 1 < supports.size(); ++i) {
            const double gap_lo = supports[i].second, gap_hi = supports[i + 1].first;
            if (gap_hi > gap_lo) out.emplace_back(0.5 * (gap_lo + gap_hi));
        }
    }

    std::pair<double, double> hull() const override {
        double lo = kInf, hi = -kInf;
        for (const auto& c : comps) {
            auto [a, b] = c.local_support();
            lo = std::min(lo, c.center.value() + a);
            hi = std::max(hi, c.center.value() + b);
        }
        for (const auto& f : fams) {
            lo = std::min(lo, f.hull.first);
            hi = std::max(hi, f.hull.second);
        }
        return {lo, hi};
    }

    nlohmann::json to_json() const override {
        nlohmann::json j;
        j["components"] = nlohmann::json::array();
        for (const auto& c : comps) j["components"].push_back(c.params);
        j["lazy_families"] = nlohmann::json::array();
        for (const auto& f : fams) j["lazy_families"].push_back(f.params);
        j["normalizer"] = Z;
        if (!label.empty()) j["label"] = label;
        return j;
    }

    NormalizerValue normalizer() const override { return {Z, tail_bound}; }
};

struct ShiftNode final : Measure1D::Node {
    double b = 0.0;
    std::shared_ptr<const Measure1D::Node> child;

    double interval_mass(const Point& u, double lo, double hi, bool& exact) const override {
        return child->interval_mass(u.shifted(-b), lo, hi, exact);
    }
    void candidates(double r, std::vector<Point>& out) const override {
        std::vector<Point> tmp;
        child->candidates(r, tmp);
        for (auto& p : tmp) out.push_back(p.shifted(b));
    }
    std::pair<double, double> hull() const override {
        auto [lo, hi] = child->hull();
        return {lo + b, hi + b};
    }
    nlohmann::json to_json() const override {
        return {{"transform", "translate"}, {"b", b}, {"measure", child->to_json()}};
    }
};

struct RestrictNode final : Measure1D::Node {
    std::vector<std::pair<double, double>> intervals;
    std::shared_ptr<const Measure1D::Node> child;
    double mass_A = 1.0;

    double interval_mass(const Point& u, double lo, double hi, bool& exact) const override {
        double total = 0.0;
        for (auto [a, b] : intervals) {
            const double ra = std::isinf(a) ? a : Point(a).minus(u);
            const double rb = std::isinf(b) ? b : Point(b).minus(u);
            const double s_lo = std::max(lo, ra), s_hi = std::min(hi, rb);
            if (s_lo < s_hi) total += child->interval_mass(u, s_lo, s_hi, exact);
        }
        return total / mass_A;
    }
    void candidates(double r, std::vector<Point>& out) const override {
        std::vector<Point> tmp;
        child->candidates(r, tmp);
        for (auto& p : tmp) {
            const double x = p.value();
            for (auto [a, b] : intervals)
                if (x > a - r && x < b + r) {
                    out.push_back(p);
                    break;
                }
        }
        for (auto [a, b] : intervals) {
            for (double e : {a, b})
                if (std::isfinite(e)) {
                    out.emplace_back(e + r);
                    out.emplace_back(e - r);
                }
        }
    }
    std::pair<double, double> hull() const override {
        auto [lo, hi] = child->hull();
        double ilo = kInf, ihi = -kInf;
        for (auto [a, b] : intervals) {
            ilo = std::min(ilo, a);
            ihi = std::max(ihi, b);
        }
        return {std::max(lo, ilo), std::min(hi, ihi)};
    }
    nlohmann::json to_json() const override {
        nlohmann::json iv = nlohmann::json::array();
        for (auto [a, b] : intervals) {
            auto enc = [](double x) -> nlohmann::json {
                if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
                return x;
            };
            iv.push_back({enc(a), enc(b)});
        }
        return {{"transform", "restrict"}, {"intervals", iv}, {"measure", child->to_json()}};
    }
};

struct MixNode final : Measure1D::Node {
    double alpha = 0.5;
    std::shared_ptr<const Measure1D::Node> first, second;

    double interval_mass(const Point& u, double lo, double hi, bool& exact) const override {
        double m = 0.0;
        if (alpha > 0.0) m += alpha * first->interval_mass(u, lo, hi, exact);
        if (alpha < 1.0) m += (1.0 - alpha) * second->interval_mass(u, lo, hi, exact);
        return m;
    }
    void candidates(double r, std::vector<Point>& out) const override {
        first->candidates(r, out);
        second->candidates(r, out);
    }
    std::pair<double, double> hull() const override {
        auto [a, b] = first->hull();
        auto [c, d] = second->hull();
        return {std::min(a, c), std::max(b, d)};
    }
    nlohmann::json to_json() const override {
        return {{"transform", "convex_combine"}, {"alpha", alpha}, {"first", first->to_json()},
                {"second", second->to_json()}};
    }
};

}  // namespace

Measure1D Measure1D::from_components(std::vector<Component> comps, std::vector<LazyFamily> families,
                                     double normalizer, std::string label) {
    auto node = std::make_shared<BaseNode>();
    node->label = std::move(label);
    node->comps = std::move(comps);
    node->fams = std::move(families);
    if (normalizer > 0.0) {
        node->Z = normalizer;
    } else {
        double z = 0.0;
        for (const auto& c : node->comps) z += c.mass();
        for (const auto& f : node->fams) {
            z += f.tail_mass(f.k_min);
            if (!f.tail_exact) node->tails_exact = false;
        }
        if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("measure has no finite positive mass");
        node->Z = z;
    }
    return Measure1D(std::move(node));
}

Measure1D Measure1D::translate(double b) const {
    auto node = std::make_shared<ShiftNode>();
    node->b = b;
    node->child = node_;
    node->label = node_->label;
    return Measure1D(std::move(node));
}

Measure1D Measure1D::restrict(std::vector<std::pair<double, double>> intervals) const {
    auto node = std::make_shared<RestrictNode>();
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 0; i + 1 < intervals.size(); ++i)
        if (intervals[i].second > intervals[i + 1].first) throw std::invalid_argument("restrict: intervals overlap");
    node->intervals = intervals;
    node->child = node_;
    node->label = node_->label;
    bool exact = true;
    double m = 0.0;
    for (auto [a, b] : intervals) {
        if (!(a < b)) throw std::invalid_argument("restrict: empty interval");
        m += node_->interval_mass(Point(0.0), a, b, exact);
    }
    if (!(m > 0.0)) throw std::invalid_argument("restrict: set has zero mass");
    node->mass_A = m;
    return Measure1D(std::move(node));
}

Measure1D Measure1D::convex_combine(double alpha, const Measure1D& mu, const Measure1D& nu) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("convex_combine: alpha must lie in [0, 1]");
    auto node = std::make_shared<MixNode>();
    node->alpha = alpha;
    node->first = mu.node_;
    node->second = nu.node_;
    node->label = mu.label();
    return Measure1D(std::move(node));
}

double Measure1D::interval_mass(const Point& u, double lo, double hi) const {
    bool exact = true;
    return node_->interval_mass(u, lo, hi, exact);
}

BallMassValue Measure1D::ball_mass(const Point& u, double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("ball_mass: radius must be positive");
    BallMassValue v;
    v.value = node_->interval_mass(u, -r, r, v.exact);
    return v;
}

std::vector<Point> Measure1D::sup_candidates(double r) const {
    std::vector<Point> out;
    node_->candidates(r, out);
    return out;
}

SupResult Measure1D::sup_ball_mass(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("sup_ball_mass: radius must be positive");
    auto cands = sup_candidates(r);
    std::vector<std::pair<double, Point>> scored;
    scored.reserve(cands.size());
    for (const auto& p : cands) scored.emplace_back(ball_mass(p, r).value, p);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    SupResult res;
    if (scored.empty()) return res;
    res.mass = scored.front().first;

    // At coarse radii a ball can straddle two pieces with non-constant densities
    // and peak strictly between candidates; polish the leaders by golden section.
    if (r > 1e-6) {
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        const std::size_t lead = std::min<std::size_t>(4, scored.size());
        for (std::size_t i = 0; i < lead; ++i) {
            const double t0 = scored[i].second.value();
            double a = t0 - r, b = t0 + r;
            auto m = [&](double t) { return ball_mass(Point(t), r).value; };
            double c = b - g * (b - a), d = a + g * (b - a);
            double mc = m(c), md = m(d);
            for (int it = 0; it < 60; ++it) {
                if (mc > md) {
                    b = d;
                    d = c;
                    md = mc;
                    c = b - g * (b - a);
                    mc = m(c);
                } else {
                    a = c;
                    c = d;
                    mc = md;
                    d = a + g * (b - a);
                    md = m(d);
                }
            }
            const double t = 0.5 * (a + b);
            const double mt = m(t);
            if (mt > res.mass * (1.0 + 1e-13)) {
                res.mass = mt;
                scored.emplace_back(mt, Point(t));
            }
        }
        std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    }
    for (const auto& [m, p] : scored) {
        if (m >= res.mass * (1.0 - 1e-12)) res.argmax.push_back(p);
    }
    return res;
}

NormalizerValue Measure1D::normalizer() const { return node_->normalizer(); }

double Measure1D::total_mass() const { return interval_mass(Point(0.0), -kInf, kInf); }

std::pair<double, double> Measure1D::support_hull() const { return node_->hull(); }

const std::string& Measure1D::label() const { return node_->label; }

nlohmann::json Measure1D::to_json() const { return node_->to_json(); }

double mass_ratio(double num, double den) {
    if (den == 0.0) return num == 0.0 ? 1.0 : kInf;
    return num / den;
}

double ratio(const Measure1D& mu, const Target& u, const Target& v, double r) {
    if (std::holds_alternative<Sup>(u) && std::holds_alternative<Sup>(v))
        throw std::invalid_argument("ratio: at most one side may be the sup");
    auto mass = [&](const Target& t) {
        if (std::holds_alternative<Sup>(t)) return mu.sup_ball_mass(r).mass;
        return mu.ball_mass(std::get<Point>(t), r).value;
    };
    return mass_ratio(mass(u), mass(v));
}

// ---------------------------------------------------------------------------
// Family templates

namespace families {

namespace {

double log2_safe(double x) { return std::log2(std::clamp(x, 1e-300, 1e300)); }
double clamp_coord(double x) { return std::clamp(x, -1e12, 1e12); }
constexpr double kFar = 1e11;

}  // namespace

LazyFamily hat_train() {
    LazyFamily f;
    f.name = "hat_train";
    f.params = {{"template", "hat_train"}};
    f.k_min = 1;
    f.at = [](long k) {
        const double kd = static_cast<double>(k);
        return triangular(Point(kd), 2.0 * kd, 0.5 / (kd * kd * kd));
    };
    f.mass = [](long k) { return 1.0 / (static_cast<double>(k) * static_cast<double>(k)); };
    f.tail_mass = [](long K) { return boost::math::trigamma(static_cast<double>(K)); };
    f.touching = [](double lo, double hi) {
        IndexRange ir;
        ir.first = std::max<long>(1, static_cast<long>(std::floor(clamp_coord(lo) - 0.5)));
        if (hi > kFar) {
            ir.tail_from = ir.first + 2;
            ir.last = ir.first + 1;
        } else {
            ir.last = static_cast<long>(std::ceil(hi + 0.5));
        }
        return ir;
    };
    f.sup_candidates = [](double r) {
        std::vector<Point> out;
        const long kr = static_cast<long>(std::ceil(std::pow(2.0 * r, -1.0 / 3.0)));
        auto add = [&](long k) {
            if (k < 1) return;
            const double kd = static_cast<double>(k), w = 0.5 / (kd * kd * kd);
            for (double t : {0.0, w + r, w - r, -w + r, -w - r}) out.emplace_back(kd, t);
        };
        for (long k = 1; k <= 3; ++k) add(k);
        for (long k = kr - 3; k <= kr + 3; ++k) add(k);
        return out;
    };
    f.hull = {0.0, kInf};
    return f;
}

LazyFamily one_sided_train() {
    LazyFamily f;
    f.name = "one_sided_train";
    f.params = {{"template", "one_sided_train"}};
    f.k_min = 1;
    auto weight = [](long k) { return 2.0 * (1.0 - 1.0 / (4.0 * static_cast<double>(k))); };
    auto trunc = [](long k) { return std::ldexp(1.0, static_cast<int>(-k)); };
    f.at = [=](long k) { return power_singularity(Point(static_cast<double>(k)), 0.25, 0.75, trunc(k), true, weight(k)); };
    f.mass = [=](long k) { return weight(k) * std::pow(trunc(k), 0.75); };
    f.tail_mass = [=](long K) {
        double s = 0.0;
        for (long k = K; k < K + 2000; ++k) {
            const double t = weight(k) * std::pow(trunc(k), 0.75);
            s += t;
            if (t < 1e-20 * s) break;
        }
        return s;
    };
    f.touching = [](double lo, double hi) {
        IndexRange ir;
        ir.first = std::max<long>(1, static_cast<long>(std::floor(clamp_coord(lo))) - 1);
        if (hi > kFar) {
            ir.tail_from = ir.first + 2;
            ir.last = ir.first + 1;
        } else {
            ir.last = static_cast<long>(std::floor(hi)) + 1;
        }
        return ir;
    };
    f.sup_candidates = [=](double r) {
        std::vector<Point> out;
        const long kmax = std::min<long>(200, static_cast<long>(std::ceil(-log2_safe(r))) + 4);
        for (long k = 1; k <= kmax; ++k) {
            const double kd = static_cast<double>(k), T = trunc(k);
            for (double t : {0.0, r, T - r, T + r, 0.5 * T}) out.emplace_back(kd, t);
        }
        return out;
    };
    f.hull = {1.0, kInf};
    return f;
}

LazyFamily step_train(double origin) {
    LazyFamily f;
    f.name = "step_train";
    f.k_limit = 260;
    f.origin = origin;
    f.params = {{"template", "step_train"}, {"origin", origin}};
    f.k_min = 1;
    auto R = [](long k) { return std::ldexp(1.0, static_cast<int>(-4 * k)); };
    auto c = [](long k) { return std::ldexp(1.0, static_cast<int>(-k)); };
    f.at = [=](long k) {
        return step_block(Point(origin, c(k)), -R(k), R(k), std::ldexp(1.0, static_cast<int>(2 * k)));
    };
    f.mass = [](long k) { return 2.0 * std::ldexp(1.0, static_cast<int>(-2 * k)); };
    f.tail_mass = [](long K) { return 2.0 * std::ldexp(1.0, static_cast<int>(-2 * K)) * 4.0 / 3.0; };
    f.touching = [=](double lo, double hi) {
        IndexRange ir;
        const double a = lo, b = hi;
        if (b <= 0.0 || a >= 0.6) return ir;
        ir.first = std::max<long>(1, static_cast<long>(std::floor(-log2_safe(b))) - 1);
        if (a <= 0.0) {
            // Blocks k with 2^-k + R_k < b are inside; 1.1 * 2^-k bounds the right end.
            long K = static_cast<long>(std::ceil(-log2_safe(b / 1.1))) + 1;
            K = std::max(K, ir.first);
            ir.tail_from = K;
            ir.last = K - 1;
        } else {
            ir.last = static_cast<long>(std::ceil(-log2_safe(a))) + 1;
        }
        return ir;
    };
    f.sup_candidates = [=](double r) {
        std::vector<Point> out;
        const long ks = static_cast<long>(std::floor(-log2_safe(r) / 4.0));
        auto add = [&](long k) {
            if (k < 1 || k > 250) return;
            for (double t : {0.0, R(k) + r, R(k) - r, -R(k) + r, -R(k) - r}) out.emplace_back(origin, c(k), t);
        };
        for (long k = 1; k <= 3; ++k) add(k);
        for (long k = ks - 3; k <= ks + 3; ++k) add(k);
        return out;
    };
    f.hull = {origin, origin + 0.6};
    return f;
}

namespace {

struct WgapGeometry {
    static double R(long k) { return std::ldexp(1.0, static_cast<int>(-4 * k)); }
    static double c(long k) { return std::ldexp(1.0, static_cast<int>(-k)); }
    // Ends of C_k relative to the centre 2^-k.
    static double left(long k) { return -std::ldexp(1.0, static_cast<int>(-k - 2)) - 0.5 * R(k) + 0.5 * R(k + 1); }
    static double right(long k) {
        if (k == 1) return 0.25;
        return std::ldexp(1.0, static_cast<int>(-k - 1)) - 0.5 * R(k - 1) + 0.5 * R(k);
    }
    static double beta(long k) {
        const double lenB = (right(k) - left(k)) - 2.0 * R(k);
        return std::ldexp(1.0, static_cast<int>(-2 * k)) / lenB;
    }
};

}  // namespace

LazyFamily wgap_blocks(double origin, double weight_odd, double weight_even) {
    using G = WgapGeometry;
    LazyFamily f;
    f.name = "wgap_blocks";
    f.k_limit = 260;
    f.origin = origin;
    f.params = {{"template", "wgap_blocks"}, {"origin", origin}, {"weight_odd", weight_odd}, {"weight_even", weight_even}};
    f.k_min = 1;
    auto w = [=](long k) { return (k % 2 != 0) ? weight_odd : weight_even; };
    f.at = [=](long k) {
        const double b = G::beta(k);
        Component comp = piecewise_constant(Point(origin, G::c(k)), {G::left(k), -G::R(k), G::R(k), G::right(k)},
                                            {b, std::ldexp(1.0, static_cast<int>(2 * k)), b}, w(k));
        comp.kind = "wgap_block";
        return comp;
    };
    f.mass = [=](long k) { return w(k) * 3.0 * std::ldexp(1.0, static_cast<int>(-2 * k)); };
    f.tail_mass = [=](long K) {
        const double q = std::ldexp(1.0, static_cast<int>(-2 * K));
        return 3.0 * q * (w(K) + 0.25 * w(K + 1)) / (1.0 - 1.0 / 16.0);
    };
    f.touching = [=](double lo, double hi) {
        IndexRange ir;
        const double a = lo, b = hi;
        if (b <= 0.0 || a >= 0.75) return ir;
        ir.first = std::max<long>(1, static_cast<long>(std::floor(-log2_safe(b))) - 2);
        if (a <= 0.0) {
            long K = static_cast<long>(std::ceil(-log2_safe(b / 1.5))) + 1;
            K = std::max(K, ir.first);
            ir.tail_from = K;
            ir.last = K - 1;
        } else {
            ir.last = static_cast<long>(std::ceil(-log2_safe(a))) + 2;
        }
        return ir;
    };
    f.sup_candidates = [=](double r) {
        std::vector<Point> out;
        const long ks = static_cast<long>(std::floor(-log2_safe(r) / 4.0));
        auto add = [&](long k) {
            if (k < 1 || k > 250) return;
            for (double e : {0.0, G::R(k), -G::R(k), G::left(k), G::right(k)}) {
                out.emplace_back(origin, G::c(k), e + r);
                out.emplace_back(origin, G::c(k), e - r);
            }
            out.emplace_back(origin, G::c(k), 0.0);
        };
        for (long k = 1; k <= 3; ++k) add(k);
        for (long k = ks - 3; k <= ks + 3; ++k) add(k);
        return out;
    };
    f.hull = {origin, origin + 0.75};
    return f;
}

LazyFamily knot_train(double beta, bool even) {
    LazyFamily f;
    f.name = "knot_train";
    f.k_limit = 500;
    f.params = {{"template", "knot_train"}, {"beta", beta}, {"even", even}};
    f.k_min = 1;
    const double sign = even ? 1.0 : -1.0;
    const double odd_scale = even ? 1.0 : 1.0 / std::sqrt(2.0);
    auto w = [=](long k) { return 3.0 / (2.0 * std::sqrt(2.0)) - std::pow(beta, -static_cast<double>(k)); };
    auto r0 = [=](long k) { return even ? std::ldexp(1.0, static_cast<int>(-2 * k)) : std::ldexp(1.0, static_cast<int>(-2 * k - 1)); };
    auto F0 = [=](long k) { return std::ldexp(1.0, static_cast<int>(-k)) * odd_scale; };
    f.at = [=](long k) { return knot_singularity(Point(sign * static_cast<double>(k + 2)), r0(k), 0.25, F0(k), 0.5, w(k)); };
    f.mass = [=](long k) { return w(k) * F0(k); };
    f.tail_mass = [=](long K) {
        const double Kd = static_cast<double>(K);
        const double a = 3.0 / (2.0 * std::sqrt(2.0)) * std::pow(0.5, Kd) * 2.0;
        const double b = std::pow(2.0 * beta, -Kd) / (1.0 - 1.0 / (2.0 * beta));
        return odd_scale * (a - b);
    };
    f.touching = [=](double lo, double hi) {
        IndexRange ir;
        double a = sign * lo, b = sign * hi;
        if (a > b) std::swap(a, b);
        if (b < 2.5) return ir;
        ir.first = std::max<long>(1, static_cast<long>(std::floor(clamp_coord(a))) - 3);
        if (b > kFar) {
            ir.tail_from = ir.first + 4;
            ir.last = ir.first + 3;
        } else {
            ir.last = static_cast<long>(std::ceil(b)) - 1;
        }
        return ir;
    };
    f.sup_candidates = [=](double r) {
        std::vector<Point> out;
        const long ks = static_cast<long>(std::floor(-std::log(std::max(r, 1e-300)) / std::log(4.0)));
        for (long k = 1; k <= 3; ++k) out.emplace_back(sign * static_cast<double>(k + 2));
        for (long k = std::max<long>(1, ks - 2); k <= ks + 2; ++k) out.emplace_back(sign * static_cast<double>(k + 2));
        return out;
    };
    f.hull = even ? std::pair<double, double>{2.5, kInf} : std::pair<double, double>{-kInf, -2.5};
    return f;
}

}  // namespace families

}  // namespace modelattice
