#include "modelattice/mode_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace modelattice {

namespace {

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string around(double limit, const std::string& tail) {
    if (limit == 0.0) return tail;
    if (!tail.empty() && tail[0] == '-') return num(limit) + tail;
    return num(limit) + "+" + tail;
}

const char* var_label(Var v) {
    switch (v) {
        case Var::ns: return "ns";
        case Var::as: return "as";
        case Var::cp: return "cp";
        case Var::cs: return "cs";
    }
    return "?";
}

std::string kind_name(SequenceGen::Kind k) {
    switch (k) {
        case SequenceGen::Kind::Geometric: return "geometric";
        case SequenceGen::Kind::ExpLinear: return "exp_linear";
        case SequenceGen::Kind::Explicit: return "explicit";
        case SequenceGen::Kind::Constant: return "constant";
    }
    return "?";
}

}  // namespace

nlohmann::json SequenceGen::to_json() const {
    return {{"kind", kind_name(kind)}, {"label", label}, {"limit", limit}};
}

SequenceGen constant_seq(double value, std::string label) {
    SequenceGen g;
    g.kind = SequenceGen::Kind::Constant;
    g.limit = value;
    g.label = label.empty() ? num(value) : std::move(label);
    return g;
}

SequenceGen geometric_seq(double base, double scale, double limit, std::string label) {
    if (!(std::fabs(base) < 1.0)) throw std::invalid_argument("geometric_seq: |base| must be below 1");
    SequenceGen g;
    g.kind = SequenceGen::Kind::Geometric;
    g.limit = limit;
    g.offset = [=](long n) { return scale * std::pow(base, static_cast<double>(n)); };
    if (label.empty()) label = (scale == 1.0 ? "" : num(scale) + "*") + num(base) + "^n";
    g.label = around(limit, label);
    return g;
}

SequenceGen exp_linear_seq(double a, double b, double limit, std::string label) {
    if (!(b > 0.0)) throw std::invalid_argument("exp_linear_seq: rate must be positive");
    SequenceGen g;
    g.kind = SequenceGen::Kind::ExpLinear;
    g.limit = limit;
    g.offset = [=](long n) { return std::exp(a - b * static_cast<double>(n)); };
    if (label.empty()) label = "exp(" + num(a) + "-" + num(b) + "n)";
    g.label = around(limit, label);
    return g;
}

SequenceGen explicit_seq(std::string label, std::function<double(long)> f, double limit) {
    SequenceGen g;
    g.kind = SequenceGen::Kind::Explicit;
    g.limit = limit;
    g.offset = std::move(f);
    g.label = around(limit, label);
    return g;
}

SequenceGen retarget(const SequenceGen& g, double limit, const std::string& prefix) {
    SequenceGen out = g;
    out.limit = limit;
    // Strip any previous limit from the label by rebuilding it from the offset part.
    std::string tail = g.label;
    if (g.limit != 0.0) {
        const std::string head = num(g.limit);
        if (tail.rfind(head, 0) == 0) {
            tail = tail.substr(head.size());
            if (!tail.empty() && tail[0] == '+') tail = tail.substr(1);
        }
    }
    if (g.is_constant()) {
        out.label = prefix + num(limit);
    } else {
        out.label = prefix + around(limit, tail);
    }
    return out;
}

std::string truth_name(Truth t) {
    switch (t) {
        case Truth::False: return "false";
        case Truth::Unknown: return "unknown";
        case Truth::True: return "true";
    }
    return "?";
}

int EvalConfig::window_start() const {
    if (n0 > 0) return std::min(n0, N);
    return N - (N + 3) / 4 + 1;
}

// ---------------------------------------------------------------------------

std::vector<double> ratio_trace(const Measure1D& mu, const SequenceGen& u, const TraceTarget& v,
                                const SequenceGen& r, int N) {
    if (N < 1) throw std::invalid_argument("ratio_trace: N must be at least 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(N));
    for (long n = 1; n <= N; ++n) {
        const double rn = r.value(n);
        if (!(rn > 0.0)) throw std::invalid_argument("ratio_trace: radius sequence must stay positive");
        Target vt = v.seq ? Target(v.seq->point(n)) : Target(Sup{});
        out.push_back(ratio(mu, u.point(n), vt, rn));
    }
    return out;
}

LiminfEstimate liminf_estimate(const std::vector<double>& values, int window) {
    if (values.empty()) throw std::invalid_argument("liminf_estimate: no values");
    const int len = static_cast<int>(values.size());
    if (window < 1 || window > len) throw std::invalid_argument("liminf_estimate: window must lie in [1, length]");
    LiminfEstimate e;
    e.window_from = len - window + 1;
    e.window_to = len;
    const auto first = values.begin() + (len - window);
    e.estimate = *std::min_element(first, values.end());
    e.last = values.back();
    const double hi = *std::max_element(first, values.end());
    const double scale = std::max(1.0, std::fabs(hi));
    if (std::isinf(hi) && std::isinf(e.estimate)) {
        e.trend = "constant";
        return e;
    }
    if (hi - e.estimate <= 1e-9 * scale) {
        e.trend = "constant";
        return e;
    }
    bool inc = true, dec = true;
    for (auto it = first + 1; it != values.end(); ++it) {
        if (*it < *(it - 1)) inc = false;
        if (*it > *(it - 1)) dec = false;
    }
    if (inc) {
        // Growth by a fixed factor or an unbounded last value reads as divergence.
        e.trend = (e.last > 1e6 || (*first > 0.0 && e.last / *first > 1e3)) ? "divergent" : "monotone-increasing";
        return e;
    }
    if (dec) {
        e.trend = "monotone-decreasing";
        return e;
    }
    for (int p = 1; p <= window / 2; ++p) {
        bool periodic = true;
        for (int i = len - window + p; i < len && periodic; ++i) {
            const double a = values[static_cast<std::size_t>(i)], b = values[static_cast<std::size_t>(i - p)];
            if (std::fabs(a - b) > 1e-9 * std::max(1.0, std::fabs(a))) periodic = false;
        }
        if (periodic) {
            e.trend = "periodic";
            e.period = p;
            return e;
        }
    }
    e.trend = "oscillating";
    return e;
}

// ---------------------------------------------------------------------------

Pools make_pools(double u, const PoolSpec& spec, const EvalConfig& cfg) {
    const int N = cfg.N;
    const int n0 = cfg.window_start();
    auto usable_radius = [N, n0](const SequenceGen& g) {
        for (long n : {1L, static_cast<long>(n0), static_cast<long>(N)}) {
            const double v = g.value(n);
            if (!(v > 0.0) || !std::isfinite(v)) return false;
        }
        return true;
    };
    auto dedup = [](std::vector<SequenceGen> v) {
        std::vector<SequenceGen> out;
        std::set<std::string> seen;
        for (auto& g : v)
            if (seen.insert(g.label).second) out.push_back(std::move(g));
        return out;
    };
    auto abs_of = [](const SequenceGen& g, double factor, double power, const std::string& label) {
        auto f = g.offset;
        return explicit_seq(label, [f, factor, power](long n) { return factor * std::pow(std::fabs(f(n)), power); });
    };

    Pools p;
    p.ns = [=](const Context& ctx) {
        std::vector<SequenceGen> out = spec.ns;
        if (ctx.as && !ctx.as->is_constant()) {
            const auto& g = *ctx.as;
            const std::string o = "|as-u|";
            out.push_back(abs_of(g, 1.0, 1.0, o));
            out.push_back(abs_of(g, 4.0, 1.0, "4" + o));
            out.push_back(abs_of(g, 1.0, 4.0, o + "^4"));
            out.push_back(abs_of(g, 0.25, 4.0, o + "^4/4"));
        }
        if (ctx.cs && !ctx.cs->is_constant()) {
            const auto& g = *ctx.cs;
            const std::string o = "|cs-cp|";
            out.push_back(abs_of(g, 1.0, 1.0, o));
            out.push_back(abs_of(g, 0.25, 1.0, o + "/4"));
            out.push_back(abs_of(g, 1.0, 2.0, o + "^2"));
        }
        if (spec.extra_ns) {
            auto extra = spec.extra_ns(ctx);
            out.insert(out.end(), extra.begin(), extra.end());
        }
        std::vector<SequenceGen> ok;
        for (auto& g : out)
            if (usable_radius(g)) ok.push_back(std::move(g));
        return dedup(std::move(ok));
    };
    p.as = [=](const Context& ctx) {
        std::vector<SequenceGen> out;
        out.push_back(constant_seq(u, "const " + num(u)));
        for (const auto& o : spec.as_offsets) out.push_back(retarget(o, u));
        if (ctx.cs && !ctx.cs->is_constant()) out.push_back(retarget(*ctx.cs, u, "u+(cs-cp): "));
        if (ctx.ns) {
            auto f = ctx.ns->offset;
            out.push_back(explicit_seq("r_n", [f](long n) { return f(n); }, u));
            out.push_back(explicit_seq("-r_n", [f](long n) { return -f(n); }, u));
        }
        if (spec.extra_as) {
            auto extra = spec.extra_as(ctx);
            out.insert(out.end(), extra.begin(), extra.end());
        }
        return dedup(std::move(out));
    };
    p.cp = [=](const Context&) {
        std::vector<SequenceGen> out;
        for (double v : spec.cp)
            if (std::fabs(v - u) > 1e-12) out.push_back(constant_seq(v, "cp " + num(v)));
        return dedup(std::move(out));
    };
    p.cs = [=](const Context& ctx) {
        if (!ctx.cp) throw std::logic_error("cs pool requested before cp is bound");
        const double v = ctx.cp->limit;
        std::vector<SequenceGen> out;
        out.push_back(constant_seq(v, "const " + num(v)));
        for (const auto& o : spec.cs_offsets) out.push_back(retarget(o, v));
        if (ctx.as && !ctx.as->is_constant()) out.push_back(retarget(*ctx.as, v, "cp+(as-u): "));
        if (spec.extra_cs) {
            auto extra = spec.extra_cs(ctx);
            out.insert(out.end(), extra.begin(), extra.end());
        }
        return dedup(std::move(out));
    };
    return p;
}

// ---------------------------------------------------------------------------

ModeEvaluator::ModeEvaluator(Measure1D mu, Pools pools, EvalConfig cfg)
    : mu_(std::move(mu)), pools_(std::move(pools)), cfg_(cfg) {
    if (cfg_.N < 1) throw std::invalid_argument("ModeEvaluator: N must be at least 1");
}

double ModeEvaluator::sup_mass(double r) {
    auto it = sup_cache_.find(r);
    if (it != sup_cache_.end()) return it->second;
    const double m = mu_.sup_ball_mass(r).mass;
    sup_cache_.emplace(r, m);
    return m;
}

LeafResult ModeEvaluator::leaf(double u, const Context& ctx) {
    if (!ctx.ns) throw std::logic_error("leaf evaluated without a radius sequence");
    LeafResult out;
    const int n0 = cfg_.window_start();
    for (long n = n0; n <= cfg_.N; ++n) {
        const double r = ctx.ns->value(n);
        const Point un = ctx.as ? ctx.as->point(n) : Point(u);
        const double num_mass = mu_.ball_mass(un, r).value;
        double den;
        if (ctx.cs) {
            den = mu_.ball_mass(ctx.cs->point(n), r).value;
        } else if (ctx.cp) {
            den = mu_.ball_mass(Point(ctx.cp->limit), r).value;
        } else {
            den = sup_mass(r);
        }
        out.window.push_back(mass_ratio(num_mass, den));
    }
    out.estimate = *std::min_element(out.window.begin(), out.window.end());
    if (out.estimate >= 1.0 - cfg_.tol) {
        out.truth = Truth::True;
    } else if (out.estimate <= 1.0 - cfg_.margin) {
        out.truth = Truth::False;
    } else {
        out.truth = Truth::Unknown;
    }
    std::ostringstream os;
    os << "u_n=" << (ctx.as ? ctx.as->label : num(u));
    if (ctx.cs) {
        os << ", v_n=" << ctx.cs->label;
    } else if (ctx.cp) {
        os << ", v=" << num(ctx.cp->limit);
    } else {
        os << ", v=sup";
    }
    os << ", r_n=" << ctx.ns->label << ", min over n in [" << n0 << "," << cfg_.N << "] = " << num(out.estimate);
    out.description = os.str();
    return out;
}

Truth ModeEvaluator::walk(const ModeDefinition& d, std::size_t i, double u, Context& ctx, Evaluation& ev,
                          std::vector<DecisionStep>& path, std::optional<LeafResult>& leaf_out) {
    if (i == d.size()) {
        ++ev.leaves;
        LeafResult lr = leaf(u, ctx);
        const Truth t = lr.truth;
        leaf_out = std::move(lr);
        return t;
    }
    const Quantifier q = d[i];
    std::optional<SequenceGen>* slot = nullptr;
    const std::function<std::vector<SequenceGen>(const Context&)>* pool = nullptr;
    switch (q.variable) {
        case Var::ns: slot = &ctx.ns; pool = &pools_.ns; break;
        case Var::as: slot = &ctx.as; pool = &pools_.as; break;
        case Var::cp: slot = &ctx.cp; pool = &pools_.cp; break;
        case Var::cs: slot = &ctx.cs; pool = &pools_.cs; break;
    }
    const auto candidates = (*pool)(ctx);
    if (candidates.empty())
        throw std::logic_error(std::string("empty candidate pool for ") + var_label(q.variable));

    const bool forall = q.polarity == Polarity::ForAll;
    const Truth decisive = forall ? Truth::False : Truth::True;
    Truth acc = forall ? Truth::True : Truth::False;
    std::vector<DecisionStep> unknown_path;
    std::optional<LeafResult> unknown_leaf;
    std::optional<LeafResult> any_leaf;

    for (const auto& g : candidates) {
        *slot = g;
        std::vector<DecisionStep> sub;
        std::optional<LeafResult> sub_leaf;
        const Truth t = walk(d, i + 1, u, ctx, ev, sub, sub_leaf);
        if (i == 0) ev.outer.emplace_back(g.label, t);
        if (t == decisive) {
            path.push_back({q, g.label, t});
            path.insert(path.end(), sub.begin(), sub.end());
            leaf_out = std::move(sub_leaf);
            slot->reset();
            if (i == 0) {
                // Keep recording the remaining outer candidates for the report.
                continue;
            }
            return t;
        }
        if (t == Truth::Unknown && acc != Truth::Unknown) {
            acc = Truth::Unknown;
            unknown_path = {DecisionStep{q, g.label, t}};
            unknown_path.insert(unknown_path.end(), sub.begin(), sub.end());
            unknown_leaf = sub_leaf;
        }
        if (!any_leaf) any_leaf = sub_leaf;
    }
    slot->reset();
    if (i == 0 && !path.empty()) return decisive;
    if (acc == Truth::Unknown) {
        path = std::move(unknown_path);
        leaf_out = std::move(unknown_leaf);
        return acc;
    }
    path.push_back({q, "all " + std::to_string(candidates.size()) + " candidates", acc});
    leaf_out = std::move(any_leaf);
    return acc;
}

Evaluation ModeEvaluator::evaluate(const ModeDefinition& d, double u) {
    if (!is_grammatical(d)) throw std::invalid_argument("evaluate: definition is not grammatical");
    Evaluation ev;
    Context ctx;
    std::optional<LeafResult> lr;
    ev.truth = walk(d, 0, u, ctx, ev, ev.path, lr);
    ev.decisive_leaf = std::move(lr);
    // The outermost quantifier keeps scanning after a decisive candidate; keep
    // only the first decisive path.
    if (!ev.path.empty()) {
        std::vector<DecisionStep> trimmed;
        bool seen_outer = false;
        for (const auto& s : ev.path) {
            if (s.quantifier == d[0]) {
                if (seen_outer) break;
                seen_outer = true;
            }
            trimmed.push_back(s);
        }
        ev.path = std::move(trimmed);
    }
    return ev;
}

// ---------------------------------------------------------------------------

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

nlohmann::json Certificate::to_json() const {
    nlohmann::json j;
    j["example"] = example;
    j["definition"] = class_definition(cls).pretty();
    j["class"] = class_name(cls);
    j["candidate"] = u;
    j["claim"] = claim == Claim::IsMode ? "IsMode" : "IsNotMode";
    // Existential pools carry the witnesses and universal pools the challengers;
    // for a negative claim the roles swap.
    nlohmann::json witnesses = nlohmann::json::object(), challengers = nlohmann::json::object();
    auto list = [](const std::vector<SequenceGen>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& g : v) a.push_back(g.label);
        return a;
    };
    nlohmann::json cps = nlohmann::json::array();
    for (double v : pools.cp)
        if (v != u) cps.push_back(v);
    const ModeDefinition d = class_definition(cls);
    for (const auto& q : d.quantifiers()) {
        nlohmann::json entry;
        switch (q.variable) {
            case Var::ns: entry = list(pools.ns); break;
            case Var::as: entry = list(pools.as_offsets); entry.push_back("const"); break;
            case Var::cp: entry = cps; break;
            case Var::cs: entry = list(pools.cs_offsets); entry.push_back("const"); break;
        }
        const bool exists = q.polarity == Polarity::Exists;
        const bool witness_role = (claim == Claim::IsMode) == exists;
        (witness_role ? witnesses : challengers)[var_label(q.variable)] = entry;
    }
    j["witnesses"] = witnesses;
    j["challengers"] = challengers;
    j["context_derived"] =
        "as adds u+(cs-cp) and u+-r_n; ns adds |as-u|, 4|as-u|, |as-u|^4, |as-u|^4/4, |cs-cp|, |cs-cp|/4, |cs-cp|^2; "
        "cs adds cp+(as-u)";
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& c : expected) {
        const char* kind = c.kind == TraceCheck::Kind::Equals ? "equals" : c.kind == TraceCheck::Kind::AtMost ? "at_most" : "at_least";
        ex.push_back({{"label", c.label},
                      {"u", c.u.label},
                      {"v", c.v.seq ? c.v.seq->label : "sup"},
                      {"r", c.r.label},
                      {"kind", kind},
                      {"value", c.value},
                      {"tol", c.tol},
                      {"n_range", {c.n_from, c.n_to}}});
    }
    j["expected"] = ex;
    j["n_range"] = {cfg.window_start(), cfg.N};
    j["tol"] = cfg.tol;
    if (!note.empty()) j["note"] = note;
    return j;
}

namespace {
nlohmann::json evaluation_json(const Evaluation& ev) {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& s : ev.path) {
        path.push_back({{"quantifier", std::string(s.quantifier.polarity == Polarity::ForAll ? "A" : "E") +
                                           var_label(s.quantifier.variable)},
                        {"choice", s.choice},
                        {"truth", truth_name(s.truth)}});
    }
    nlohmann::json outer = nlohmann::json::array();
    for (const auto& [label, t] : ev.outer) outer.push_back({{"candidate", label}, {"truth", truth_name(t)}});
    nlohmann::json j{{"truth", truth_name(ev.truth)}, {"leaves", ev.leaves}, {"decisive_path", path}, {"outer", outer}};
    if (ev.decisive_leaf) {
        j["decisive_leaf"] = {{"description", ev.decisive_leaf->description},
                              {"estimate", ev.decisive_leaf->estimate},
                              {"window", ev.decisive_leaf->window}};
    }
    return j;
}
}  // namespace

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    j["example"] = example;
    j["class"] = class_name(cls);
    j["definition"] = class_definition(cls).pretty();
    j["candidate"] = u;
    j["claim"] = claim == Claim::IsMode ? "IsMode" : "IsNotMode";
    j["verdict"] = verdict_name(verdict);
    j["evaluation"] = evaluation_json(evaluation);
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks)
        cs.push_back({{"label", c.label}, {"ok", c.ok}, {"worst_n", c.worst_n}, {"worst_value", c.worst_value}});
    j["expected_checks"] = cs;
    j["caveat"] = caveat;
    return j;
}

std::string CheckReport::text() const {
    std::ostringstream os;
    os << example << " u=" << num(u) << " class " << class_name(cls) << " " << class_definition(cls).pretty() << ": claim "
       << (claim == Claim::IsMode ? "mode" : "not a mode") << ", evaluation " << truth_name(evaluation.truth) << " ("
       << evaluation.leaves << " traces) -> " << verdict_name(verdict) << "\n";
    for (const auto& s : evaluation.path) {
        os << "  " << (s.quantifier.polarity == Polarity::ForAll ? "A" : "E") << var_label(s.quantifier.variable) << ": "
           << s.choice << " [" << truth_name(s.truth) << "]\n";
    }
    if (evaluation.decisive_leaf) os << "  trace: " << evaluation.decisive_leaf->description << "\n";
    for (const auto& c : checks)
        os << "  expected " << c.label << ": " << (c.ok ? "ok" : "VIOLATED") << " (worst n=" << c.worst_n
           << ", value " << num(c.worst_value) << ")\n";
    return os.str();
}

TraceCheckResult run_trace_check(const Measure1D& mu, const TraceCheck& check) {
    TraceCheckResult res;
    res.label = check.label;
    res.ok = true;
    double worst_excess = -kInf;
    for (long n = check.n_from; n <= check.n_to; ++n) {
        const double rn = check.r.value(n);
        Target vt = check.v.seq ? Target(check.v.seq->point(n)) : Target(Sup{});
        const double x = ratio(mu, check.u.point(n), vt, rn);
        res.values.push_back(x);
        double excess = 0.0;
        switch (check.kind) {
            case TraceCheck::Kind::Equals: excess = std::fabs(x - check.value) - check.tol; break;
            case TraceCheck::Kind::AtMost: excess = x - (check.value + check.tol); break;
            case TraceCheck::Kind::AtLeast: excess = (check.value - check.tol) - x; break;
        }
        if (excess > worst_excess || res.worst_n == 0) {
            worst_excess = excess;
            res.worst_n = static_cast<int>(n);
            res.worst_value = x;
        }
        if (excess > 0.0 || std::isnan(x)) res.ok = false;
    }
    return res;
}

CheckReport verify_certificate(const Measure1D& mu, const Certificate& cert) {
    CheckReport rep;
    rep.example = cert.example;
    rep.cls = cert.cls;
    rep.u = cert.u;
    rep.claim = cert.claim;
    ModeEvaluator ev(mu, make_pools(cert.u, cert.pools, cert.cfg), cert.cfg);
    rep.evaluation = ev.evaluate(class_definition(cert.cls), cert.u);
    bool checks_ok = true;
    for (const auto& c : cert.expected) {
        rep.checks.push_back(run_trace_check(mu, c));
        checks_ok = checks_ok && rep.checks.back().ok;
    }
    const Truth want = cert.claim == Claim::IsMode ? Truth::True : Truth::False;
    if (!checks_ok) {
        rep.verdict = Verdict::Fail;
    } else if (rep.evaluation.truth == Truth::Unknown) {
        rep.verdict = Verdict::Inconclusive;
    } else {
        rep.verdict = rep.evaluation.truth == want ? Verdict::Pass : Verdict::Fail;
    }
    rep.caveat =
        "finite truncation: universal quantifiers range over the listed challengers only, so universal claims can be "
        "refuted but not proved; liminf is estimated by the minimum over the tail window";
    return rep;
}

// ---------------------------------------------------------------------------

FixedRadiusModes fixed_radius_modes(const Measure1D& mu, double r) {
    const SupResult s = mu.sup_ball_mass(r);
    FixedRadiusModes out;
    out.mass = s.mass;
    std::vector<double> pts;
    for (const auto& p : s.argmax) pts.push_back(p.value());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::fabs(a - b) <= 1e-14 * std::max(1.0, std::fabs(a)); }),
              pts.end());
    auto achieves = [&](double x) { return mu.ball_mass(Point(x), r).value >= s.mass * (1.0 - 1e-12); };
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        while (j + 1 < pts.size()) {
            bool all = true;
            for (int k = 1; k < 16 && all; ++k) all = achieves(pts[j] + (pts[j + 1] - pts[j]) * k / 16.0);
            if (!all) break;
            ++j;
        }
        if (j > i) {
            out.intervals.emplace_back(pts[i], pts[j]);
        } else {
            out.points.push_back(pts[i]);
        }
        i = j + 1;
    }
    return out;
}

nlohmann::json OmCheckReport::to_json() const {
    nlohmann::json j{{"ok", ok}};
    j["pairs"] = nlohmann::json::array();
    for (const auto& p : pairs)
        j["pairs"].push_back({{"u", p.u}, {"v", p.v}, {"expected", p.expected}, {"observed", p.observed}, {"ok", p.ok}});
    j["outside"] = nlohmann::json::array();
    for (const auto& o : outside)
        j["outside"].push_back({{"v", o.v}, {"u", o.u}, {"last", o.last}, {"decreasing", o.decreasing}, {"ok", o.ok}});
    return j;
}

OmCheckReport om_check(const Measure1D& mu, const std::vector<double>& E, const std::vector<double>& I,
                       const std::vector<double>& outside, const SequenceGen& r, int N, double tol,
                       double outside_tol) {
    if (E.empty()) throw std::invalid_argument("om_check: E must be nonempty");
    if (E.size() != I.size()) throw std::invalid_argument("om_check: E and I differ in length");
    OmCheckReport rep;
    for (std::size_t a = 0; a < E.size(); ++a) {
        for (std::size_t b = 0; b < E.size(); ++b) {
            if (a == b) continue;
            const auto tr = ratio_trace(mu, constant_seq(E[a]), TraceTarget::of(constant_seq(E[b])), r, N);
            const double expected = std::exp(I[b] - I[a]);
            const double observed = tr.back();
            const bool ok = std::fabs(observed - expected) <= tol * std::max(1.0, expected);
            rep.pairs.push_back({E[a], E[b], expected, observed, ok});
            rep.ok = rep.ok && ok;
        }
    }
    for (double v : outside) {
        for (double u : E) {
            const auto tr = ratio_trace(mu, constant_seq(v), TraceTarget::of(constant_seq(u)), r, N);
            const int w = std::max(2, N / 4);
            const double first = tr[static_cast<std::size_t>(N - w)];
            const bool decreasing = tr.back() <= first;
            const bool ok = decreasing && tr.back() <= outside_tol;
            rep.outside.push_back({v, u, tr.back(), decreasing, ok});
            rep.ok = rep.ok && ok;
        }
    }
    return rep;
}

nlohmann::json CasioReport::to_json() const {
    nlohmann::json j{{"ok", ok}, {"entries", nlohmann::json::array()}};
    for (const auto& e : entries)
        j["entries"].push_back({{"as", e.as_label},
                                {"ns", e.ns_label},
                                {"liminf", e.estimate.estimate},
                                {"trend", e.estimate.trend},
                                {"ok", e.ok}});
    return j;
}

CasioReport casio_check(const Measure1D& mu, double u, const std::vector<SequenceGen>& as_gens,
                        const std::vector<SequenceGen>& r_gens, int N, double tol) {
    CasioReport rep;
    for (const auto& a : as_gens) {
        for (const auto& r : r_gens) {
            const auto tr = ratio_trace(mu, constant_seq(u), TraceTarget::of(a), r, N);
            auto est = liminf_estimate(tr, std::max(1, (N + 3) / 4));
            const bool ok = est.estimate >= 1.0 - tol;
            rep.entries.push_back({a.label, r.label, est, ok});
            rep.ok = rep.ok && ok;
        }
    }
    return rep;
}

}  // namespace modelattice
