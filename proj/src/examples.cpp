#include "modelattice/examples.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "modelattice/lattice.hpp"

namespace modelattice {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kPoolSeed = 0x5eed2024ULL;

// 2^-(a n + b) as a sequence in n.
SequenceGen pow2_seq(int a, int b, const std::string& label, double limit = 0.0) {
    return explicit_seq(label, [a, b](long n) { return std::ldexp(1.0, -static_cast<int>(a * n + b)); }, limit);
}

SequenceGen neg(const SequenceGen& g, const std::string& label) {
    auto f = g.offset;
    return explicit_seq(label, [f](long n) { return -f(n); }, g.limit);
}

// Offsets every example uses for comparison sequences.
std::vector<SequenceGen> base_cs_offsets() {
    return {pow2_seq(1, 0, "2^-n"), neg(pow2_seq(1, 0, ""), "-2^-n"), exp_linear_seq(0.0, 1.0, 0.0, "e^-n"),
            explicit_seq("-3^-n", [](long n) { return -std::pow(3.0, -static_cast<double>(n)); })};
}

std::vector<SequenceGen> common_as_offsets() {
    return {pow2_seq(1, 0, "2^-n"), neg(pow2_seq(1, 0, ""), "-2^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n")};
}

void add_random_cps(std::vector<double>& cps, ExampleId id, double lo, double hi) {
    std::mt19937_64 rng(kPoolSeed + static_cast<std::uint64_t>(id));
    std::uniform_real_distribution<double> d(lo, hi);
    for (int i = 0; i < 2; ++i) cps.push_back(d(rng));
}

double wp_theta(double v) { return std::fmod(2.0 * v * kPi / 3.0, 2.0 * kPi); }

TraceCheck check(std::string label, SequenceGen u, TraceTarget v, SequenceGen r, TraceCheck::Kind kind, double value,
                 int n_from, int n_to, double tol = 1e-9) {
    TraceCheck c;
    c.label = std::move(label);
    c.u = std::move(u);
    c.v = std::move(v);
    c.r = std::move(r);
    c.kind = kind;
    c.value = value;
    c.n_from = n_from;
    c.n_to = n_to;
    c.tol = tol;
    return c;
}

Measure1D ps_not_gw_measure() {
    const double third = 1.0 / 3.0;
    return Measure1D::from_components(
        {knot_singularity(Point(-2.0), 1.0, 0.25, 1.0, 0.5, third),
         power_singularity(Point(0.0), 0.5, 0.25, 1.0, false, third),
         knot_singularity(Point(2.0), 0.5, 0.25, 1.0 / std::sqrt(2.0), 0.5, third)},
        {}, 0.0, "ps-not-gw");
}

Measure1D suspension_measure() {
    return Measure1D::from_components({knot_singularity(Point(-1.0), 1.0, 0.25, 1.0, 0.5),
                                       knot_singularity(Point(1.0), 0.5, 0.25, 1.0 / std::sqrt(2.0), 0.5)},
                                      {families::knot_train(kSuspensionBeta, true),
                                       families::knot_train(kSuspensionBeta, false)},
                                      0.0, "suspension-ext");
}

ExampleBundle e_not_pgs() {
    ExampleBundle b;
    b.measure = Measure1D::from_components({power_singularity(Point(0.0), 0.25, 0.75, 0.5, false)},
                                           {families::hat_train()}, 0.0, "e-not-pgs");
    b.candidate = 0.0;
    b.expected = {ClassId::e, ClassId::w, ClassId::pw, ClassId::wp, ClassId::gwap, ClassId::wgap};
    b.pools.ns = {pow2_seq(1, 0, "2^-n"), exp_linear_seq(0.0, 1.0, 0.0, "e^-n"),
                  explicit_seq("n^-3/2", [](long n) { return 0.5 / std::pow(static_cast<double>(n), 3.0); }),
                  geometric_seq(1.0 / 3.0, 0.5, 0.0, "3^-n/2")};
    b.pools.as_offsets = common_as_offsets();
    b.pools.cp = {1.0, 2.0, 3.0, 5.0, 0.25, -0.3};
    add_random_cps(b.pools.cp, ExampleId::ENotPGS, -0.5, 6.0);
    b.pools.cs_offsets = base_cs_offsets();
    b.checks[ClassId::ps] = {check("ratio(0, sup, 2^-n) <= 1/2", constant_seq(0.0), TraceTarget::sup(), pow2_seq(1, 0, "2^-n"),
                                   TraceCheck::Kind::AtMost, 0.5, 20, 40)};
    b.note = "sup attained near the hat at k(r) = ceil((2r)^(-1/3))";
    return b;
}

ExampleBundle w_not_e_pgs() {
    ExampleBundle b;
    b.measure = Measure1D::from_components({power_singularity(Point(0.0), 0.25, 0.75, 0.5, false)},
                                           {families::one_sided_train()}, 0.0, "w-not-e-pgs");
    b.candidate = 0.0;
    b.expected = {ClassId::w, ClassId::pw, ClassId::wp, ClassId::gwap, ClassId::wgap};
    b.pools.ns = {pow2_seq(1, 0, "2^-n"), exp_linear_seq(0.0, 1.0, 0.0, "e^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n"),
                  pow2_seq(2, 0, "4^-n")};
    b.pools.as_offsets = common_as_offsets();
    b.pools.cp = {1.0, 2.0, 3.0, 0.25, -0.3, 1.25};
    add_random_cps(b.pools.cp, ExampleId::WNotEPGS, -0.5, 4.0);
    b.pools.cs_offsets = base_cs_offsets();
    // Centre mass 2 r^(3/4) against the one-sided block at 1, weight 3/2, seen from 1 + r.
    const double e_ratio = 2.0 / (1.5 * std::pow(2.0, 0.75));
    b.checks[ClassId::e] = {check("ratio(0, 1 + 2^-n, 2^-n)", constant_seq(0.0), TraceTarget::of(pow2_seq(1, 0, "2^-n", 1.0)),
                                  pow2_seq(1, 0, "2^-n"), TraceCheck::Kind::Equals, e_ratio, 2, 40)};
    b.checks[ClassId::w] = {check("ratio(0, 1, 2^-n) = 1/(1 - 1/4)", constant_seq(0.0), TraceTarget::of(constant_seq(1.0)),
                                  pow2_seq(1, 0, "2^-n"), TraceCheck::Kind::Equals, 4.0 / 3.0, 1, 40)};
    b.note = "e refuted with cp 1, cs 1 + t_n and radius t_n";
    return b;
}

ExampleBundle ps_not_gw() {
    ExampleBundle b;
    b.measure = ps_not_gw_measure();
    b.candidate = -2.0;
    b.expected = {ClassId::ps, ClassId::pgs, ClassId::pw, ClassId::wp, ClassId::gwap, ClassId::wgap};
    b.pools.ns = {pow2_seq(2, 0, "4^-n"), pow2_seq(2, -1, "2*4^-n"), pow2_seq(1, 0, "2^-n"),
                  geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n"), geometric_seq(0.25, 1.5, 0.0, "1.5*4^-n")};
    b.pools.as_offsets = common_as_offsets();
    b.pools.cp = {0.0, 2.0, -1.5, 1.0, 2.5, 5.0};
    add_random_cps(b.pools.cp, ExampleId::PSNotGW, -3.0, 3.0);
    b.pools.cs_offsets = base_cs_offsets();
    const double hi = 3.0 / (2.0 * std::sqrt(2.0));
    b.checks[ClassId::ps] = {check("ratio(-2, sup, 4^-n) = 1", constant_seq(-2.0), TraceTarget::sup(), pow2_seq(2, 0, "4^-n"),
                                   TraceCheck::Kind::Equals, 1.0, 1, 20)};
    b.checks[ClassId::w] = {
        check("ratio(-2, 2, 4^-n)", constant_seq(-2.0), TraceTarget::of(constant_seq(2.0)), pow2_seq(2, 0, "4^-n"),
              TraceCheck::Kind::Equals, hi, 1, 20),
        check("ratio(-2, 2, 2*4^-n)", constant_seq(-2.0), TraceTarget::of(constant_seq(2.0)), pow2_seq(2, -1, "2*4^-n"),
              TraceCheck::Kind::Equals, 1.0 / hi, 1, 20)};
    b.note = "ratio(-2, 2, r) alternates between 3/(2 sqrt 2) at r = 4^-n and 2 sqrt 2/3 at r = 2 * 4^-n";
    return b;
}

ExampleBundle pgs_not_gs() {
    ExampleBundle b;
    b.measure = Measure1D::from_components({power_singularity(Point(kPgsC), 0.5, 0.5, std::fabs(kPgsC) / 2.0, false)},
                                           {families::step_train(0.0)}, 0.0, "pgs-not-gs");
    b.candidate = 0.0;
    b.expected = {ClassId::pgs, ClassId::gwap, ClassId::wgap};
    b.pools.ns = {pow2_seq(4, 0, "4^-2n"), pow2_seq(4, 2, "4^-(2n+1)"), pow2_seq(1, 0, "2^-n"), pow2_seq(2, 0, "4^-n")};
    b.pools.as_offsets = common_as_offsets();
    b.pools.as_offsets.push_back(pow2_seq(1, 1, "2^-(n+1)"));
    // The block nearest in scale to the bound radius, and its neighbours.
    b.pools.extra_as = [](const Context& ctx) {
        std::vector<SequenceGen> out;
        if (!ctx.ns) return out;
        auto f = ctx.ns->offset;
        for (int shift : {-1, 0, 1}) {
            out.push_back(explicit_seq("block centre near r_n (shift " + std::to_string(shift) + ")", [f, shift](long n) {
                const double r = f(n);
                long k = std::lround(std::log(1.0 / r) / std::log(16.0)) + shift;
                k = std::max<long>(1, k);
                return std::ldexp(1.0, -static_cast<int>(k));
            }));
        }
        return out;
    };
    b.pools.cp = {kPgsC, 0.5, 0.3, -0.3, 1.0};
    add_random_cps(b.pools.cp, ExampleId::PGSNotGS, -0.3, 0.7);
    b.pools.cs_offsets = base_cs_offsets();
    b.checks[ClassId::pgs] = {check("ratio(2^-n, sup, 4^-2n) = 1", pow2_seq(1, 0, "2^-n"), TraceTarget::sup(),
                                    pow2_seq(4, 0, "4^-2n"), TraceCheck::Kind::Equals, 1.0, 2, 15)};
    std::vector<TraceCheck> gs;
    const TraceTarget c = TraceTarget::of(constant_seq(kPgsC));
    const SequenceGen S = pow2_seq(4, 2, "4^-(2n+1)");
    for (const auto& u : {constant_seq(0.0), pow2_seq(1, 0, "2^-n"), pow2_seq(1, 1, "2^-(n+1)"), pow2_seq(4, 2, "S_n"),
                          neg(pow2_seq(1, 0, ""), "-2^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n"),
                          explicit_seq("2^-n + S_n", [](long n) {
                              return std::ldexp(1.0, -static_cast<int>(n)) + std::ldexp(1.0, -static_cast<int>(4 * n + 2));
                          })}) {
        gs.push_back(check("ratio(" + u.label + ", c, S_n) <= 1/2", u, c, S, TraceCheck::Kind::AtMost, 0.5, 4, 15));
    }
    b.checks[ClassId::gs] = gs;
    b.note = "s-mode at c = -1/8; u = 0 dominates only along R_n = 4^-2n with u_n = 2^-n";
    return b;
}

ExampleBundle wp_not_pw_pgs() {
    ExampleBundle b;
    const double sigma_coeff = 1.0 / (2.0 * std::sqrt(2.0));
    b.measure = Measure1D::from_components({power_singularity(Point(0.0), 0.5, sigma_coeff, 0.5, false, 0.25),
                                            trig_singularity(Point(2.0), kWpAlpha, wp_theta(2.0), 0.25),
                                            trig_singularity(Point(4.0), kWpAlpha, wp_theta(4.0), 0.25),
                                            trig_singularity(Point(6.0), kWpAlpha, wp_theta(6.0), 0.25)},
                                           {}, 0.0, "wp-not-pw-pgs");
    b.candidate = 0.0;
    b.expected = {ClassId::wp, ClassId::gwap, ClassId::wgap};
    for (int j = 0; j < 24; ++j) {
        const double a = 2.0 * kPi * j / 24.0;
        b.pools.ns.push_back(exp_linear_seq(a, 2.0 * kPi, 0.0, "exp(2pi*" + std::to_string(j) + "/24 - 2pi n)"));
    }
    b.pools.ns.push_back(pow2_seq(1, 0, "2^-n"));
    b.pools.ns.push_back(exp_linear_seq(0.0, 1.0, 0.0, "e^-n"));
    b.pools.as_offsets = common_as_offsets();
    b.pools.cp = {2.0, 4.0, 6.0, 1.0, 3.0, 0.25, -0.5};
    add_random_cps(b.pools.cp, ExampleId::WPNotPWPGS, -1.0, 7.0);
    b.pools.cs_offsets = base_cs_offsets();
    std::vector<TraceCheck> wp;
    for (double v : {2.0, 4.0, 6.0}) {
        const double a = 2.0 * v * kPi / 3.0;
        wp.push_back(check("ratio(0, " + std::to_string(static_cast<int>(v)) + ", exp(2v pi/3 - 4 n pi)) = 1", constant_seq(0.0),
                           TraceTarget::of(constant_seq(v)), exp_linear_seq(a, 4.0 * kPi), TraceCheck::Kind::Equals, 1.0, 1, 10));
    }
    b.checks[ClassId::wp] = wp;
    b.note = "alpha = 0.3; the phase at v is 2 v pi / 3";
    return b;
}

ExampleBundle gs_not_wp() {
    ExampleBundle b;
    b.measure = Measure1D::from_components({uniform_interval(0.0, 1.0, 1.0)}, {}, 0.0, "gs-not-wp");
    b.candidate = 0.0;
    b.expected = {ClassId::gs, ClassId::pgs, ClassId::gwap, ClassId::wgap};
    b.pools.ns = {pow2_seq(1, 0, "2^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n"), exp_linear_seq(0.0, 1.0, 0.0, "e^-n")};
    b.pools.as_offsets = common_as_offsets();
    b.pools.cp = {0.5, 1.0, 0.25, 0.75, -0.3, 1.5};
    add_random_cps(b.pools.cp, ExampleId::GSNotWP, -0.5, 1.5);
    b.pools.cs_offsets = base_cs_offsets();
    b.checks[ClassId::gs] = {check("ratio(r_n, sup, r_n) = 1", pow2_seq(1, 0, "2^-n"), TraceTarget::sup(), pow2_seq(1, 0, "2^-n"),
                                   TraceCheck::Kind::Equals, 1.0, 2, 40)};
    b.checks[ClassId::wp] = {check("ratio(0, 1/2, 2^-n) = 1/2", constant_seq(0.0), TraceTarget::of(constant_seq(0.5)),
                                   pow2_seq(1, 0, "2^-n"), TraceCheck::Kind::Equals, 0.5, 2, 40)};
    return b;
}

ExampleBundle wgap_not_gwap() {
    ExampleBundle b;
    b.measure = Measure1D::from_components({power_singularity(Point(kPgsC), 0.5, 0.5, std::fabs(kPgsC) / 2.0, false)},
                                           {families::wgap_blocks(0.0, 1.0, 1.0), families::wgap_blocks(1.0, 2.0, 1.0),
                                            families::wgap_blocks(2.0, 1.0, 2.0)},
                                           0.0, "wgap-not-gwap");
    b.candidate = 0.0;
    b.expected = {ClassId::wgap};
    b.pools.ns = {pow2_seq(1, 0, "2^-n"), pow2_seq(4, 0, "4^-2n"), pow2_seq(8, 0, "4^-4n"), pow2_seq(8, 4, "4^-(4n+2)")};
    b.pools.as_offsets = {pow2_seq(1, 0, "2^-n"), pow2_seq(2, 0, "2^-2n"), pow2_seq(2, 1, "2^-(2n+1)"),
                          neg(pow2_seq(1, 0, ""), "-2^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n")};
    b.pools.cp = {kPgsC, 1.0, 2.0, 0.5, 1.5, -0.3, 2.5};
    add_random_cps(b.pools.cp, ExampleId::WGAPNotGWAP, -0.3, 2.8);
    b.pools.cs_offsets = base_cs_offsets();
    b.checks[ClassId::wgap] = {
        check("ratio(2^-2n, 1 + 2^-2n, 4^-4n) = 1", pow2_seq(2, 0, "2^-2n"), TraceTarget::of(pow2_seq(2, 0, "2^-2n", 1.0)),
              pow2_seq(8, 0, "4^-4n"), TraceCheck::Kind::Equals, 1.0, 1, 7),
        check("ratio(2^-(2n+1), 2 + 2^-(2n+1), 4^-(4n+2)) = 1", pow2_seq(2, 1, "2^-(2n+1)"),
              TraceTarget::of(pow2_seq(2, 1, "2^-(2n+1)", 2.0)), pow2_seq(8, 4, "4^-(4n+2)"), TraceCheck::Kind::Equals, 1.0, 1, 7),
        check("ratio(2^-n, c, 4^-2n) = 1", pow2_seq(1, 0, "2^-n"), TraceTarget::of(constant_seq(kPgsC)), pow2_seq(4, 0, "4^-2n"),
              TraceCheck::Kind::Equals, 1.0, 2, 15)};
    std::vector<TraceCheck> gwap;
    for (const auto& r : {pow2_seq(1, 0, "2^-n"), pow2_seq(2, 0, "4^-n"), pow2_seq(8, 4, "4^-(4n+2)"), pow2_seq(3, 3, "8^-(n+1)")}) {
        gwap.push_back(check("ratio(2^-(2n+1), 1 + 2^-(2n+1), " + r.label + ") <= 9/10", pow2_seq(2, 1, "2^-(2n+1)"),
                             TraceTarget::of(pow2_seq(2, 1, "2^-(2n+1)", 1.0)), r, TraceCheck::Kind::AtMost, 0.9, 5, 12));
    }
    b.checks[ClassId::gwap] = gwap;
    b.note = "cp -1 of the construction is taken as the singularity c = -1/8";
    return b;
}

std::set<ClassId> observed_modes(const std::vector<CheckReport>& cells) {
    std::set<ClassId> out;
    for (const auto& c : cells)
        if (c.evaluation.truth == Truth::True) out.insert(c.cls);
    return out;
}

bool is_downset(const std::set<ClassId>& s) {
    static const ClassLattice L = build_main_lattice();
    for (ClassId a : s) {
        const int ia = L.index_of(class_name(a));
        for (ClassId b : kAllClasses) {
            const int ib = L.index_of(class_name(b));
            if (L.below(ib, ia) && !s.count(b)) return false;
        }
    }
    return true;
}

Certificate make_certificate(const std::string& example, const Measure1D&, double u, ClassId cls, Claim claim,
                             const PoolSpec& pools, const EvalConfig& cfg, std::vector<TraceCheck> expected = {}) {
    Certificate c;
    c.example = example;
    c.cls = cls;
    c.u = u;
    c.claim = claim;
    c.pools = pools;
    c.cfg = cfg;
    c.expected = std::move(expected);
    return c;
}

MergingCase merging_case(const std::string& label, const Measure1D& mu, double u, ClassId cls, Claim claim,
                         const PoolSpec& pools, const EvalConfig& cfg) {
    MergingCase mc;
    mc.label = label;
    mc.report = verify_certificate(mu, make_certificate(label, mu, u, cls, claim, pools, cfg));
    mc.ok = mc.report.verdict == Verdict::Pass;
    return mc;
}

PoolSpec ps_not_gw_restricted_pools() {
    PoolSpec p;
    p.ns = {pow2_seq(2, 0, "4^-n"), pow2_seq(2, -1, "2*4^-n"), pow2_seq(1, 0, "2^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n")};
    p.as_offsets = common_as_offsets();
    p.cp = {-2.0, 2.0, -1.5, 1.5, 2.5, -2.5};
    p.cs_offsets = base_cs_offsets();
    return p;
}

PoolSpec suspension_pools() {
    PoolSpec p;
    p.ns = {pow2_seq(2, 0, "4^-n"), pow2_seq(2, -1, "2*4^-n"), pow2_seq(1, 0, "2^-n"), geometric_seq(1.0 / 3.0, 1.0, 0.0, "3^-n")};
    p.as_offsets = common_as_offsets();
    p.cp = {-1.0, 1.0, 3.0, 4.0, 5.0, 6.0, -3.0, -4.0, -5.0, -6.0};
    p.cs_offsets = base_cs_offsets();
    return p;
}

std::vector<MergingCase> suspension_cases(const EvalConfig& cfg) {
    const Measure1D mu = suspension_measure();
    const Measure1D muA = mu.restrict({{-kInf, -0.5}});
    const Measure1D muB = mu.restrict({{0.5, kInf}});
    const Measure1D muAB = mu.restrict({{-kInf, -0.5}, {0.5, kInf}});
    const PoolSpec p = suspension_pools();
    std::vector<MergingCase> out;
    out.push_back(merging_case("SuspensionExt: -1 is a ps-mode of mu|A", muA, -1.0, ClassId::ps, Claim::IsMode, p, cfg));
    out.push_back(merging_case("SuspensionExt: 1 is a ps-mode of mu|B", muB, 1.0, ClassId::ps, Claim::IsMode, p, cfg));
    // Copy k loses to copy k + 1 by a factor 1 - O(beta^-k), about 1.2e-4 at
    // k = 3, which is inside the default undecided band. The traces here are
    // constant closed forms, so a narrower band is used for these cases.
    EvalConfig fine = cfg;
    fine.tol = std::min(cfg.tol, 1e-9);
    fine.margin = std::min(cfg.margin, 1e-6);
    for (double u : {-1.0, 1.0, 3.0, 4.0, 5.0, -3.0, -4.0, -5.0, 0.7, -2.5}) {
        std::ostringstream os;
        os << "SuspensionExt: " << u << " is not a wgap-mode of mu|AuB";
        out.push_back(merging_case(os.str(), muAB, u, ClassId::wgap, Claim::IsNotMode, p, fine));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string example_name(ExampleId id) {
    switch (id) {
        case ExampleId::ENotPGS: return "E-not-PGS";
        case ExampleId::WNotEPGS: return "W-not-E-PGS";
        case ExampleId::PSNotGW: return "PS-not-GW";
        case ExampleId::SuspensionExt: return "SuspensionExt";
        case ExampleId::PGSNotGS: return "PGS-not-GS";
        case ExampleId::WPNotPWPGS: return "WP-not-PW-PGS";
        case ExampleId::GSNotWP: return "GS-not-WP";
        case ExampleId::WGAPNotGWAP: return "WGAP-not-GWAP";
        case ExampleId::L2NoOptimalAS: return "L2-NoOptimalAS";
        case ExampleId::GaussENotPS: return "Gauss-E-not-PS";
        case ExampleId::GaussPSNotS: return "Gauss-PS-not-S";
    }
    return "?";
}

const std::vector<ExampleId>& all_examples() {
    static const std::vector<ExampleId> v = {
        ExampleId::ENotPGS,     ExampleId::WNotEPGS, ExampleId::PSNotGW,     ExampleId::SuspensionExt,
        ExampleId::PGSNotGS,    ExampleId::WPNotPWPGS, ExampleId::GSNotWP,   ExampleId::WGAPNotGWAP,
        ExampleId::L2NoOptimalAS, ExampleId::GaussENotPS, ExampleId::GaussPSNotS};
    return v;
}

const std::vector<ExampleId>& matrix_examples() {
    static const std::vector<ExampleId> v = {ExampleId::ENotPGS,    ExampleId::WNotEPGS, ExampleId::PSNotGW,
                                             ExampleId::PGSNotGS,   ExampleId::WPNotPWPGS, ExampleId::GSNotWP,
                                             ExampleId::WGAPNotGWAP};
    return v;
}

std::optional<ExampleId> parse_example(const std::string& name) {
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        return s;
    };
    for (ExampleId id : all_examples())
        if (lower(example_name(id)) == lower(name)) return id;
    return std::nullopt;
}

bool is_one_dimensional(ExampleId id) {
    return id != ExampleId::L2NoOptimalAS && id != ExampleId::GaussENotPS && id != ExampleId::GaussPSNotS;
}

ExampleBundle build_example(ExampleId id) {
    ExampleBundle b;
    switch (id) {
        case ExampleId::ENotPGS: b = e_not_pgs(); break;
        case ExampleId::WNotEPGS: b = w_not_e_pgs(); break;
        case ExampleId::PSNotGW: b = ps_not_gw(); break;
        case ExampleId::PGSNotGS: b = pgs_not_gs(); break;
        case ExampleId::WPNotPWPGS: b = wp_not_pw_pgs(); break;
        case ExampleId::GSNotWP: b = gs_not_wp(); break;
        case ExampleId::WGAPNotGWAP: b = wgap_not_gwap(); break;
        case ExampleId::SuspensionExt:
            b.measure = suspension_measure();
            b.candidate = -1.0;
            b.pools = suspension_pools();
            b.note = "beta = 20; modes appear only after restriction";
            break;
        default: throw std::invalid_argument("build_example: " + example_name(id) + " is not a one-dimensional example");
    }
    b.id = id;
    return b;
}

Measure1D example_measure(ExampleId id) { return build_example(id).measure; }

std::vector<Certificate> example_certificates(const ExampleBundle& b, const EvalConfig& cfg) {
    std::vector<Certificate> out;
    for (ClassId cls : kAllClasses) {
        const Claim claim = b.expected.count(cls) ? Claim::IsMode : Claim::IsNotMode;
        std::vector<TraceCheck> ex;
        auto it = b.checks.find(cls);
        if (it != b.checks.end()) ex = it->second;
        Certificate c = make_certificate(example_name(b.id), b.measure, b.candidate, cls, claim, b.pools, cfg, std::move(ex));
        c.note = b.note;
        out.push_back(std::move(c));
    }
    return out;
}

SeparationRow run_separation_row(ExampleId id, const EvalConfig& cfg) {
    const ExampleBundle b = build_example(id);
    SeparationRow row;
    row.id = id;
    row.candidate = b.candidate;
    row.expected = b.expected;
    for (const auto& cert : example_certificates(b, cfg)) row.cells.push_back(verify_certificate(b.measure, cert));
    row.observed = observed_modes(row.cells);
    row.matches = true;
    for (const auto& cell : row.cells) {
        if (cell.verdict != Verdict::Pass) {
            row.matches = false;
            std::ostringstream os;
            os << example_name(id) << " class " << class_name(cell.cls) << ": " << verdict_name(cell.verdict);
            if (cell.evaluation.decisive_leaf) os << " (" << cell.evaluation.decisive_leaf->description << ")";
            for (const auto& c : cell.checks)
                if (!c.ok) os << " [expected " << c.label << " violated at n=" << c.worst_n << "]";
            row.mismatches.push_back(os.str());
        }
    }
    row.matches = row.matches && row.observed == row.expected;
    row.downset = is_downset(row.observed);
    return row;
}

SeparationMatrix run_separation_matrix(const EvalConfig& cfg) {
    SeparationMatrix m;
    for (ExampleId id : matrix_examples()) m.rows.push_back(run_separation_row(id, cfg));
    return m;
}

bool SeparationMatrix::ok() const {
    if (rows.empty()) return false;
    return std::all_of(rows.begin(), rows.end(), [](const SeparationRow& r) { return r.matches && r.downset; });
}

std::string SeparationMatrix::to_csv() const {
    std::ostringstream os;
    os << "example,candidate";
    for (ClassId c : kAllClasses) os << "," << class_name(c);
    os << "\n";
    for (const auto& r : rows) {
        os << example_name(r.id) << "," << r.candidate;
        for (const auto& cell : r.cells) {
            const char* v = cell.evaluation.truth == Truth::True    ? "Mode"
                            : cell.evaluation.truth == Truth::False ? "NotMode"
                                                                    : "Unchecked";
            os << "," << v;
        }
        os << "\n";
    }
    return os.str();
}

nlohmann::json SeparationMatrix::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"example", example_name(r.id)}, {"candidate", r.candidate}, {"matches", r.matches},
                           {"downset", r.downset}};
        nlohmann::json cells = nlohmann::json::object();
        for (const auto& cell : r.cells) cells[class_name(cell.cls)] = truth_name(cell.evaluation.truth);
        row["cells"] = cells;
        nlohmann::json exp = nlohmann::json::array();
        for (ClassId c : r.expected) exp.push_back(class_name(c));
        row["expected_modes"] = exp;
        row["mismatches"] = r.mismatches;
        j.push_back(row);
    }
    return j;
}

// ---------------------------------------------------------------------------

namespace {

double gamma_at(const Point& u, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("gamma_ratio: r must be positive");
    static const Measure1D odd =
        Measure1D::from_components({}, {families::wgap_blocks(0.0, 1.0, 0.0)}, 1.0, "odd blocks");
    static const Measure1D even =
        Measure1D::from_components({}, {families::wgap_blocks(0.0, 0.0, 1.0)}, 1.0, "even blocks");
    const double mo = odd.ball_mass(u, r).value;
    const double me = even.ball_mass(u, r).value;
    if (mo == 0.0) return me == 0.0 ? 0.0 : kInf;
    return me / mo;
}

}  // namespace

double gamma_ratio(double u, double r) { return gamma_at(Point(u), r); }

nlohmann::json GammaReport::to_json() const {
    return {{"probes", probes},         {"max_gamma", max_gamma}, {"argmax_u", max_gamma_u}, {"argmax_r", max_gamma_r},
            {"gamma_ok", gamma_ok},     {"ratio_probes", ratio_probes}, {"max_ratio", max_ratio}, {"ratio_ok", ratio_ok}};
}

GammaReport gamma_grid(int u_per_block, int r_per_u, int k_max) {
    if (u_per_block < 1 || r_per_u < 1) throw std::invalid_argument("gamma_grid: grid sizes must be positive");
    const Measure1D mu = example_measure(ExampleId::WGAPNotGWAP);
    GammaReport rep;
    // Ends of C_k: (m_k, m_{k-1}] with m_k = (a_k + b_{k+1}) / 2 and m_0 = 3/4.
    auto m = [](long k) {
        if (k == 0) return 0.75;
        const double a = std::ldexp(1.0, -static_cast<int>(k)) - std::ldexp(1.0, -static_cast<int>(4 * k));
        const double b = std::ldexp(1.0, -static_cast<int>(k + 1)) + std::ldexp(1.0, -static_cast<int>(4 * k + 4));
        return 0.5 * (a + b);
    };
    for (long k = 1; k <= k_max; k += 2) {
        const double lo = m(k), hi = std::min(m(k - 1), 0.5);
        for (int i = 0; i < u_per_block; ++i) {
            // Interior points, denser towards the dense block A_k.
            const double t = (i + 0.5) / u_per_block;
            const double u = lo + (hi - lo) * t;
            const double rmax = std::min(0.25, 0.5 - u);
            const double rmin = std::ldexp(1.0, -static_cast<int>(4 * k + 8));
            for (int j = 0; j < r_per_u; ++j) {
                const double s = r_per_u == 1 ? 1.0 : static_cast<double>(j) / (r_per_u - 1);
                const double r = rmin * std::pow(rmax / rmin, s);
                const double g = gamma_ratio(u, r);
                ++rep.probes;
                if (g > rep.max_gamma) {
                    rep.max_gamma = g;
                    rep.max_gamma_u = u;
                    rep.max_gamma_r = r;
                }
                if (r <= 1.0 / 16.0) {
                    const double x = ratio(mu, Point(u), Point(1.0, u), r);
                    ++rep.ratio_probes;
                    rep.max_ratio = std::max(rep.max_ratio, x);
                }
            }
        }
        // The centre of the dense block and its edges.
        for (double e : {0.0, std::ldexp(1.0, -static_cast<int>(4 * k)), -std::ldexp(1.0, -static_cast<int>(4 * k))}) {
            const Point u(0.0, std::ldexp(1.0, -static_cast<int>(k)), e);
            const double rmax = std::min(0.25, 0.5 - u.value());
            if (!(rmax > 0.0)) continue;  // the k = 1 centre sits on the boundary 1/2
            const double rmin = std::ldexp(1.0, -static_cast<int>(4 * k + 8));
            for (int j = 0; j < r_per_u; ++j) {
                const double s = r_per_u == 1 ? 1.0 : static_cast<double>(j) / (r_per_u - 1);
                const double r = rmin * std::pow(rmax / rmin, s);
                const double g = gamma_at(u, r);
                ++rep.probes;
                if (g > rep.max_gamma) {
                    rep.max_gamma = g;
                    rep.max_gamma_u = u.value();
                    rep.max_gamma_r = r;
                }
            }
        }
    }
    rep.gamma_ok = rep.max_gamma <= 8.0;
    rep.ratio_ok = rep.max_ratio <= 0.9 + 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------

bool MergingReport::ok() const {
    return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const MergingCase& c) { return c.ok; });
}

nlohmann::json MergingReport::to_json() const {
    nlohmann::json j{{"ok", ok()}, {"cases", nlohmann::json::array()}};
    for (const auto& c : cases) j["cases"].push_back({{"label", c.label}, {"ok", c.ok}, {"report", c.report.to_json()}});
    return j;
}

std::string MergingReport::text() const {
    std::ostringstream os;
    for (const auto& c : cases) os << (c.ok ? "ok   " : "FAIL ") << c.label << "\n";
    os << (ok() ? "merging property fails as expected" : "merging report FAILED") << "\n";
    return os.str();
}

MergingReport merging_property_report(const EvalConfig& cfg) {
    MergingReport rep;
    const Measure1D mu = ps_not_gw_measure();
    const Measure1D muA = mu.restrict({{-3.0, -1.0}});
    const Measure1D muB = mu.restrict({{1.0, 3.0}});
    const Measure1D muAB = mu.restrict({{-3.0, -1.0}, {1.0, 3.0}});
    const Measure1D full = mu.restrict({{-kInf, kInf}});
    const PoolSpec p = ps_not_gw_restricted_pools();
    rep.cases.push_back(merging_case("PS-not-GW: -2 is an s-mode of mu|A", muA, -2.0, ClassId::s, Claim::IsMode, p, cfg));
    rep.cases.push_back(merging_case("PS-not-GW: 2 is an s-mode of mu|B", muB, 2.0, ClassId::s, Claim::IsMode, p, cfg));
    for (double u : {-2.0, 2.0}) {
        const std::string pt = u < 0 ? "-2" : "2";
        rep.cases.push_back(merging_case("PS-not-GW: " + pt + " is a ps-mode of mu|AuB", muAB, u, ClassId::ps, Claim::IsMode, p, cfg));
        rep.cases.push_back(merging_case("PS-not-GW: " + pt + " is not a gs-mode of mu|AuB", muAB, u, ClassId::gs, Claim::IsNotMode, p, cfg));
        rep.cases.push_back(merging_case("PS-not-GW: " + pt + " is not a w-mode of mu|AuB", muAB, u, ClassId::w, Claim::IsNotMode, p, cfg));
    }
    PoolSpec p0 = p;
    p0.cp = {-2.0, 2.0, 0.5, -0.5};
    rep.cases.push_back(merging_case("PS-not-GW: restriction to the whole line keeps the s-mode at 0", full, 0.0, ClassId::s,
                                     Claim::IsMode, p0, cfg));
    for (auto& c : suspension_cases(cfg)) rep.cases.push_back(std::move(c));
    return rep;
}

// ---------------------------------------------------------------------------

nlohmann::json VerifyResult::to_json() const {
    nlohmann::json j{{"example", example_name(id)}, {"ok", ok}, {"certificates", nlohmann::json::array()}};
    for (const auto& r : reports) j["certificates"].push_back(r.to_json());
    j["extra"] = extra;
    return j;
}

VerifyResult verify_example(ExampleId id, const EvalConfig& cfg) {
    VerifyResult res;
    res.id = id;
    if (!is_one_dimensional(id)) throw std::invalid_argument("verify_example: sequence-space examples live in the ell2 engine");
    if (id == ExampleId::SuspensionExt) {
        bool ok = true;
        for (auto& c : suspension_cases(cfg)) {
            ok = ok && c.ok;
            res.reports.push_back(std::move(c.report));
        }
        res.ok = ok;
        return res;
    }
    const ExampleBundle b = build_example(id);
    bool ok = true;
    for (const auto& cert : example_certificates(b, cfg)) {
        res.reports.push_back(verify_certificate(b.measure, cert));
        ok = ok && res.reports.back().verdict == Verdict::Pass;
    }
    const SequenceGen r2 = pow2_seq(1, 0, "2^-n");
    const int N = cfg.N;
    auto casio = [&](double u) {
        auto rep = casio_check(b.measure, u, common_as_offsets(), {r2, pow2_seq(2, 0, "4^-n")}, N, cfg.tol);
        // Offsets are relative to u.
        return rep;
    };
    switch (id) {
        case ExampleId::ENotPGS: {
            auto om = om_check(b.measure, {0.0}, {0.0}, {0.3, 1.0, 2.0}, r2, N, 1e-6);
            auto cs = casio(0.0);
            res.extra = {{"om", om.to_json()}, {"casio", cs.to_json()}};
            ok = ok && om.ok && cs.ok;
            break;
        }
        case ExampleId::WNotEPGS: {
            std::vector<double> E = {0.0, 1.0, 2.0, 3.0, 4.0}, I = {0.0};
            for (int k = 1; k <= 4; ++k) I.push_back(-std::log(1.0 - 1.0 / (4.0 * k)));
            auto om = om_check(b.measure, E, I, {1.3, 2.7, -0.7}, r2, N, 1e-6);
            res.extra = {{"om", om.to_json()}};
            ok = ok && om.ok;
            break;
        }
        case ExampleId::GSNotWP: {
            auto om = om_check(b.measure, {0.0, 0.25, 0.5, 1.0}, {std::log(2.0), 0.0, 0.0, std::log(2.0)}, {-0.5, 1.5}, r2, N, 1e-6);
            res.extra = {{"om", om.to_json()}};
            ok = ok && om.ok;
            break;
        }
        case ExampleId::PGSNotGS: {
            auto om = om_check(b.measure, {kPgsC}, {0.0}, {0.0, 0.3}, r2, N, 1e-6);
            res.extra = {{"om", om.to_json()}};
            ok = ok && om.ok;
            break;
        }
        case ExampleId::WGAPNotGWAP: {
            auto om = om_check(b.measure, {kPgsC}, {0.0}, {0.0, 1.0, 2.0}, r2, N, 1e-6);
            res.extra = {{"om", om.to_json()}};
            ok = ok && om.ok;
            break;
        }
        case ExampleId::PSNotGW:
        case ExampleId::WPNotPWPGS: {
            nlohmann::json arr = nlohmann::json::array();
            const std::vector<double> pts = id == ExampleId::PSNotGW ? std::vector<double>{-2.0, 0.0, 2.0}
                                                                       : std::vector<double>{0.0, 2.0, 4.0, 6.0};
            for (double u : pts) {
                std::vector<SequenceGen> as;
                for (const auto& g : common_as_offsets()) as.push_back(retarget(g, u));
                auto cs = casio_check(b.measure, u, as, {r2, pow2_seq(2, 0, "4^-n")}, N, cfg.tol);
                arr.push_back({{"u", u}, {"casio", cs.to_json()}});
                ok = ok && cs.ok;
            }
            res.extra = {{"casio", arr}};
            break;
        }
        default: break;
    }
    res.ok = ok;
    return res;
}

}  // namespace modelattice
