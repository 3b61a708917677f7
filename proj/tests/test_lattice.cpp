#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "modelattice/lattice.hpp"

using namespace modelattice;

namespace {

const std::vector<std::string> kNames = {"s", "gs", "ps", "pgs", "e", "w", "pw", "wp", "gwap", "wgap"};

const std::vector<std::pair<std::string, std::string>> kFigureEdges = {
    {"s", "gs"},  {"s", "ps"},   {"s", "e"},      {"gs", "pgs"},  {"ps", "pgs"},   {"ps", "pw"},
    {"e", "w"},   {"w", "pw"},   {"pw", "wp"},    {"wp", "gwap"}, {"pgs", "gwap"}, {"gwap", "wgap"},
};

// Reflexive-transitive closure computed here by Floyd-Warshall, independent
// of the library's order computation. leq[x][y] means x lies below y.
struct Order {
    std::vector<std::vector<bool>> leq;
    int n = 0;

    Order(const std::vector<std::string>& names, const std::vector<std::pair<std::string, std::string>>& edges)
        : n(static_cast<int>(names.size())) {
        leq.assign(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
        auto idx = [&](const std::string& s) {
            return static_cast<std::size_t>(std::find(names.begin(), names.end(), s) - names.begin());
        };
        for (std::size_t i = 0; i < leq.size(); ++i) leq[i][i] = true;
        for (const auto& [hi, lo] : edges) leq[idx(lo)][idx(hi)] = true;
        for (std::size_t k = 0; k < leq.size(); ++k)
            for (std::size_t i = 0; i < leq.size(); ++i)
                for (std::size_t j = 0; j < leq.size(); ++j)
                    if (leq[i][k] && leq[k][j]) leq[i][j] = true;
    }

    bool le(int a, int b) const { return leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }

    int meet(int a, int b) const {
        int best = -1;
        for (int c = 0; c < n; ++c)
            if (le(c, a) && le(c, b) && (best < 0 || le(best, c))) best = c;
        for (int c = 0; c < n; ++c)
            if (le(c, a) && le(c, b) && !le(c, best)) return -1;
        return best;
    }
    int join(int a, int b) const {
        int best = -1;
        for (int c = 0; c < n; ++c)
            if (le(a, c) && le(b, c) && (best < 0 || le(c, best))) best = c;
        for (int c = 0; c < n; ++c)
            if (le(a, c) && le(b, c) && !le(best, c)) return -1;
        return best;
    }
};

int id(const ClassLattice& L, const std::string& s) { return L.index_of(s); }

}  // namespace

TEST_CASE("main lattice order agrees with an independent closure", "[lattice]") {
    const auto L = build_main_lattice();
    REQUIRE(L.names() == kNames);
    const Order O(kNames, kFigureEdges);
    for (int a = 0; a < L.size(); ++a)
        for (int b = 0; b < L.size(); ++b) {
            REQUIRE(L.below(a, b) == O.le(a, b));
            REQUIRE(L.meet(a, b).value_or(-1) == O.meet(a, b));
            REQUIRE(L.join(a, b).value_or(-1) == O.join(a, b));
        }
    REQUIRE(L.hasse().size() == kFigureEdges.size());
}

TEST_CASE("named meets, joins and extremes", "[lattice]") {
    const auto L = build_main_lattice();
    REQUIRE(L.names()[static_cast<std::size_t>(*L.top())] == "s");
    REQUIRE(L.names()[static_cast<std::size_t>(*L.bottom())] == "wgap");
    REQUIRE(*L.meet(id(L, "gs"), id(L, "e")) == id(L, "gwap"));
    REQUIRE(*L.join(id(L, "ps"), id(L, "e")) == id(L, "s"));
    REQUIRE(*L.meet(id(L, "ps"), id(L, "w")) == id(L, "pw"));
    REQUIRE(L.below(id(L, "wgap"), id(L, "s")));
    REQUIRE_FALSE(L.below(id(L, "e"), id(L, "ps")));
    REQUIRE_THROWS_AS(L.index_of("nope"), std::out_of_range);
}

TEST_CASE("main lattice is a complete lattice but not distributive", "[lattice]") {
    const auto L = build_main_lattice();
    const auto rep = validate_lattice(L);
    REQUIRE(rep.partial_order);
    REQUIRE(rep.lattice);
    REQUIRE(rep.complete);
    REQUIRE(rep.triples_checked == 1000);

    // Count failures of a ^ (b v c) = (a ^ b) v (a ^ c) with the independent order.
    const Order O(kNames, kFigureEdges);
    long bad = 0;
    for (int a = 0; a < O.n; ++a)
        for (int b = 0; b < O.n; ++b)
            for (int c = 0; c < O.n; ++c)
                if (O.meet(a, O.join(b, c)) != O.join(O.meet(a, b), O.meet(a, c))) ++bad;
    REQUIRE(bad == 34);
    REQUIRE_FALSE(rep.distributive);
    const long reported = std::count_if(rep.violations.begin(), rep.violations.end(),
                                        [](const LawViolation& v) { return v.law == "distributivity"; });
    REQUIRE(reported == bad);

    // A pentagon inside the lattice: gwap < pgs < gs, with e beside the chain.
    const int gs = id(L, "gs"), ps = id(L, "ps"), e = id(L, "e"), pgs = id(L, "pgs");
    REQUIRE(*L.meet(gs, *L.join(ps, e)) == gs);
    REQUIRE(*L.join(*L.meet(gs, ps), *L.meet(gs, e)) == pgs);
}

TEST_CASE("validation flags a non-lattice and a cyclic relation", "[lattice]") {
    // Two incomparable maximal elements: no top, no join.
    const ClassLattice vee({"a", "b", "c"}, {{0, 2}, {1, 2}});
    const auto r = validate_lattice(vee);
    REQUIRE(r.partial_order);
    REQUIRE_FALSE(r.lattice);

    const ClassLattice cyc({"a", "b"}, {{0, 1}, {1, 0}});
    REQUIRE_FALSE(validate_lattice(cyc).partial_order);

    const ClassLattice chain({"a", "b", "c"}, {{0, 1}, {1, 2}});
    REQUIRE(validate_lattice(chain).ok());
}

TEST_CASE("every main edge has a syntactic derivation or is marked as data", "[lattice]") {
    const auto ed = derive_main_edges();
    REQUIRE(ed.size() == kFigureEdges.size());
    for (const auto& d : ed) {
        if (d.derived) REQUIRE(d.chain.size() >= 2);
    }
}

TEST_CASE("downsets and minimum separating family", "[lattice]") {
    const auto L = build_main_lattice();
    const Order O(kNames, kFigureEdges);

    // Independent downset enumeration over all 2^10 subsets.
    std::set<unsigned> oracle;
    for (unsigned m = 0; m < (1u << O.n); ++m) {
        bool closed = true;
        for (int y = 0; y < O.n && closed; ++y)
            if (m & (1u << y))
                for (int x = 0; x < O.n; ++x)
                    if (O.le(x, y) && !(m & (1u << x))) closed = false;
        if (closed) oracle.insert(m);
    }
    std::set<unsigned> got;
    for (const auto& d : downsets(L)) {
        unsigned m = 0;
        for (int i : d) m |= 1u << i;
        got.insert(m);
    }
    REQUIRE(got == oracle);

    const auto fam = min_separating_family(L);
    REQUIRE(fam.size == 6);
    REQUIRE(fam.family.size() == 6);
    REQUIRE(separates(L, fam.family));
    REQUIRE(fam.sizes_ruled_out == std::vector<int>{1, 2, 3, 4, 5});

    // Independent check that the family separates every pair x not-below y.
    std::vector<unsigned> masks;
    for (const auto& d : fam.family) {
        unsigned m = 0;
        for (int i : d) m |= 1u << i;
        REQUIRE(oracle.count(m) == 1);
        masks.push_back(m);
    }
    for (int x = 0; x < O.n; ++x)
        for (int y = 0; y < O.n; ++y) {
            if (x == y || O.le(x, y)) continue;
            bool sep = std::any_of(masks.begin(), masks.end(),
                                   [&](unsigned m) { return (m & (1u << y)) && !(m & (1u << x)); });
            REQUIRE(sep);
        }

    const ClassLattice chain({"a", "b"}, {{0, 1}});
    REQUIRE(min_separating_family(chain).size == 1);
}

TEST_CASE("no five downsets separate the main lattice", "[lattice][slow]") {
    // Exhaustive search at size exactly five; smaller families pad up to five.
    const Order O(kNames, kFigureEdges);
    std::vector<unsigned> ds;
    for (unsigned m = 0; m < (1u << O.n); ++m) {
        bool closed = true;
        for (int y = 0; y < O.n && closed; ++y)
            if (m & (1u << y))
                for (int x = 0; x < O.n; ++x)
                    if (O.le(x, y) && !(m & (1u << x))) closed = false;
        if (closed) ds.push_back(m);
    }
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < O.n; ++x)
        for (int y = 0; y < O.n; ++y)
            if (x != y && !O.le(x, y)) pairs.emplace_back(x, y);
    // For each downset, the bitmask of pairs it separates.
    std::vector<unsigned long long> cover;
    for (unsigned m : ds) {
        unsigned long long c = 0;
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if ((m & (1u << pairs[p].second)) && !(m & (1u << pairs[p].first))) c |= 1ull << p;
        cover.push_back(c);
    }
    REQUIRE(pairs.size() <= 64);
    const unsigned long long all = pairs.size() == 64 ? ~0ull : (1ull << pairs.size()) - 1;
    bool found = false;
    const std::size_t k = cover.size();
    for (std::size_t a = 0; a < k && !found; ++a)
        for (std::size_t b = a; b < k && !found; ++b)
            for (std::size_t c = b; c < k && !found; ++c)
                for (std::size_t d = c; d < k && !found; ++d) {
                    const unsigned long long abcd = cover[a] | cover[b] | cover[c] | cover[d];
                    for (std::size_t e = d; e < k; ++e)
                        if ((abcd | cover[e]) == all) {
                            found = true;
                            break;
                        }
                }
    REQUIRE_FALSE(found);
}

TEST_CASE("quotient scenarios", "[lattice]") {
    const std::vector<std::pair<std::string, int>> expected = {
        {"CASIO", 6},           {"CASIO-everywhere", 5},    {"OM", 8},
        {"CASIO+OM", 4},        {"CASIO+OM-everywhere", 3}, {"exists-s", 4},
        {"exists-s+CASIO", 2},  {"exists-s+OM", 3},         {"exists-s+CASIO+OM", 1},
        {"Gaussian-continuous", 3}, {"Gaussian-strong", 1},
    };
    const auto checks = check_all_quotients();
    REQUIRE(checks.size() == expected.size());
    for (std::size_t i = 0; i < checks.size(); ++i) {
        INFO(checks[i].name << " " << checks[i].error);
        REQUIRE(checks[i].name == expected[i].first);
        REQUIRE(checks[i].nodes == expected[i].second);
        REQUIRE(checks[i].ok());
    }
    REQUIRE(find_scenario("OM").expected_nodes == 8);
    REQUIRE_THROWS_AS(find_scenario("bogus"), std::invalid_argument);
}

TEST_CASE("quotient edge cases", "[lattice]") {
    const auto L = build_main_lattice();
    std::vector<std::vector<std::string>> singletons;
    for (const auto& n : kNames) singletons.push_back({n});
    const auto Q = quotient_lattice(L, singletons);
    REQUIRE(Q.size() == L.size());
    for (int a = 0; a < L.size(); ++a)
        for (int b = 0; b < L.size(); ++b) REQUIRE(Q.below(a, b) == L.below(a, b));

    REQUIRE_THROWS_AS(quotient_lattice(L, {{"s", "gs"}}), std::invalid_argument);  // not a partition
    // Identifying s with wgap but nothing else creates a cycle through the middle.
    std::vector<std::vector<std::string>> bad = {{"s", "wgap"}, {"gs"}, {"ps"}, {"pgs"}, {"e"},
                                                 {"w"}, {"pw"}, {"wp"}, {"gwap"}};
    REQUIRE_THROWS_AS(quotient_lattice(L, bad), std::invalid_argument);
}

TEST_CASE("DOT export", "[lattice]") {
    const std::string dot = build_main_lattice().to_dot();
    REQUIRE(dot.rfind("digraph", 0) == 0);
    std::size_t edges = 0, pos = 0;
    while ((pos = dot.find("->", pos)) != std::string::npos) {
        ++edges;
        pos += 2;
    }
    REQUIRE(edges == 12);
    for (const auto& n : kNames) REQUIRE(dot.find("\"" + n + "\"") != std::string::npos);
}
