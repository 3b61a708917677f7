#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "modelattice/quantifier.hpp"

using namespace modelattice;

namespace {

// Grammar oracle written independently of the library: every ordering of a
// variable subset containing ns, with cs only after cp, and either polarity
// on each variable.
std::set<std::string> brute_force_strings() {
    const std::vector<std::string> vars = {"ns", "as", "cp", "cs"};
    std::set<std::string> out;
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<std::string> chosen;
        for (int b = 0; b < 4; ++b)
            if (mask & (1 << b)) chosen.push_back(vars[static_cast<std::size_t>(b)]);
        if (std::find(chosen.begin(), chosen.end(), "ns") == chosen.end()) continue;
        std::sort(chosen.begin(), chosen.end());
        do {
            auto cp = std::find(chosen.begin(), chosen.end(), "cp");
            auto cs = std::find(chosen.begin(), chosen.end(), "cs");
            if (cs != chosen.end() && (cp == chosen.end() || cp > cs)) continue;
            const int k = static_cast<int>(chosen.size());
            for (int pol = 0; pol < (1 << k); ++pol) {
                std::string s = "[";
                for (int i = 0; i < k; ++i) {
                    if (i) s += " ";
                    s += ((pol >> i) & 1) ? "E" : "A";
                    s += chosen[static_cast<std::size_t>(i)];
                }
                out.insert(s + "]");
            }
        } while (std::next_permutation(chosen.begin(), chosen.end()));
    }
    return out;
}

// Table of equivalent definitions, transcribed as plain strings.
const std::map<std::string, std::vector<std::string>>& equivalents() {
    static const std::map<std::string, std::vector<std::string>> t = {
        {"s", {"[Ans]", "[Eas Ans]"}},
        {"gs", {"[Ans Eas]"}},
        {"ps", {"[Ens]", "[Aas Ens]"}},
        {"pgs", {"[Ens Eas]"}},
        {"e", {"[Acp Acs Eas Ans]"}},
        {"w",
         {"[Ans Acp]", "[Eas Ans Acp]", "[Acp Eas Ans]", "[Acp Ecs Ans]", "[Eas Acp Ecs Ans]", "[Acp Eas Ecs Ans]"}},
        {"pw", {"[Ens Acp]", "[Aas Ens Acp]"}},
        {"wp", {"[Acp Ens]", "[Aas Acp Ens]", "[Acp Acs Ens]", "[Aas Acp Acs Ens]"}},
        {"gwap", {"[Eas Acp Acs Ens]"}},
        {"wgap", {"[Acp Eas Acs Ens]"}},
    };
    return t;
}

// Normal form oracle: sort each maximal run of equal polarity by ns < as < cp < cs.
std::string normal_form_oracle(const ModeDefinition& d) {
    auto rank = [](Var v) { return static_cast<int>(v); };
    std::vector<Quantifier> q = d.quantifiers();
    std::size_t i = 0;
    while (i < q.size()) {
        std::size_t j = i;
        while (j < q.size() && q[j].polarity == q[i].polarity) ++j;
        std::sort(q.begin() + static_cast<long>(i), q.begin() + static_cast<long>(j),
                  [&](const Quantifier& a, const Quantifier& b) { return rank(a.variable) < rank(b.variable); });
        i = j;
    }
    return ModeDefinition(q).ascii();
}

}  // namespace

TEST_CASE("enumeration matches the brute-force grammar", "[quantifier]") {
    const auto defs = enumerate_definitions();
    std::set<std::string> got;
    for (const auto& d : defs) got.insert(d.ascii());
    REQUIRE(defs.size() == 282);
    REQUIRE(got.size() == 282);
    REQUIRE(got == brute_force_strings());
    REQUIRE(std::is_sorted(defs.begin(), defs.end()));
}

TEST_CASE("length one strings are exactly the two ns quantifiers", "[quantifier]") {
    std::set<std::string> singles;
    for (const auto& d : enumerate_definitions())
        if (d.size() == 1) singles.insert(d.ascii());
    REQUIRE(singles == std::set<std::string>{"[Ans]", "[Ens]"});
}

TEST_CASE("parsing accepts ascii and logical symbols and rejects bad strings", "[quantifier]") {
    REQUIRE(parse_definition("[∀ns ∃as]") == parse_definition("[Ans Eas]"));
    REQUIRE(parse_definition("[Ans Eas]").pretty() == "[∀ns ∃as]");
    REQUIRE_THROWS_AS(parse_definition("[Acs Ans]"), std::invalid_argument);   // cs before cp
    REQUIRE_THROWS_AS(parse_definition("[Eas]"), std::invalid_argument);       // no ns
    REQUIRE_THROWS_AS(parse_definition("[Ans Ens]"), std::invalid_argument);   // ns twice
    REQUIRE_THROWS_AS(parse_definition("[Xns]"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_definition("Ans"), std::invalid_argument);
}

TEST_CASE("star indicators follow the variables present", "[quantifier]") {
    const auto d = parse_definition("[Acp Ecs Ans]");
    REQUIRE(d.star1() == Star1::CandidatePoint);
    REQUIRE(d.star2() == Star2::ComparisonSequence);
    REQUIRE(parse_definition("[Ans Eas]").star1() == Star1::ApproxSequence);
    REQUIRE(parse_definition("[Ans Eas]").star2() == Star2::Sup);
    REQUIRE(parse_definition("[Ans Acp]").star2() == Star2::ComparisonPoint);
}

TEST_CASE("logical normal forms agree with an independent sort and number 144", "[quantifier]") {
    std::set<std::string> forms;
    for (const auto& d : enumerate_definitions()) {
        const auto n = logical_normal_form(d);
        REQUIRE(n.ascii() == normal_form_oracle(d));
        REQUIRE(logical_normal_form(n) == n);
        REQUIRE(is_grammatical(n));
        forms.insert(n.ascii());
    }
    REQUIRE(forms.size() == 144);
    REQUIRE(logical_normal_form(parse_definition("[Ens Eas Acp]")) ==
            logical_normal_form(parse_definition("[Eas Ens Acp]")));
    REQUIRE(logical_normal_form(parse_definition("[Ans]")) == parse_definition("[Ans]"));
}

TEST_CASE("elimination verdicts on named strings", "[quantifier]") {
    REQUIRE(elimination_verdict(parse_definition("[Ans]")).meaningful);
    const auto ap = elimination_verdict(parse_definition("[Ecp Ans]"));
    REQUIRE_FALSE(ap.meaningful);
    REQUIRE(ap.rule == Rule::AP_a);
    const auto cp = elimination_verdict(parse_definition("[Ans Eas Acp]"));
    REQUIRE_FALSE(cp.meaningful);
    REQUIRE(cp.rule == Rule::CP_c);
    for (const auto& d : enumerate_definitions()) {
        const auto v = elimination_verdict(d);
        if (!v.meaningful) REQUIRE(v.rule.has_value());
    }
}

TEST_CASE("elimination verdict is constant on logical classes", "[quantifier][property]") {
    for (const auto& d : enumerate_definitions()) {
        const auto v = elimination_verdict(d);
        const auto n = elimination_verdict(logical_normal_form(d));
        REQUIRE(v.meaningful == n.meaningful);
        REQUIRE(v.rule == n.rule);
        for (const auto& m : logical_class_members(d)) {
            REQUIRE(logical_normal_form(m) == logical_normal_form(d));
            REQUIRE(elimination_verdict(m).meaningful == v.meaningful);
        }
    }
}

TEST_CASE("surviving strings are exactly the table of equivalents", "[quantifier]") {
    std::set<std::string> expected;
    for (const auto& [cls, members] : equivalents()) expected.insert(members.begin(), members.end());
    REQUIRE(expected.size() == 21);

    std::set<std::string> table_meaningful;
    for (const auto& row : emit_table())
        if (row.meaningful) table_meaningful.insert(row.definition.ascii());
    REQUIRE(table_meaningful == expected);

    // Every string whose logical class meets the table is meaningful, and no other.
    std::set<std::string> closure;
    for (const auto& s : expected)
        for (const auto& m : logical_class_members(parse_definition(s))) closure.insert(m.ascii());
    for (const auto& d : enumerate_definitions())
        REQUIRE(elimination_verdict(d).meaningful == (closure.count(d.ascii()) == 1));
}

TEST_CASE("class membership, designated strings and letters", "[quantifier]") {
    for (ClassId c : kAllClasses) {
        const auto& want = equivalents().at(class_name(c));
        std::vector<std::string> got;
        for (const auto& m : class_members(c)) got.push_back(m.ascii());
        REQUIRE(got == want);
        REQUIRE(class_definition(c).ascii() == want.front());
        REQUIRE(class_from_name(class_name(c)) == c);
        for (const auto& s : want) REQUIRE(canonical_class(parse_definition(s)) == c);
        REQUIRE(letter_notation(class_definition(c)) == class_name(c));
    }
    REQUIRE(canonical_class(parse_definition("[Eas Ans]")) == ClassId::s);
    REQUIRE(canonical_class(parse_definition("[Acp Eas Ecs Ans]")) == ClassId::w);
    REQUIRE(canonical_class(parse_definition("[Aas Acp Acs Ens]")) == ClassId::wp);
    REQUIRE_THROWS_AS(canonical_class(parse_definition("[Ecp Ans]")), std::invalid_argument);
    REQUIRE(letter_notation(parse_definition("[Acp Acs Eas Ans]")) == std::string("e"));
    REQUIRE_FALSE(letter_notation(parse_definition("[Ecp Ans]")).has_value());
    REQUIRE_THROWS_AS(class_from_name("xyz"), std::invalid_argument);
}

TEST_CASE("table export", "[quantifier]") {
    const auto rows = emit_table();
    REQUIRE(rows.size() == 282);
    long self_logical = 0, meaningful = 0, canonical = 0;
    for (const auto& r : rows) {
        REQUIRE(r.logical_rep <= r.index);
        REQUIRE(r.canonical_rep.has_value() == r.meaningful);
        if (r.logical_rep == r.index) ++self_logical;
        if (r.meaningful) ++meaningful;
        if (r.canonical_rep && *r.canonical_rep == r.index) ++canonical;
        if (!r.meaningful && r.logical_rep == r.index) REQUIRE(r.rule.has_value());
    }
    REQUIRE(self_logical == 144);
    REQUIRE(meaningful == 21);
    REQUIRE(canonical == 10);

    const auto first_s = std::find_if(rows.begin(), rows.end(), [](const TableRow& r) { return r.definition.ascii() == "[Ans]"; });
    REQUIRE(first_s != rows.end());
    REQUIRE(first_s->meaningful);
    REQUIRE(first_s->canonical_rep == first_s->index);

    const std::string csv = table_csv(rows);
    REQUIRE(csv.rfind("index,string,logical_rep,meaningful,rule,canonical_rep,letter\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 283);
    REQUIRE(table_csv(emit_table()) == csv);
    REQUIRE(table_json(rows).find("\"meaningful\"") != std::string::npos);
}
