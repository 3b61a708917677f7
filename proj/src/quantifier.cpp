#include "modelattice/quantifier.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace modelattice {

namespace {

constexpr std::array<Var, 4> kVars = {Var::ns, Var::as, Var::cp, Var::cs};

const char* var_text(Var v) {
    switch (v) {
        case Var::ns: return "ns";
        case Var::as: return "as";
        case Var::cp: return "cp";
        case Var::cs: return "cs";
    }
    return "?";
}

std::vector<Quantifier> alphabet() {
    std::vector<Quantifier> a;
    for (Var v : kVars) {
        a.push_back({Polarity::ForAll, v});
        a.push_back({Polarity::Exists, v});
    }
    return a;
}

Quantifier A(Var v) { return {Polarity::ForAll, v}; }
Quantifier E(Var v) { return {Polarity::Exists, v}; }

// Maximal runs of equal polarity, as [begin, end) pairs.
std::vector<std::pair<std::size_t, std::size_t>> polarity_runs(const ModeDefinition& d) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t i = 0;
    while (i < d.size()) {
        std::size_t j = i;
        while (j < d.size() && d[j].polarity == d[i].polarity) ++j;
        runs.emplace_back(i, j);
        i = j;
    }
    return runs;
}

bool before(int a, int b) { return a >= 0 && b >= 0 && a < b; }

int pos_with(const ModeDefinition& d, Polarity p, Var v) {
    int i = d.position(v);
    if (i < 0 || d[static_cast<std::size_t>(i)].polarity != p) return -1;
    return i;
}

}  // namespace

int alphabet_index(Quantifier q) {
    return 2 * static_cast<int>(q.variable) + (q.polarity == Polarity::Exists ? 1 : 0);
}

int ModeDefinition::position(Var v) const {
    for (std::size_t i = 0; i < qs_.size(); ++i)
        if (qs_[i].variable == v) return static_cast<int>(i);
    return -1;
}

std::optional<Polarity> ModeDefinition::polarity(Var v) const {
    int i = position(v);
    if (i < 0) return std::nullopt;
    return qs_[static_cast<std::size_t>(i)].polarity;
}

bool ModeDefinition::has(Polarity p, Var v) const { return pos_with(*this, p, v) >= 0; }

Star1 ModeDefinition::star1() const {
    return position(Var::as) >= 0 ? Star1::ApproxSequence : Star1::CandidatePoint;
}

Star2 ModeDefinition::star2() const {
    if (position(Var::cs) >= 0) return Star2::ComparisonSequence;
    if (position(Var::cp) >= 0) return Star2::ComparisonPoint;
    return Star2::Sup;
}

std::string ModeDefinition::ascii() const {
    std::string out = "[";
    for (std::size_t i = 0; i < qs_.size(); ++i) {
        if (i) out += ' ';
        out += qs_[i].polarity == Polarity::ForAll ? 'A' : 'E';
        out += var_text(qs_[i].variable);
    }
    return out + "]";
}

std::string ModeDefinition::pretty() const {
    std::string out = "[";
    for (std::size_t i = 0; i < qs_.size(); ++i) {
        if (i) out += ' ';
        out += qs_[i].polarity == Polarity::ForAll ? "∀" : "∃";
        out += var_text(qs_[i].variable);
    }
    return out + "]";
}

bool operator<(const ModeDefinition& a, const ModeDefinition& b) {
    return std::lexicographical_compare(
        a.qs_.begin(), a.qs_.end(), b.qs_.begin(), b.qs_.end(),
        [](Quantifier x, Quantifier y) { return alphabet_index(x) < alphabet_index(y); });
}

bool is_grammatical(const ModeDefinition& d) {
    if (d.size() == 0 || d.size() > 4) return false;
    int counts[4] = {0, 0, 0, 0};
    for (const auto& q : d.quantifiers()) ++counts[static_cast<int>(q.variable)];
    for (int c : counts)
        if (c > 1) return false;
    if (counts[0] != 1) return false;
    int cs = d.position(Var::cs);
    if (cs >= 0 && !before(d.position(Var::cp), cs)) return false;
    return true;
}

ModeDefinition parse_definition(std::string_view text) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("cannot parse mode definition '" + std::string(text) + "': " + why);
    };
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
    };
    skip_ws();
    if (i >= text.size() || text[i] != '[') fail("expected '['");
    ++i;
    std::vector<Quantifier> qs;
    for (;;) {
        skip_ws();
        if (i >= text.size()) fail("missing ']'");
        if (text[i] == ']') {
            ++i;
            break;
        }
        Polarity p;
        if (text[i] == 'A') {
            p = Polarity::ForAll;
            ++i;
        } else if (text[i] == 'E') {
            p = Polarity::Exists;
            ++i;
        } else if (text.substr(i, 3) == "∀") {
            p = Polarity::ForAll;
            i += 3;
        } else if (text.substr(i, 3) == "∃") {
            p = Polarity::Exists;
            i += 3;
        } else {
            fail("expected a polarity token at offset " + std::to_string(i));
        }
        auto name = text.substr(i, 2);
        bool found = false;
        for (Var v : kVars) {
            if (name == var_text(v)) {
                qs.push_back({p, v});
                found = true;
            }
        }
        if (!found) fail("unknown variable at offset " + std::to_string(i));
        i += 2;
    }
    skip_ws();
    if (i != text.size()) fail("trailing characters");
    ModeDefinition d(std::move(qs));
    if (!is_grammatical(d)) fail("string is not grammatical");
    return d;
}

std::vector<ModeDefinition> enumerate_definitions() {
    std::vector<ModeDefinition> out;
    const auto alpha = alphabet();
    std::vector<Quantifier> prefix;
    // Depth-first over the alphabet emits every prefix before its extensions,
    // which is lexicographic order.
    auto dfs = [&](auto&& self) -> void {
        if (!prefix.empty()) {
            ModeDefinition d(prefix);
            if (is_grammatical(d)) out.push_back(d);
        }
        if (prefix.size() == 4) return;
        for (const auto& q : alpha) {
            prefix.push_back(q);
            self(self);
            prefix.pop_back();
        }
    };
    dfs(dfs);
    return out;
}

ModeDefinition logical_normal_form(const ModeDefinition& d) {
    std::vector<Quantifier> qs = d.quantifiers();
    for (auto [b, e] : polarity_runs(d)) {
        std::sort(qs.begin() + static_cast<long>(b), qs.begin() + static_cast<long>(e),
                  [](Quantifier x, Quantifier y) { return x.variable < y.variable; });
    }
    return ModeDefinition(std::move(qs));
}

std::vector<ModeDefinition> logical_class_members(const ModeDefinition& d) {
    std::vector<ModeDefinition> out;
    std::vector<Quantifier> qs = logical_normal_form(d).quantifiers();
    const auto runs = polarity_runs(d);
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == runs.size()) {
            ModeDefinition m(qs);
            if (is_grammatical(m)) out.push_back(m);
            return;
        }
        auto [b, e] = runs[k];
        auto first = qs.begin() + static_cast<long>(b);
        auto last = qs.begin() + static_cast<long>(e);
        auto by_var = [](Quantifier x, Quantifier y) { return x.variable < y.variable; };
        std::sort(first, last, by_var);
        do {
            self(self, k + 1);
        } while (std::next_permutation(first, last, by_var));
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::string rule_name(Rule r) {
    static const char* names[] = {"AP-a", "AP-b", "AP-c", "AP-d", "AP-e",
                                  "CP-a", "CP-b", "CP-c", "CP-d", "CP-e"};
    return names[static_cast<int>(r)];
}

std::optional<Rule> matching_rule(const ModeDefinition& d) {
    using P = Polarity;
    if (d.has(P::Exists, Var::cp)) return Rule::AP_a;
    if (d.has(P::ForAll, Var::ns) && d.has(P::ForAll, Var::as)) return Rule::AP_b;
    if (d.has(P::Exists, Var::cs) && d.has(P::Exists, Var::ns)) return Rule::AP_c;
    if (before(pos_with(d, P::Exists, Var::ns), pos_with(d, P::ForAll, Var::as))) return Rule::AP_d;
    if (before(pos_with(d, P::ForAll, Var::ns), pos_with(d, P::Exists, Var::cs))) return Rule::AP_e;
    if (!d.has(P::ForAll, Var::cp)) return std::nullopt;

    const int ns = d.position(Var::ns);
    const int all_cs = pos_with(d, P::ForAll, Var::cs);
    const int ex_as = pos_with(d, P::Exists, Var::as);
    if (before(ns, all_cs) && ex_as < 0) return Rule::CP_a;
    if (d.has(P::Exists, Var::ns) && ex_as >= 0 && all_cs < 0) return Rule::CP_b;
    if (before(pos_with(d, P::ForAll, Var::ns), ex_as) && all_cs < 0) return Rule::CP_c;
    if (before(ns, all_cs) && before(ex_as, all_cs)) return Rule::CP_d;
    if (before(ns, ex_as) && before(all_cs, ex_as)) return Rule::CP_e;
    return std::nullopt;
}

EliminationVerdict elimination_verdict(const ModeDefinition& d) {
    std::optional<Rule> best;
    for (const auto& m : logical_class_members(d)) {
        auto r = matching_rule(m);
        if (r && (!best || *r < *best)) best = r;
    }
    if (best) return {false, best};
    return {true, std::nullopt};
}

std::string class_name(ClassId c) {
    static const char* names[] = {"s", "gs", "ps", "pgs", "e", "w", "pw", "wp", "gwap", "wgap"};
    return names[static_cast<int>(c)];
}

ClassId class_from_name(std::string_view name) {
    for (ClassId c : kAllClasses)
        if (class_name(c) == name) return c;
    throw std::invalid_argument("unknown mode class '" + std::string(name) + "'");
}

std::vector<ModeDefinition> class_members(ClassId c) {
    using V = Var;
    auto D = [](std::initializer_list<Quantifier> q) { return ModeDefinition(std::vector<Quantifier>(q)); };
    switch (c) {
        case ClassId::s: return {D({A(V::ns)}), D({E(V::as), A(V::ns)})};
        case ClassId::gs: return {D({A(V::ns), E(V::as)})};
        case ClassId::ps: return {D({E(V::ns)}), D({A(V::as), E(V::ns)})};
        case ClassId::pgs: return {D({E(V::ns), E(V::as)})};
        case ClassId::e: return {D({A(V::cp), A(V::cs), E(V::as), A(V::ns)})};
        case ClassId::w:
            return {D({A(V::ns), A(V::cp)}),
                    D({E(V::as), A(V::ns), A(V::cp)}),
                    D({A(V::cp), E(V::as), A(V::ns)}),
                    D({A(V::cp), E(V::cs), A(V::ns)}),
                    D({E(V::as), A(V::cp), E(V::cs), A(V::ns)}),
                    D({A(V::cp), E(V::as), E(V::cs), A(V::ns)})};
        case ClassId::pw: return {D({E(V::ns), A(V::cp)}), D({A(V::as), E(V::ns), A(V::cp)})};
        case ClassId::wp:
            return {D({A(V::cp), E(V::ns)}),
                    D({A(V::as), A(V::cp), E(V::ns)}),
                    D({A(V::cp), A(V::cs), E(V::ns)}),
                    D({A(V::as), A(V::cp), A(V::cs), E(V::ns)})};
        case ClassId::gwap: return {D({E(V::as), A(V::cp), A(V::cs), E(V::ns)})};
        case ClassId::wgap: return {D({A(V::cp), E(V::as), A(V::cs), E(V::ns)})};
    }
    return {};
}

ModeDefinition class_definition(ClassId c) { return class_members(c).front(); }

ClassId canonical_class(const ModeDefinition& d) {
    for (ClassId c : kAllClasses) {
        for (const auto& m : class_members(c))
            if (m == d) return c;
    }
    throw std::invalid_argument("definition " + d.pretty() + " is not one of the meaningful definitions");
}

std::optional<std::string> letter_notation(const ModeDefinition& d) {
    using P = Polarity;
    if (!is_grammatical(d)) return std::nullopt;
    if (d == class_definition(ClassId::e)) return "e";
    // No letters exist for an existential comparison point or sequence, nor for
    // a universal approximating sequence.
    if (d.has(P::Exists, Var::cp) || d.has(P::Exists, Var::cs) || d.has(P::ForAll, Var::as))
        return std::nullopt;
    // A universal ns is only implicit when it leads the string.
    const int all_ns = pos_with(d, P::ForAll, Var::ns);
    if (all_ns > 0) return std::nullopt;
    std::string out;
    for (const auto& q : d.quantifiers()) {
        if (q.variable == Var::ns && q.polarity == P::ForAll) continue;
        switch (q.variable) {
            case Var::as: out += 'g'; break;
            case Var::ns: out += 'p'; break;
            case Var::cp: out += 'w'; break;
            case Var::cs: out += 'a'; break;
        }
    }
    if (d.position(Var::cp) < 0) out += 's';
    return out;
}

std::vector<TableRow> emit_table() {
    const auto defs = enumerate_definitions();
    std::map<ModeDefinition, int> index_of;
    for (std::size_t i = 0; i < defs.size(); ++i) index_of[defs[i]] = static_cast<int>(i) + 1;

    std::vector<TableRow> rows;
    rows.reserve(defs.size());
    for (std::size_t i = 0; i < defs.size(); ++i) {
        TableRow row;
        row.index = static_cast<int>(i) + 1;
        row.definition = defs[i];
        row.logical_rep = index_of.at(logical_normal_form(defs[i]));
        const auto verdict = elimination_verdict(defs[i]);
        row.rule = verdict.rule;
        row.meaningful = verdict.meaningful && row.logical_rep == row.index;
        if (row.meaningful) {
            const ClassId c = canonical_class(defs[i]);
            row.canonical_rep = index_of.at(class_definition(c));
        }
        row.letter = letter_notation(defs[i]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "index,string,logical_rep,meaningful,rule,canonical_rep,letter\n";
    for (const auto& r : rows) {
        os << r.index << ',' << r.definition.ascii() << ',' << r.logical_rep << ','
           << (r.meaningful ? "true" : "false") << ',' << (r.rule ? rule_name(*r.rule) : "") << ','
           << (r.canonical_rep ? std::to_string(*r.canonical_rep) : "") << ','
           << r.letter.value_or("") << '\n';
    }
    return os.str();
}

std::string table_json(const std::vector<TableRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["index"] = r.index;
        j["string"] = r.definition.pretty();
        j["logical_rep"] = r.logical_rep;
        j["meaningful"] = r.meaningful;
        j["rule"] = r.rule ? nlohmann::json(rule_name(*r.rule)) : nlohmann::json(nullptr);
        j["canonical_rep"] = r.canonical_rep ? nlohmann::json(*r.canonical_rep) : nlohmann::json(nullptr);
        j["letter"] = r.letter ? nlohmann::json(*r.letter) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace modelattice
