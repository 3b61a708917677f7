#include "modelattice/lattice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace modelattice {

ClassLattice::ClassLattice(std::vector<std::string> names, std::vector<std::pair<int, int>> covers,
                           std::vector<std::vector<std::string>> members)
    : names_(std::move(names)), members_(std::move(members)), input_edges_(std::move(covers)) {
    const int n = size();
    if (members_.empty()) {
        for (const auto& nm : names_) members_.push_back({nm});
    }
    leq_.assign(static_cast<std::size_t>(n * n), 0);
    for (int i = 0; i < n; ++i) leq_[static_cast<std::size_t>(i * n + i)] = 1;
    for (auto [a, b] : input_edges_) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw std::out_of_range("edge endpoint out of range");
        leq_[static_cast<std::size_t>(b * n + a)] = 1;  // b <= a
    }
    // Warshall closure.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (leq_[static_cast<std::size_t>(i * n + k)])
                for (int j = 0; j < n; ++j)
                    if (leq_[static_cast<std::size_t>(k * n + j)]) leq_[static_cast<std::size_t>(i * n + j)] = 1;
}

int ClassLattice::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names_[static_cast<std::size_t>(i)] == name) return i;
    throw std::out_of_range("no node named '" + name + "'");
}

std::vector<std::pair<int, int>> ClassLattice::hasse() const {
    std::vector<std::pair<int, int>> out;
    const int n = size();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b || !below(b, a) || below(a, b)) continue;
            bool direct = true;
            for (int m = 0; m < n && direct; ++m) {
                if (m == a || m == b) continue;
                if (below(m, a) && below(b, m) && !below(a, m) && !below(m, b)) direct = false;
            }
            if (direct) out.emplace_back(a, b);
        }
    }
    return out;
}

std::optional<int> ClassLattice::meet(int x, int y) const {
    std::optional<int> best;
    for (int z = 0; z < size(); ++z) {
        if (!below(z, x) || !below(z, y)) continue;
        bool greatest = true;
        for (int w = 0; w < size(); ++w)
            if (below(w, x) && below(w, y) && !below(w, z)) greatest = false;
        if (greatest) {
            if (best) return std::nullopt;  // not antisymmetric
            best = z;
        }
    }
    return best;
}

std::optional<int> ClassLattice::join(int x, int y) const {
    std::optional<int> best;
    for (int z = 0; z < size(); ++z) {
        if (!below(x, z) || !below(y, z)) continue;
        bool least = true;
        for (int w = 0; w < size(); ++w)
            if (below(x, w) && below(y, w) && !below(z, w)) least = false;
        if (least) {
            if (best) return std::nullopt;
            best = z;
        }
    }
    return best;
}

std::optional<int> ClassLattice::top() const {
    for (int t = 0; t < size(); ++t) {
        bool all = true;
        for (int x = 0; x < size(); ++x) all = all && below(x, t);
        if (all) return t;
    }
    return std::nullopt;
}

std::optional<int> ClassLattice::bottom() const {
    for (int b = 0; b < size(); ++b) {
        bool all = true;
        for (int x = 0; x < size(); ++x) all = all && below(b, x);
        if (all) return b;
    }
    return std::nullopt;
}

std::string ClassLattice::to_dot(const std::string& graph_name) const {
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n  rankdir=TB;\n";
    for (int i = 0; i < size(); ++i) {
        const auto& ms = members_[static_cast<std::size_t>(i)];
        std::string label;
        for (std::size_t k = 0; k < ms.size(); ++k) label += (k ? "=" : "") + ms[k];
        os << "  \"" << names_[static_cast<std::size_t>(i)] << "\" [label=\"" << label << "\"];\n";
    }
    for (auto [a, b] : hasse())
        os << "  \"" << names_[static_cast<std::size_t>(a)] << "\" -> \"" << names_[static_cast<std::size_t>(b)]
           << "\";\n";
    os << "}\n";
    return os.str();
}

LatticeReport validate_lattice(const ClassLattice& L) {
    LatticeReport rep;
    const int n = L.size();
    const auto& nm = L.names();
    auto name = [&](int i) { return nm[static_cast<std::size_t>(i)]; };

    for (int a = 0; a < n; ++a) {
        if (!L.below(a, a)) {
            rep.partial_order = false;
            rep.violations.push_back({"reflexivity", {name(a)}});
        }
        for (int b = 0; b < n; ++b) {
            if (a != b && L.below(a, b) && L.below(b, a)) {
                rep.partial_order = false;
                rep.violations.push_back({"antisymmetry", {name(a), name(b)}});
            }
            for (int c = 0; c < n; ++c) {
                if (L.below(a, b) && L.below(b, c) && !L.below(a, c)) {
                    rep.partial_order = false;
                    rep.violations.push_back({"transitivity", {name(a), name(b), name(c)}});
                }
            }
        }
    }

    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (!L.meet(a, b)) {
                rep.lattice = false;
                rep.violations.push_back({"meet exists", {name(a), name(b)}});
            }
            if (!L.join(a, b)) {
                rep.lattice = false;
                rep.violations.push_back({"join exists", {name(a), name(b)}});
            }
        }
    }
    // A finite lattice is complete exactly when it is non-empty with top and bottom.
    if (n == 0 || !L.top() || !L.bottom()) {
        rep.complete = false;
        rep.violations.push_back({"top and bottom exist", {}});
    }

    if (rep.lattice) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                for (int c = 0; c < n; ++c) {
                    ++rep.triples_checked;
                    const int lhs = *L.meet(a, *L.join(b, c));
                    const int rhs = *L.join(*L.meet(a, b), *L.meet(a, c));
                    if (lhs != rhs) {
                        rep.distributive = false;
                        rep.violations.push_back({"distributivity", {name(a), name(b), name(c)}});
                    }
                }
            }
        }
    } else {
        rep.distributive = false;
    }
    return rep;
}

ClassLattice build_main_lattice() {
    std::vector<std::string> names;
    for (ClassId c : kAllClasses) names.push_back(class_name(c));
    auto idx = [](ClassId c) { return static_cast<int>(c); };
    using C = ClassId;
    std::vector<std::pair<int, int>> edges = {
        {idx(C::s), idx(C::gs)},    {idx(C::s), idx(C::ps)},    {idx(C::s), idx(C::e)},
        {idx(C::gs), idx(C::pgs)},  {idx(C::ps), idx(C::pgs)},  {idx(C::ps), idx(C::pw)},
        {idx(C::e), idx(C::w)},     {idx(C::w), idx(C::pw)},    {idx(C::pw), idx(C::wp)},
        {idx(C::wp), idx(C::gwap)}, {idx(C::pgs), idx(C::gwap)}, {idx(C::gwap), idx(C::wgap)},
    };
    return ClassLattice(std::move(names), std::move(edges));
}

namespace {

std::vector<ModeDefinition> weakenings(const ModeDefinition& d) {
    std::vector<ModeDefinition> out;
    const auto& qs = d.quantifiers();
    auto push = [&](std::vector<Quantifier> v) {
        ModeDefinition m(std::move(v));
        if (is_grammatical(m)) out.push_back(std::move(m));
    };
    // forall ns -> exists ns
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (qs[i].variable == Var::ns && qs[i].polarity == Polarity::ForAll) {
            auto v = qs;
            v[i].polarity = Polarity::Exists;
            push(v);
        }
    }
    // Insert exists as: the constant sequence is available to the prover.
    if (d.position(Var::as) < 0) {
        for (std::size_t i = 0; i <= qs.size(); ++i) {
            auto v = qs;
            v.insert(v.begin() + static_cast<long>(i), Quantifier{Polarity::Exists, Var::as});
            push(v);
        }
    }
    // The sup dominates any comparison ball, so a universal comparison point,
    // optionally followed by a universal comparison sequence, may be inserted.
    if (d.position(Var::cp) < 0) {
        for (std::size_t i = 0; i <= qs.size(); ++i) {
            auto v = qs;
            v.insert(v.begin() + static_cast<long>(i), Quantifier{Polarity::ForAll, Var::cp});
            push(v);
            for (std::size_t j = i + 1; j <= v.size(); ++j) {
                auto w = v;
                w.insert(w.begin() + static_cast<long>(j), Quantifier{Polarity::ForAll, Var::cs});
                push(w);
            }
        }
    }
    // Restricting a universal cs to the constant sequence.
    if (d.has(Polarity::ForAll, Var::cs)) {
        auto v = qs;
        v.erase(v.begin() + d.position(Var::cs));
        push(v);
    }
    // Exists x forall y implies forall y exists x.
    for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
        if (qs[i].polarity == Polarity::Exists && qs[i + 1].polarity == Polarity::ForAll) {
            auto v = qs;
            std::swap(v[i], v[i + 1]);
            push(v);
        }
    }
    for (const auto& m : logical_class_members(d)) out.push_back(m);
    return out;
}

}  // namespace

std::vector<EdgeDerivation> derive_main_edges() {
    const ClassLattice L = build_main_lattice();
    std::vector<EdgeDerivation> out;
    for (auto [a, b] : L.hasse()) {
        const ClassId from = static_cast<ClassId>(a);
        const ClassId to = static_cast<ClassId>(b);
        std::set<ModeDefinition> targets;
        for (const auto& m : class_members(to))
            for (const auto& t : logical_class_members(m)) targets.insert(t);

        std::map<ModeDefinition, ModeDefinition> parent;
        std::deque<ModeDefinition> queue;
        for (const auto& m : class_members(from)) {
            for (const auto& t : logical_class_members(m)) {
                if (parent.emplace(t, t).second) queue.push_back(t);
            }
        }
        EdgeDerivation ed{class_name(from), class_name(to), false, {}};
        while (!queue.empty()) {
            ModeDefinition cur = queue.front();
            queue.pop_front();
            if (targets.count(cur)) {
                ed.derived = true;
                std::vector<std::string> chain;
                ModeDefinition x = cur;
                for (;;) {
                    chain.push_back(x.pretty());
                    const auto& p = parent.at(x);
                    if (p == x) break;
                    x = p;
                }
                std::reverse(chain.begin(), chain.end());
                ed.chain = std::move(chain);
                break;
            }
            for (auto& nxt : weakenings(cur)) {
                if (parent.emplace(nxt, cur).second) queue.push_back(nxt);
            }
        }
        out.push_back(std::move(ed));
    }
    return out;
}

std::vector<std::vector<int>> downsets(const ClassLattice& L) {
    const int n = L.size();
    if (n > 24) throw std::invalid_argument("downset enumeration limited to 24 nodes");
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        bool closed = true;
        for (int x = 0; x < n && closed; ++x) {
            if (!(mask >> x & 1u)) continue;
            for (int y = 0; y < n; ++y)
                if (L.below(y, x) && !(mask >> y & 1u)) {
                    closed = false;
                    break;
                }
        }
        if (!closed) continue;
        std::vector<int> s;
        for (int x = 0; x < n; ++x)
            if (mask >> x & 1u) s.push_back(x);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::pair<int, int>> separable_pairs(const ClassLattice& L) {
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x < L.size(); ++x)
        for (int y = 0; y < L.size(); ++y)
            if (x != y && !L.below(x, y)) out.emplace_back(x, y);
    return out;
}

namespace {

unsigned to_mask(const std::vector<int>& s) {
    unsigned m = 0;
    for (int x : s) m |= 1u << x;
    return m;
}

bool separates_masks(const std::vector<std::pair<int, int>>& pairs, const std::vector<unsigned>& fam) {
    for (auto [x, y] : pairs) {
        bool hit = false;
        for (unsigned m : fam)
            if ((m >> y & 1u) && !(m >> x & 1u)) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

}  // namespace

bool separates(const ClassLattice& L, const std::vector<std::vector<int>>& family) {
    std::vector<unsigned> fam;
    for (const auto& s : family) fam.push_back(to_mask(s));
    return separates_masks(separable_pairs(L), fam);
}

SeparatingFamily min_separating_family(const ClassLattice& L) {
    const auto ds = downsets(L);
    const auto pairs = separable_pairs(L);
    std::vector<unsigned> masks;
    for (const auto& s : ds) masks.push_back(to_mask(s));
    SeparatingFamily res;
    if (pairs.empty()) return res;
    const int m = static_cast<int>(masks.size());
    for (int k = 1; k <= m; ++k) {
        std::vector<int> pick(static_cast<std::size_t>(k));
        std::vector<unsigned> fam(static_cast<std::size_t>(k));
        bool found = false;
        // Iterate over k-subsets in lexicographic order.
        std::function<void(int, int)> rec = [&](int depth, int start) {
            if (found) return;
            if (depth == k) {
                if (separates_masks(pairs, fam)) found = true;
                return;
            }
            for (int i = start; i < m && !found; ++i) {
                pick[static_cast<std::size_t>(depth)] = i;
                fam[static_cast<std::size_t>(depth)] = masks[static_cast<std::size_t>(i)];
                rec(depth + 1, i + 1);
            }
        };
        rec(0, 0);
        if (found) {
            res.size = k;
            for (int i : pick) res.family.push_back(ds[static_cast<std::size_t>(i)]);
            return res;
        }
        res.sizes_ruled_out.push_back(k);
    }
    return res;
}

ClassLattice quotient_lattice(const ClassLattice& L, const std::vector<std::vector<std::string>>& partition) {
    const int n = L.size();
    std::vector<int> block(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < partition.size(); ++b) {
        if (partition[b].empty()) throw std::invalid_argument("empty block in partition");
        for (const auto& nm : partition[b]) {
            int i = L.index_of(nm);
            if (block[static_cast<std::size_t>(i)] != -1)
                throw std::invalid_argument("node '" + nm + "' appears in two blocks");
            block[static_cast<std::size_t>(i)] = static_cast<int>(b);
        }
    }
    for (int i = 0; i < n; ++i)
        if (block[static_cast<std::size_t>(i)] == -1)
            throw std::invalid_argument("node '" + L.names()[static_cast<std::size_t>(i)] + "' not covered");

    const int k = static_cast<int>(partition.size());
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int ba = block[static_cast<std::size_t>(a)], bb = block[static_cast<std::size_t>(b)];
            if (ba != bb && L.below(b, a)) edges.emplace_back(ba, bb);
        }
    std::vector<std::string> names;
    for (const auto& blk : partition) names.push_back(blk.front());
    ClassLattice Q(names, edges, partition);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (Q.below(a, b) && Q.below(b, a))
                throw std::invalid_argument("quotient is not antisymmetric: blocks '" + names[static_cast<std::size_t>(a)] +
                                            "' and '" + names[static_cast<std::size_t>(b)] + "' collapse");
    return Q;
}

const std::vector<QuotientScenario>& quotient_scenarios() {
    static const std::vector<QuotientScenario> all = {
        {"CASIO",
         {{"s", "gs"}, {"ps", "pgs"}, {"e"}, {"w"}, {"pw"}, {"wp", "gwap", "wgap"}},
         6,
         {{"s", "ps"}, {"s", "e"}, {"e", "w"}, {"ps", "pw"}, {"w", "pw"}, {"pw", "wp"}}},
        {"CASIO-everywhere",
         {{"s", "gs"}, {"ps", "pgs"}, {"e", "w"}, {"pw"}, {"wp", "gwap", "wgap"}},
         5,
         {{"s", "ps"}, {"s", "e"}, {"ps", "pw"}, {"e", "pw"}, {"pw", "wp"}}},
        {"OM",
         {{"s"}, {"gs"}, {"pgs"}, {"e"}, {"ps"}, {"w", "pw", "wp"}, {"gwap"}, {"wgap"}},
         8,
         {{"s", "gs"}, {"s", "ps"}, {"s", "e"}, {"gs", "pgs"}, {"ps", "pgs"}, {"ps", "w"}, {"e", "w"},
          {"w", "gwap"}, {"pgs", "gwap"}, {"gwap", "wgap"}}},
        {"CASIO+OM",
         {{"s", "gs"}, {"ps", "pgs"}, {"e"}, {"w", "pw", "wp", "gwap", "wgap"}},
         4,
         {{"s", "ps"}, {"s", "e"}, {"ps", "w"}, {"e", "w"}}},
        {"CASIO+OM-everywhere",
         {{"s", "gs"}, {"ps", "pgs"}, {"e", "w", "pw", "wp", "gwap", "wgap"}},
         3,
         {{"s", "ps"}, {"ps", "e"}}},
        {"exists-s",
         {{"s", "e", "w"}, {"gs"}, {"ps", "pw", "wp"}, {"pgs", "gwap", "wgap"}},
         4,
         {{"s", "gs"}, {"s", "ps"}, {"gs", "pgs"}, {"ps", "pgs"}}},
        {"exists-s+CASIO",
         {{"s", "e", "w", "gs"}, {"ps", "pgs", "pw", "wp", "gwap", "wgap"}},
         2,
         {{"s", "ps"}}},
        {"exists-s+OM",
         {{"s", "e", "w", "pw", "wp", "ps"}, {"gs"}, {"pgs", "gwap", "wgap"}},
         3,
         {{"s", "gs"}, {"gs", "pgs"}}},
        {"exists-s+CASIO+OM",
         {{"s", "gs", "ps", "pgs", "e", "w", "pw", "wp", "gwap", "wgap"}},
         1,
         {}},
        {"Gaussian-continuous",
         {{"s", "gs"}, {"ps", "pgs"}, {"e", "w", "pw", "wp", "gwap", "wgap"}},
         3,
         {{"s", "ps"}, {"ps", "e"}}},
        {"Gaussian-strong",
         {{"s", "gs", "ps", "pgs", "e", "w", "pw", "wp", "gwap", "wgap"}},
         1,
         {}},
    };
    return all;
}

const QuotientScenario& find_scenario(const std::string& name) {
    for (const auto& s : quotient_scenarios())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown quotient scenario '" + name + "'");
}

std::vector<QuotientCheck> check_all_quotients() {
    const ClassLattice L = build_main_lattice();
    std::vector<QuotientCheck> out;
    for (const auto& sc : quotient_scenarios()) {
        QuotientCheck chk;
        chk.name = sc.name;
        try {
            ClassLattice Q = quotient_lattice(L, sc.partition);
            chk.nodes = Q.size();
            const LatticeReport rep = validate_lattice(Q);
            chk.lattice_ok = rep.partial_order && rep.lattice && rep.complete;
            chk.distributive = rep.distributive;
            chk.nodes_match = Q.size() == sc.expected_nodes;
            std::set<std::pair<std::string, std::string>> got, want(sc.expected_covers.begin(), sc.expected_covers.end());
            for (auto [a, b] : Q.hasse())
                got.emplace(Q.names()[static_cast<std::size_t>(a)], Q.names()[static_cast<std::size_t>(b)]);
            chk.covers_match = got == want;
        } catch (const std::exception& ex) {
            chk.error = ex.what();
        }
        out.push_back(std::move(chk));
    }
    return out;
}

}  // namespace modelattice
