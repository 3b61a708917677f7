// JSON loading for measure documents. The writer side lives with the node
// classes in measure.cpp.

#include <cmath>
#include <stdexcept>
#include <string>

#include "modelattice/measure.hpp"

namespace modelattice {

namespace {

using nlohmann::json;

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw std::invalid_argument(std::string("field '") + key + "' must be a number");
}

double number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

double as_bound(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw std::invalid_argument("interval bounds must be numbers or \"inf\"/\"-inf\"");
}

Point point_of(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    if (v.is_number()) return Point(v.get<double>());
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return Point(v[0].get<double>(), v[1].get<double>());
    throw std::invalid_argument(std::string("field '") + key + "' must be a number or [anchor, offset]");
}

std::vector<double> numbers(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw std::invalid_argument(std::string("field '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

Component component_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("component needs a 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    const double w = number_or(j, "weight", 1.0);
    if (!(w >= 0.0)) throw std::invalid_argument("component weight must be non-negative");
    if (kind == "atom") return atom(point_of(j, "center"), w);
    if (kind == "uniform") {
        Component c = uniform_interval(number(j, "a"), number(j, "b"), number_or(j, "height", 1.0));
        c.weight = w;
        c.params["weight"] = w;
        return c;
    }
    if (kind == "step_block") {
        Component c = step_block(point_of(j, "center"), number(j, "lo"), number(j, "hi"), number(j, "height"));
        c.weight = w;
        c.params["weight"] = w;
        return c;
    }
    if (kind == "piecewise_constant")
        return piecewise_constant(point_of(j, "center"), numbers(j, "breaks"), numbers(j, "heights"), w);
    if (kind == "power") {
        const std::string sided = j.value("sided", std::string("two"));
        if (sided != "two" && sided != "right") throw std::invalid_argument("power: 'sided' must be \"two\" or \"right\"");
        return power_singularity(point_of(j, "center"), number(j, "p"), number(j, "coeff"), number(j, "truncation"),
                                 sided == "right", w);
    }
    if (kind == "knot")
        return knot_singularity(point_of(j, "center"), number(j, "r0"), number(j, "q"), number(j, "F0"), number(j, "s"), w);
    if (kind == "trig") return trig_singularity(point_of(j, "center"), number(j, "alpha"), number_or(j, "theta", 0.0), w);
    if (kind == "triangular")
        return triangular(point_of(j, "center"), number(j, "height"), number(j, "half_width"), w);
    throw std::invalid_argument("unknown component kind '" + kind + "'");
}

LazyFamily family_from_json(const json& j) {
    if (!j.is_object() || !j.contains("template")) throw std::invalid_argument("lazy family needs a 'template'");
    const auto t = j.at("template").get<std::string>();
    if (t == "hat_train") return families::hat_train();
    if (t == "one_sided_train") return families::one_sided_train();
    if (t == "step_train") return families::step_train(number_or(j, "origin", 0.0));
    if (t == "wgap_blocks")
        return families::wgap_blocks(number_or(j, "origin", 0.0), number_or(j, "weight_odd", 1.0),
                                     number_or(j, "weight_even", 1.0));
    if (t == "knot_train") {
        const double beta = number_or(j, "beta", 20.0);
        if (!(beta > 1.0)) throw std::invalid_argument("knot_train: beta must exceed 1");
        return families::knot_train(beta, j.value("even", true));
    }
    throw std::invalid_argument("unknown lazy family template '" + t + "'");
}

Measure1D measure_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("measure document must be a JSON object");
    if (doc.contains("transform")) {
        const auto t = doc.at("transform").get<std::string>();
        if (t == "translate") {
            if (!doc.contains("measure")) throw std::invalid_argument("translate needs 'measure'");
            return measure_from_json(doc.at("measure")).translate(number(doc, "b"));
        }
        if (t == "restrict") {
            if (!doc.contains("measure") || !doc.contains("intervals")) throw std::invalid_argument("restrict needs 'measure' and 'intervals'");
            std::vector<std::pair<double, double>> iv;
            for (const auto& p : doc.at("intervals")) {
                if (!p.is_array() || p.size() != 2) throw std::invalid_argument("intervals must be [lo, hi] pairs");
                iv.emplace_back(as_bound(p[0]), as_bound(p[1]));
            }
            return measure_from_json(doc.at("measure")).restrict(iv);
        }
        if (t == "convex_combine") {
            if (!doc.contains("first") || !doc.contains("second")) throw std::invalid_argument("convex_combine needs 'first' and 'second'");
            return Measure1D::convex_combine(number(doc, "alpha"), measure_from_json(doc.at("first")),
                                             measure_from_json(doc.at("second")));
        }
        throw std::invalid_argument("unknown transform '" + t + "'");
    }
    std::vector<Component> comps;
    std::vector<LazyFamily> fams;
    if (doc.contains("components")) {
        for (const auto& c : doc.at("components")) comps.push_back(component_from_json(c));
    }
    if (doc.contains("lazy_families")) {
        for (const auto& f : doc.at("lazy_families")) fams.push_back(family_from_json(f));
    }
    if (comps.empty() && fams.empty()) throw std::invalid_argument("measure has no components");
    const double Z = number_or(doc, "normalizer", 0.0);
    return Measure1D::from_components(std::move(comps), std::move(fams), Z, doc.value("label", std::string()));
}

}  // namespace modelattice
