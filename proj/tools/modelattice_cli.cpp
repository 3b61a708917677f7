// modelattice: command-line front end.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modelattice/acceptance.hpp"
#include "modelattice/ell2.hpp"
#include "modelattice/examples.hpp"
#include "modelattice/gaussian.hpp"
#include "modelattice/lattice.hpp"
#include "modelattice/quantifier.hpp"

namespace {

using namespace modelattice;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Options {
    std::string output;
    std::string format;  // empty: the command's default
    double tol = 1e-6;
    int N = 40;
    std::optional<std::uint64_t> seed;
    std::string definition;
    std::string scenario;
    std::string example;
    std::string gauss_example = "Gauss-E-not-PS";
    long samples = 100000;
    int dim = 200;
    int n_max = 2;
    std::vector<int> criteria;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

EvalConfig eval_config(const Options& o) {
    EvalConfig cfg;
    cfg.tol = o.tol;
    cfg.N = o.N;
    return cfg;
}

std::uint64_t seed_of(const Options& o) { return o.seed ? *o.seed : gaussian::default_seed(); }

int cmd_enumerate(const Options& o) {
    const auto rows = emit_table();
    Output out(o.output);
    out.stream() << (o.format == "json" ? table_json(rows) : table_csv(rows));
    if (o.format == "json") out.stream() << "\n";
    return kOk;
}

// The canonical class of d or of a logically equivalent string.
std::optional<ClassId> class_of(const ModeDefinition& d) {
    for (const auto& m : logical_class_members(d)) {
        for (ClassId c : kAllClasses) {
            const auto members = class_members(c);
            if (std::find(members.begin(), members.end(), m) != members.end()) return c;
        }
    }
    return std::nullopt;
}

int cmd_classify(const Options& o) {
    const ModeDefinition d = parse_definition(o.definition);
    const EliminationVerdict v = elimination_verdict(d);
    std::optional<ClassId> cls;
    if (v.meaningful) cls = class_of(d);
    const auto letter = letter_notation(d);
    Output out(o.output);
    if (o.format == "json") {
        nlohmann::json cls_json = nullptr;
        if (cls.has_value()) cls_json = class_name(cls.value());
        nlohmann::json j{{"definition", d.ascii()},
                         {"normal_form", logical_normal_form(d).ascii()},
                         {"meaningful", v.meaningful},
                         {"rule", v.rule ? nlohmann::json(rule_name(*v.rule)) : nlohmann::json(nullptr)},
                         {"class", cls_json},
                         {"letter", letter ? nlohmann::json(*letter) : nlohmann::json(nullptr)}};
        out.stream() << j.dump(2) << "\n";
        return kOk;
    }
    auto& os = out.stream();
    os << "definition: " << d.pretty() << "\n";
    os << "normal form: " << logical_normal_form(d).pretty() << "\n";
    if (v.meaningful)
        os << "verdict: meaningful\n";
    else
        os << "verdict: meaningless (" << (v.rule ? rule_name(*v.rule) : std::string("no rule")) << ")\n";
    if (cls) os << "class: " << class_name(*cls) << "\n";
    os << "letter: " << (letter ? *letter : std::string("-")) << "\n";
    return kOk;
}

int cmd_lattice(const Options& o) {
    const ClassLattice L = build_main_lattice();
    Output out(o.output);
    if (o.scenario.empty()) {
        out.stream() << L.to_dot("modes");
        return kOk;
    }
    const QuotientScenario& sc = find_scenario(o.scenario);
    out.stream() << quotient_lattice(L, sc.partition).to_dot(sc.name);
    return kOk;
}

int cmd_quotients(const Options& o) {
    const auto checks = check_all_quotients();
    Output out(o.output);
    bool ok = true;
    if (o.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : checks) {
            j.push_back({{"name", c.name}, {"nodes", c.nodes}, {"lattice", c.lattice_ok}, {"distributive", c.distributive},
                         {"nodes_match", c.nodes_match}, {"covers_match", c.covers_match}, {"error", c.error},
                         {"ok", c.ok()}});
            ok = ok && c.ok();
        }
        out.stream() << j.dump(2) << "\n";
    } else {
        for (const auto& c : checks) {
            out.stream() << (c.ok() ? "ok   " : "FAIL ") << c.name << ": " << c.nodes << " nodes"
                         << (c.distributive ? "" : ", not distributive") << (c.error.empty() ? "" : ", " + c.error) << "\n";
            ok = ok && c.ok();
        }
    }
    return ok ? kOk : kFailure;
}

int run_gaussian(const Options& o, const std::string& name, std::ostream& os) {
    gaussian::GaussianSpec spec;
    spec.samples = o.samples;
    spec.dim = o.dim;
    spec.seed = seed_of(o);
    if (o.n_max < 1 || o.n_max > gaussian::kMaxConstructionN)
        throw CLI::ValidationError("--n-max", "must lie in 1.." + std::to_string(gaussian::kMaxConstructionN));
    gaussian::ConstructionReport rep;
    if (name == "Gauss-E-not-PS")
        rep = gaussian::run_gauss_e_not_ps(spec, o.n_max);
    else if (name == "Gauss-PS-not-S")
        rep = gaussian::run_gauss_ps_not_s(spec, o.n_max);
    else
        throw CLI::ValidationError("--example", "unknown Gaussian example '" + name + "'");
    os << rep.to_json().dump(2) << "\n";
    return rep.verdict() == gaussian::McVerdict::Pass ? kOk : kFailure;
}

int cmd_verify(const Options& o) {
    const auto id = parse_example(o.example);
    if (!id) throw CLI::ValidationError("example", "unknown example '" + o.example + "'");
    Output out(o.output);
    switch (*id) {
        case ExampleId::L2NoOptimalAS: {
            const ell2::LatticeMeasure mu;
            const auto rep = ell2::run_lattice_suite(mu, seed_of(o));
            out.stream() << rep.to_json().dump(2) << "\n";
            return rep.ok() ? kOk : kFailure;
        }
        case ExampleId::GaussENotPS:
        case ExampleId::GaussPSNotS:
            return run_gaussian(o, example_name(*id), out.stream());
        default: {
            const VerifyResult res = verify_example(*id, eval_config(o));
            out.stream() << res.to_json().dump(2) << "\n";
            return res.ok ? kOk : kFailure;
        }
    }
}

int cmd_matrix(const Options& o) {
    const SeparationMatrix m = run_separation_matrix(eval_config(o));
    Output out(o.output);
    if (o.format == "json")
        out.stream() << m.to_json().dump(2) << "\n";
    else
        out.stream() << m.to_csv();
    return m.ok() ? kOk : kFailure;
}

int cmd_merging(const Options& o) {
    const MergingReport m = merging_property_report(eval_config(o));
    Output out(o.output);
    if (o.format == "json")
        out.stream() << m.to_json().dump(2) << "\n";
    else
        out.stream() << m.text();
    return m.ok() ? kOk : kFailure;
}

int cmd_gaussian(const Options& o) {
    Output out(o.output);
    return run_gaussian(o, o.gauss_example, out.stream());
}

int cmd_suite(const Options& o) {
    AcceptanceOptions opt;
    opt.seed = seed_of(o);
    opt.gaussian_samples = o.samples;
    opt.gaussian_dim = o.dim;
    std::vector<int> ids = o.criteria;
    if (ids.empty())
        for (int i = 1; i <= kCriteriaCount; ++i) ids.push_back(i);
    Output out(o.output);
    int failed = 0;
    nlohmann::json j = nlohmann::json::array();
    for (int id : ids) {
        const CriterionResult r = run_criterion(id, opt);
        if (!r.pass) ++failed;
        if (o.format == "json")
            j.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}, {"data", r.data}});
        else
            out.stream() << r.line() << std::endl;
    }
    if (o.format == "json")
        out.stream() << j.dump(2) << "\n";
    else
        out.stream() << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " criteria pass\n";
    return failed ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Small-ball mode definitions: enumeration, lattices and counterexample verification"};
    app.require_subcommand(1);
    app.add_option("-o,--output", o.output, "Write the result to this file instead of stdout");
    app.add_option("--seed", o.seed, "Random seed (default: MODELATTICE_SEED or the built-in seed)");
    app.add_option("--tol", o.tol, "Tolerance for liminf >= 1 decisions")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--n", o.N, "Number of sequence terms evaluated")->capture_default_str()->check(CLI::Range(8, 200));

    auto* enumerate = app.add_subcommand("enumerate", "Emit the table of all quantifier strings");
    enumerate->add_option("--format", o.format, "Output format (default csv)")->check(CLI::IsMember({"csv", "json"}));

    auto* classify = app.add_subcommand("classify", "Classify a definition such as \"[Ans Eas]\"");
    classify->add_option("definition", o.definition, "Quantifier string")->required();
    classify->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* lattice = app.add_subcommand("lattice", "Emit the implication lattice (or a quotient) as DOT");
    lattice->add_option("--scenario", o.scenario, "Quotient scenario name");

    auto* quotients = app.add_subcommand("quotients", "Validate all quotient scenarios");
    quotients->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* verify = app.add_subcommand("verify", "Run the certificate bundle of an example");
    verify->add_option("example", o.example, "Example id, e.g. PS-not-GW")->required();
    verify->add_option("--samples", o.samples, "Monte-Carlo samples (Gaussian examples)")->check(CLI::PositiveNumber);
    verify->add_option("--dim", o.dim, "Truncation dimension (Gaussian examples)")->check(CLI::Range(2, 100000));
    verify->add_option("--n-max", o.n_max, "Largest construction step (Gaussian examples)");

    auto* matrix = app.add_subcommand("matrix", "Emit the separation matrix");
    matrix->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* merging = app.add_subcommand("merging", "Report the failure of the merging property");
    merging->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    auto* gauss = app.add_subcommand("gaussian", "Run a Monte-Carlo Gaussian construction");
    gauss->add_option("--example", o.gauss_example, "Gauss-E-not-PS or Gauss-PS-not-S")
        ->check(CLI::IsMember({"Gauss-E-not-PS", "Gauss-PS-not-S"}))
        ->capture_default_str();
    gauss->add_option("--samples", o.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber)->capture_default_str();
    gauss->add_option("--dim", o.dim, "Truncation dimension")->check(CLI::Range(2, 100000))->capture_default_str();
    gauss->add_option("--n-max", o.n_max, "Largest construction step")->capture_default_str();

    auto* suite = app.add_subcommand("suite", "Run all acceptance criteria");
    suite->add_option("--only", o.criteria, "Criterion numbers to run")->check(CLI::Range(1, kCriteriaCount));
    suite->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    suite->add_option("--samples", o.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
    suite->add_option("--dim", o.dim, "Truncation dimension")->check(CLI::Range(2, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (enumerate->parsed()) return cmd_enumerate(o);
        if (classify->parsed()) return cmd_classify(o);
        if (lattice->parsed()) return cmd_lattice(o);
        if (quotients->parsed()) return cmd_quotients(o);
        if (verify->parsed()) return cmd_verify(o);
        if (matrix->parsed()) return cmd_matrix(o);
        if (merging->parsed()) return cmd_merging(o);
        if (gauss->parsed()) return cmd_gaussian(o);
        if (suite->parsed()) return cmd_suite(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
