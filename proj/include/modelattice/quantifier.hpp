#ifndef MODELATTICE_QUANTIFIER_HPP
#define MODELATTICE_QUANTIFIER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modelattice {

enum class Polarity : std::uint8_t { ForAll, Exists };
enum class Var : std::uint8_t { ns, as, cp, cs };

struct Quantifier {
    Polarity polarity;
    Var variable;

    friend bool operator==(const Quantifier&, const Quantifier&) = default;
};

// Alphabet position of a quantifier: variable-major, then forall before exists.
int alphabet_index(Quantifier q);

enum class Star1 { CandidatePoint, ApproxSequence };
enum class Star2 { Sup, ComparisonPoint, ComparisonSequence };

// An ordered quantifier string. Construction does not validate; use
// is_grammatical() or parse_definition() for checked input.
class ModeDefinition {
public:
    ModeDefinition() = default;
    explicit ModeDefinition(std::vector<Quantifier> qs) : qs_(std::move(qs)) {}

    const std::vector<Quantifier>& quantifiers() const { return qs_; }
    std::size_t size() const { return qs_.size(); }
    const Quantifier& operator[](std::size_t i) const { return qs_[i]; }

    // Position of the variable in the string, or -1 when absent.
    int position(Var v) const;
    std::optional<Polarity> polarity(Var v) const;
    bool has(Polarity p, Var v) const;

    Star1 star1() const;
    Star2 star2() const;

    // Plain-text form, e.g. "[Ans Eas]".
    std::string ascii() const;
    // Display form with the logical symbols, e.g. "[∀ns ∃as]".
    std::string pretty() const;

    friend bool operator==(const ModeDefinition&, const ModeDefinition&) = default;
    friend bool operator<(const ModeDefinition& a, const ModeDefinition& b);

private:
    std::vector<Quantifier> qs_;
};

bool is_grammatical(const ModeDefinition& d);

// Accepts "[Ans Eas]", "[∀ns ∃as]" and mixtures; throws std::invalid_argument
// on malformed or ungrammatical input.
ModeDefinition parse_definition(std::string_view text);

std::vector<ModeDefinition> enumerate_definitions();

ModeDefinition logical_normal_form(const ModeDefinition& d);

// Every grammatical string obtained by permuting same-polarity runs.
std::vector<ModeDefinition> logical_class_members(const ModeDefinition& d);

enum class Rule { AP_a, AP_b, AP_c, AP_d, AP_e, CP_a, CP_b, CP_c, CP_d, CP_e };
std::string rule_name(Rule r);

struct EliminationVerdict {
    bool meaningful = true;
    std::optional<Rule> rule;
};

// First rule (in the order AP-a..AP-e, CP-a..CP-e) whose pattern matches the
// string itself, without looking at its logical class.
std::optional<Rule> matching_rule(const ModeDefinition& d);

// Verdict for the logical class of d: the first rule that matches some member
// of the class. This is constant on classes by construction.
EliminationVerdict elimination_verdict(const ModeDefinition& d);

enum class ClassId : std::uint8_t { s, gs, ps, pgs, e, w, pw, wp, gwap, wgap };
inline constexpr std::array<ClassId, 10> kAllClasses = {
    ClassId::s, ClassId::gs, ClassId::ps, ClassId::pgs, ClassId::e,
    ClassId::w, ClassId::pw, ClassId::wp, ClassId::gwap, ClassId::wgap};

std::string class_name(ClassId c);
ClassId class_from_name(std::string_view name);  // throws std::invalid_argument

// The designated string of each class (first entry of its row in the table of
// equivalent definitions).
ModeDefinition class_definition(ClassId c);
// All strings listed as equivalent for the class.
std::vector<ModeDefinition> class_members(ClassId c);

// Throws std::invalid_argument if d is not one of the 21 meaningful strings.
ClassId canonical_class(const ModeDefinition& d);

std::optional<std::string> letter_notation(const ModeDefinition& d);

struct TableRow {
    int index = 0;  // 1-based
    ModeDefinition definition;
    int logical_rep = 0;
    bool meaningful = false;
    std::optional<Rule> rule;
    std::optional<int> canonical_rep;
    std::optional<std::string> letter;
};

std::vector<TableRow> emit_table();
std::string table_csv(const std::vector<TableRow>& rows);
std::string table_json(const std::vector<TableRow>& rows);

}  // namespace modelattice

#endif
