#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rmrs/omega.hpp"
#include "rmrs/rewriting.hpp"

namespace rmrs {

enum class RegulationClass { Unregulated, Regular, Ordered, Programmed, Conditional, ConcurrentFree };

std::string regulation_class_name(RegulationClass c);

struct UnregulatedZeta {
    bool operator==(const UnregulatedZeta&) const = default;
};

// Strict partial order on rules, taken as the transitive closure of the
// supplied generating pairs. permits() consults the closure; validation
// rejects a reflexive closure.
class OrderedZeta {
public:
    static OrderedZeta make(std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs,
                            std::size_t num_rules);

    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }
    bool in_closure(std::uint32_t a, std::uint32_t b) const;
    std::size_t num_rules() const { return num_rules_; }

    bool operator==(const OrderedZeta& other) const { return pairs_ == other.pairs_; }

private:
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;  // sorted, unique
    std::vector<bool> closure_;                                   // num_rules x num_rules
    std::size_t num_rules_ = 0;
};

// Successor function; an entry may be present with an empty successor set,
// while a missing entry for a declared rule is a validation error. The empty
// rule is never listed: it is implicitly a universal successor and has every
// rule as successor.
struct ProgrammedZeta {
    std::map<std::uint32_t, std::vector<std::uint32_t>> succ;  // values sorted, unique

    bool operator==(const ProgrammedZeta&) const = default;
};

// Prohibited contexts per rule; a rule absent from the map has none. The
// contexts of the rule applied in a step are tested against the state the
// rule fires from.
struct ConditionalZeta {
    std::map<std::uint32_t, std::vector<Multiset>> forbid;  // values sorted, unique, non-empty

    static ConditionalZeta make(std::map<std::uint32_t, std::vector<Multiset>> forbid);
    const std::vector<Multiset>* contexts(std::uint32_t rule) const;

    bool operator==(const ConditionalZeta&) const = default;
};

// Priority pairs (loser, winner); permits() consults the raw pair set, the
// transitive closure is used only by the acyclicity validation.
class ConcurrentFreeZeta {
public:
    static ConcurrentFreeZeta make(std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs,
                                   std::size_t num_rules);

    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }
    bool blocks(std::uint32_t loser, std::uint32_t winner) const;
    bool has_outgoing(std::uint32_t rule) const;
    std::size_t num_rules() const { return num_rules_; }

    bool operator==(const ConcurrentFreeZeta& other) const { return pairs_ == other.pairs_; }

private:
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;  // sorted, unique
    std::vector<bool> matrix_;
    std::vector<bool> outgoing_;
    std::size_t num_rules_ = 0;
};

class RegularZeta {
public:
    static RegularZeta make(OmegaExpr expr);

    const OmegaExpr& expr() const { return expr_; }
    const BuchiAutomaton& automaton() const { return automaton_; }

    bool operator==(const RegularZeta& other) const { return omega_equal(expr_, other.expr_); }

private:
    OmegaExpr expr_;
    BuchiAutomaton automaton_;
};

using Regulation = std::variant<UnregulatedZeta, RegularZeta, OrderedZeta, ProgrammedZeta,
                                ConditionalZeta, ConcurrentFreeZeta>;

RegulationClass regulation_class(const Regulation& z);

// Per-step regulation memory. LastRule records the last non-eps label (absent
// before the first non-eps step); AutomatonStates tracks the current
// nondeterministic state set.
struct NoMemory {
    bool operator==(const NoMemory&) const = default;
};
struct LastRule {
    std::optional<std::uint32_t> last;
    bool operator==(const LastRule&) const = default;
};
struct AutomatonStates {
    std::vector<std::uint32_t> states;  // sorted
    bool operator==(const AutomatonStates&) const = default;
};
using RegulationMemory = std::variant<NoMemory, LastRule, AutomatonStates>;

// Strict weak order for deterministic deduplication.
bool memory_less(const RegulationMemory& a, const RegulationMemory& b);

enum class DiagnosticCode {
    OrderCycle,
    SelfPriority,
    NotConcurrent,
    PriorityCycle,
    MissingSuccessor,
    UnknownRuleRef,
    BadAlphabet,
};

struct Diagnostic {
    DiagnosticCode code;
    std::string message;
};

// Empty result iff the regulation is well-formed for the system.
std::vector<Diagnostic> validate_regulation(const System& s, const Regulation& z);

RegulationMemory init_memory(const Regulation& z);

// Whether the regulation allows `candidate` in the current step. The caller
// guarantees the candidate is multiset-enabled and that `enabled_now` is
// multiset_enabled_rules at `state`. Throws UnknownRuleError for a candidate
// outside the system's rules.
bool permits(const System& s, const Regulation& z, const RegulationMemory& mem,
             const Multiset& state, RuleLabel candidate,
             const std::vector<std::uint32_t>& enabled_now);

RegulationMemory advance_memory(const Regulation& z, RegulationMemory mem, RuleLabel applied);

// The regulation of the given class that restricts nothing.
Regulation neutral_regulation(RegulationClass c, const System& s);

}  // namespace rmrs
