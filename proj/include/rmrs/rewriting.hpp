#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rmrs/multiset.hpp"

namespace rmrs {

// Reserved name of the built-in empty rule.
inline constexpr std::string_view kEpsName = "eps";

bool is_valid_token(std::string_view name);

// Either a declared rule (by index into System::rules) or the built-in
// empty rule. The empty rule sorts after all declared rules, which makes
// enumeration order "declaration order, eps last".
class RuleLabel {
public:
    static constexpr std::uint32_t kEpsValue = 0xffffffffu;

    constexpr RuleLabel() : value_(kEpsValue) {}
    constexpr explicit RuleLabel(std::uint32_t index) : value_(index) {}
    static constexpr RuleLabel eps() { return RuleLabel(); }

    bool is_eps() const { return value_ == kEpsValue; }
    std::uint32_t index() const { return value_; }

    bool operator==(const RuleLabel&) const = default;
    auto operator<=>(const RuleLabel&) const = default;

private:
    std::uint32_t value_;
};

struct Rule {
    std::string id;
    Multiset lhs;  // consumed occurrences
    Multiset rhs;  // produced occurrences

    bool operator==(const Rule&) const = default;
};

// A multiset rewriting system: element universe, declared rules and the
// initial state. The empty rule is implicit and never stored. Element names
// are sorted at construction, so element ids are the rank of the name; rule
// order is the declaration order and only affects enumeration output.
class System {
public:
    System(std::vector<std::string> elements, std::vector<Rule> rules, Multiset init);

    const std::vector<std::string>& elements() const { return elements_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const Multiset& init() const { return init_; }

    std::optional<ElementId> element_id(std::string_view name) const;
    const std::string& element_name(ElementId id) const { return elements_.at(id); }

    std::optional<std::uint32_t> rule_index(std::string_view id) const;
    const Rule& rule(std::uint32_t index) const { return rules_.at(index); }
    std::string label_name(RuleLabel label) const;

    bool operator==(const System&) const;

private:
    std::vector<std::string> elements_;
    std::vector<Rule> rules_;
    Multiset init_;
    std::unordered_map<std::string, ElementId> element_index_;
    std::unordered_map<std::string, std::uint32_t> rule_index_;
};

// Incremental construction with element names resolved only at build().
class SystemBuilder {
public:
    SystemBuilder& element(std::string name);
    SystemBuilder& elements(std::initializer_list<std::string> names);
    SystemBuilder& rule(std::string id, std::vector<std::pair<std::string, Count>> lhs,
                        std::vector<std::pair<std::string, Count>> rhs);
    SystemBuilder& init(std::vector<std::pair<std::string, Count>> entries);
    System build() const;

    Multiset resolve(const std::vector<std::pair<std::string, Count>>& entries) const;

private:
    struct PendingRule {
        std::string id;
        std::vector<std::pair<std::string, Count>> lhs, rhs;
    };
    std::vector<std::string> elements_;
    std::vector<PendingRule> rules_;
    std::vector<std::pair<std::string, Count>> init_;
};

bool enabled(const Rule& r, const Multiset& m);

// (m \ lhs) + rhs; throws RuleNotEnabledError when not enabled.
Multiset apply(const Rule& r, const Multiset& m);

// Label-level application; eps maps every state to itself.
Multiset apply_label(const System& s, RuleLabel label, const Multiset& m);

// Indices of the declared (non-eps) rules enabled at m, ascending.
std::vector<std::uint32_t> multiset_enabled_rules(const System& s, const Multiset& m);

// A finite run prefix: states[0] is the initial state and labels[i] produced
// states[i + 1].
struct RunPrefix {
    std::vector<Multiset> states;
    std::vector<RuleLabel> labels;

    bool operator==(const RunPrefix&) const = default;
};

}  // namespace rmrs
