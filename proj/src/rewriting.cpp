#include "rmrs/rewriting.hpp"

#include <algorithm>

namespace rmrs {

bool is_valid_token(std::string_view name) {
    if (name.empty()) return false;
    for (char c : name) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  c == '_';
        if (!ok) return false;
    }
    return true;
}

namespace {

void check_universe(const Multiset& m, std::size_t element_count, const std::string& what) {
    if (m.id_bound() > element_count)
        throw Error(what + " references an element outside the system universe");
}

}  // namespace

System::System(std::vector<std::string> elements, std::vector<Rule> rules, Multiset init)
    : elements_(std::move(elements)), rules_(std::move(rules)), init_(std::move(init)) {
    std::sort(elements_.begin(), elements_.end());
    for (ElementId id = 0; id < elements_.size(); ++id) {
        const std::string& name = elements_[id];
        if (!is_valid_token(name)) throw Error("invalid element name '" + name + "'");
        if (name == kEpsName) throw Error("'eps' is reserved and cannot name an element");
        if (!element_index_.emplace(name, id).second)
            throw Error("duplicate element '" + name + "'");
    }
    for (std::uint32_t i = 0; i < rules_.size(); ++i) {
        const Rule& r = rules_[i];
        if (!is_valid_token(r.id)) throw Error("invalid rule id '" + r.id + "'");
        if (r.id == kEpsName) throw Error("'eps' is reserved and cannot name a rule");
        if (!rule_index_.emplace(r.id, i).second) throw Error("duplicate rule '" + r.id + "'");
        check_universe(r.lhs, elements_.size(), "rule " + r.id);
        check_universe(r.rhs, elements_.size(), "rule " + r.id);
    }
    check_universe(init_, elements_.size(), "initial multiset");
}

std::optional<ElementId> System::element_id(std::string_view name) const {
    auto it = element_index_.find(std::string(name));
    if (it == element_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> System::rule_index(std::string_view id) const {
    auto it = rule_index_.find(std::string(id));
    if (it == rule_index_.end()) return std::nullopt;
    return it->second;
}

std::string System::label_name(RuleLabel label) const {
    if (label.is_eps()) return std::string(kEpsName);
    return rules_.at(label.index()).id;
}

bool System::operator==(const System& other) const {
    return elements_ == other.elements_ && rules_ == other.rules_ && init_ == other.init_;
}

SystemBuilder& SystemBuilder::element(std::string name) {
    elements_.push_back(std::move(name));
    return *this;
}

SystemBuilder& SystemBuilder::elements(std::initializer_list<std::string> names) {
    for (const auto& n : names) elements_.push_back(n);
    return *this;
}

SystemBuilder& SystemBuilder::rule(std::string id,
                                   std::vector<std::pair<std::string, Count>> lhs,
                                   std::vector<std::pair<std::string, Count>> rhs) {
    rules_.push_back({std::move(id), std::move(lhs), std::move(rhs)});
    return *this;
}

SystemBuilder& SystemBuilder::init(std::vector<std::pair<std::string, Count>> entries) {
    init_ = std::move(entries);
    return *this;
}

Multiset SystemBuilder::resolve(const std::vector<std::pair<std::string, Count>>& entries) const {
    std::vector<std::string> sorted = elements_;
    std::sort(sorted.begin(), sorted.end());
    std::vector<Multiset::Entry> out;
    for (const auto& [name, count] : entries) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), name);
        if (it == sorted.end() || *it != name)
            throw Error("unknown element '" + name + "'");
        out.emplace_back(static_cast<ElementId>(it - sorted.begin()), count);
    }
    return Multiset::from_entries(std::move(out));
}

System SystemBuilder::build() const {
    std::vector<Rule> rules;
    rules.reserve(rules_.size());
    for (const auto& pr : rules_) rules.push_back({pr.id, resolve(pr.lhs), resolve(pr.rhs)});
    return System(elements_, std::move(rules), resolve(init_));
}

bool enabled(const Rule& r, const Multiset& m) { return subset(r.lhs, m); }

Multiset apply(const Rule& r, const Multiset& m) {
    if (!enabled(r, m)) throw RuleNotEnabledError("rule " + r.id + " is not enabled");
    return sum_union(difference(m, r.lhs), r.rhs);
}

Multiset apply_label(const System& s, RuleLabel label, const Multiset& m) {
    if (label.is_eps()) return m;
    return apply(s.rule(label.index()), m);
}

std::vector<std::uint32_t> multiset_enabled_rules(const System& s, const Multiset& m) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < s.rules().size(); ++i) {
        if (enabled(s.rules()[i], m)) out.push_back(i);
    }
    return out;
}

}  // namespace rmrs
