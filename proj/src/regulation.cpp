#include "rmrs/regulation.hpp"

#include <algorithm>

#include "rmrs/error.hpp"

namespace rmrs {

namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

std::vector<Pair> canonical_pairs(std::vector<Pair> pairs, std::size_t num_rules,
                                  const char* what) {
    for (const auto& [a, b] : pairs) {
        if (a >= num_rules || b >= num_rules)
            throw Error(std::string(what) + " pair references an unknown rule");
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

std::vector<bool> transitive_closure(const std::vector<Pair>& pairs, std::size_t n) {
    std::vector<bool> m(n * n, false);
    for (const auto& [a, b] : pairs) m[a * n + b] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i * n + k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (m[k * n + j]) m[i * n + j] = true;
        }
    return m;
}

}  // namespace

std::string regulation_class_name(RegulationClass c) {
    switch (c) {
        case RegulationClass::Unregulated: return "none";
        case RegulationClass::Regular: return "regular";
        case RegulationClass::Ordered: return "ordered";
        case RegulationClass::Programmed: return "programmed";
        case RegulationClass::Conditional: return "conditional";
        case RegulationClass::ConcurrentFree: return "concurrent-free";
    }
    return "?";
}

OrderedZeta OrderedZeta::make(std::vector<Pair> pairs, std::size_t num_rules) {
    OrderedZeta z;
    z.pairs_ = canonical_pairs(std::move(pairs), num_rules, "ordered");
    z.num_rules_ = num_rules;
    z.closure_ = transitive_closure(z.pairs_, num_rules);
    return z;
}

bool OrderedZeta::in_closure(std::uint32_t a, std::uint32_t b) const {
    return closure_[a * num_rules_ + b];
}

ConditionalZeta ConditionalZeta::make(std::map<std::uint32_t, std::vector<Multiset>> forbid) {
    ConditionalZeta z;
    for (auto& [rule, contexts] : forbid) {
        std::sort(contexts.begin(), contexts.end());
        contexts.erase(std::unique(contexts.begin(), contexts.end()), contexts.end());
        if (!contexts.empty()) z.forbid.emplace(rule, std::move(contexts));
    }
    return z;
}

const std::vector<Multiset>* ConditionalZeta::contexts(std::uint32_t rule) const {
    auto it = forbid.find(rule);
    return it == forbid.end() ? nullptr : &it->second;
}

ConcurrentFreeZeta ConcurrentFreeZeta::make(std::vector<Pair> pairs, std::size_t num_rules) {
    ConcurrentFreeZeta z;
    z.pairs_ = canonical_pairs(std::move(pairs), num_rules, "concurrent-free");
    z.num_rules_ = num_rules;
    z.matrix_.assign(num_rules * num_rules, false);
    z.outgoing_.assign(num_rules, false);
    for (const auto& [a, b] : z.pairs_) {
        z.matrix_[a * num_rules + b] = true;
        z.outgoing_[a] = true;
    }
    return z;
}

bool ConcurrentFreeZeta::blocks(std::uint32_t loser, std::uint32_t winner) const {
    return matrix_[loser * num_rules_ + winner];
}

bool ConcurrentFreeZeta::has_outgoing(std::uint32_t rule) const { return outgoing_[rule]; }

RegularZeta RegularZeta::make(OmegaExpr expr) {
    RegularZeta z;
    z.automaton_ = to_buchi(expr);
    z.expr_ = std::move(expr);
    return z;
}

RegulationClass regulation_class(const Regulation& z) {
    switch (z.index()) {
        case 0: return RegulationClass::Unregulated;
        case 1: return RegulationClass::Regular;
        case 2: return RegulationClass::Ordered;
        case 3: return RegulationClass::Programmed;
        case 4: return RegulationClass::Conditional;
        default: return RegulationClass::ConcurrentFree;
    }
}

bool memory_less(const RegulationMemory& a, const RegulationMemory& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    switch (a.index()) {
        case 0:
            return false;
        case 1:
            return std::get<LastRule>(a).last < std::get<LastRule>(b).last;
        default:
            return std::get<AutomatonStates>(a).states < std::get<AutomatonStates>(b).states;
    }
}

namespace {

struct Validator {
    const System& s;
    std::vector<Diagnostic> diags;

    void flag(DiagnosticCode code, std::string message) {
        diags.push_back({code, std::move(message)});
    }

    void operator()(const UnregulatedZeta&) {}

    void operator()(const OrderedZeta& z) {
        for (std::uint32_t i = 0; i < s.rules().size(); ++i) {
            if (z.in_closure(i, i)) {
                flag(DiagnosticCode::OrderCycle,
                     "ordered regulation is cyclic through rule " + s.rules()[i].id);
                return;
            }
        }
    }

    void operator()(const ProgrammedZeta& z) {
        for (std::uint32_t i = 0; i < s.rules().size(); ++i) {
            if (!z.succ.count(i))
                flag(DiagnosticCode::MissingSuccessor,
                     "no successor set for rule " + s.rules()[i].id);
        }
        for (const auto& [rule, succs] : z.succ) {
            if (rule >= s.rules().size()) {
                flag(DiagnosticCode::UnknownRuleRef, "successor entry for unknown rule");
                continue;
            }
            for (std::uint32_t t : succs)
                if (t >= s.rules().size())
                    flag(DiagnosticCode::UnknownRuleRef,
                         "successor of " + s.rules()[rule].id + " is not a rule");
        }
    }

    void operator()(const ConditionalZeta& z) {
        for (const auto& [rule, contexts] : z.forbid) {
            if (rule >= s.rules().size()) {
                flag(DiagnosticCode::UnknownRuleRef, "prohibited context for unknown rule");
                continue;
            }
            for (const Multiset& m : contexts) {
                if (m.id_bound() > s.elements().size())
                    flag(DiagnosticCode::UnknownRuleRef,
                         "prohibited context of " + s.rules()[rule].id +
                             " references an unknown element");
            }
        }
    }

    void operator()(const ConcurrentFreeZeta& z) {
        for (const auto& [a, b] : z.pairs()) {
            if (a == b) {
                flag(DiagnosticCode::SelfPriority,
                     "priority pair relates rule " + s.rules()[a].id + " to itself");
                continue;
            }
            if (!intersects(s.rules()[a].lhs, s.rules()[b].lhs))
                flag(DiagnosticCode::NotConcurrent, "NotConcurrent(" + s.rules()[a].id + ", " +
                                                        s.rules()[b].id + ")");
        }
        std::vector<bool> closure =
            transitive_closure(z.pairs(), s.rules().size());
        for (const auto& [a, b] : z.pairs()) {
            if (a != b && closure[b * s.rules().size() + a])
                flag(DiagnosticCode::PriorityCycle,
                     "priorities between " + s.rules()[a].id + " and " + s.rules()[b].id +
                         " are cyclic");
        }
    }

    void operator()(const RegularZeta& z) {
        // Alphabet check: every symbol is a rule of the system or eps.
        std::vector<const RegexNode*> stack;
        auto push_lasso = [&](const Lasso& l) {
            stack.push_back(l.prefix.get());
            stack.push_back(l.cycle.get());
        };
        for (const Lasso& l : z.expr().lassos) push_lasso(l);
        while (!stack.empty()) {
            const RegexNode* n = stack.back();
            stack.pop_back();
            if (n->kind == RegexNode::Kind::Symbol) {
                if (!n->symbol.is_eps() && n->symbol.index() >= s.rules().size())
                    flag(DiagnosticCode::BadAlphabet, "expression symbol is not a rule");
            }
            for (const auto& k : n->kids) stack.push_back(k.get());
        }
    }
};

}  // namespace

std::vector<Diagnostic> validate_regulation(const System& s, const Regulation& z) {
    Validator v{s, {}};
    std::visit(v, z);
    return std::move(v.diags);
}

RegulationMemory init_memory(const Regulation& z) {
    switch (regulation_class(z)) {
        case RegulationClass::Ordered:
        case RegulationClass::Programmed:
            return LastRule{std::nullopt};
        case RegulationClass::Regular:
            return AutomatonStates{std::get<RegularZeta>(z).automaton().live_initial()};
        default:
            return NoMemory{};
    }
}

bool permits(const System& s, const Regulation& z, const RegulationMemory& mem,
             const Multiset& state, RuleLabel candidate,
             const std::vector<std::uint32_t>& enabled_now) {
    if (!candidate.is_eps() && candidate.index() >= s.rules().size())
        throw UnknownRuleError("candidate rule is not part of the system");

    switch (regulation_class(z)) {
        case RegulationClass::Unregulated:
            return true;
        case RegulationClass::Ordered: {
            if (candidate.is_eps()) return true;
            const auto& last = std::get<LastRule>(mem).last;
            if (!last) return true;
            return !std::get<OrderedZeta>(z).in_closure(candidate.index(), *last);
        }
        case RegulationClass::Programmed: {
            if (candidate.is_eps()) return true;
            const auto& last = std::get<LastRule>(mem).last;
            if (!last) return true;
            const auto& zeta = std::get<ProgrammedZeta>(z);
            auto it = zeta.succ.find(*last);
            if (it == zeta.succ.end()) return false;  // ill-formed zeta: nothing may follow
            return std::binary_search(it->second.begin(), it->second.end(), candidate.index());
        }
        case RegulationClass::Conditional: {
            if (candidate.is_eps()) return true;
            const auto* contexts = std::get<ConditionalZeta>(z).contexts(candidate.index());
            if (!contexts) return true;
            for (const Multiset& a : *contexts)
                if (subset(a, state)) return false;
            return true;
        }
        case RegulationClass::ConcurrentFree: {
            if (candidate.is_eps()) return true;
            const auto& zeta = std::get<ConcurrentFreeZeta>(z);
            if (!zeta.has_outgoing(candidate.index())) return true;
            for (std::uint32_t winner : enabled_now)
                if (zeta.blocks(candidate.index(), winner)) return false;
            return true;
        }
        case RegulationClass::Regular: {
            const auto& automaton = std::get<RegularZeta>(z).automaton();
            const auto& states = std::get<AutomatonStates>(mem).states;
            return !step_states(automaton, states, candidate).empty();
        }
    }
    return true;
}

RegulationMemory advance_memory(const Regulation& z, RegulationMemory mem, RuleLabel applied) {
    switch (regulation_class(z)) {
        case RegulationClass::Ordered:
        case RegulationClass::Programmed:
            // eps is transparent: it never overwrites the last applied rule.
            if (!applied.is_eps()) std::get<LastRule>(mem).last = applied.index();
            return mem;
        case RegulationClass::Regular: {
            const auto& automaton = std::get<RegularZeta>(z).automaton();
            auto& states = std::get<AutomatonStates>(mem).states;
            states = step_states(automaton, states, applied);
            return mem;
        }
        default:
            return mem;
    }
}

Regulation neutral_regulation(RegulationClass c, const System& s) {
    const std::size_t n = s.rules().size();
    switch (c) {
        case RegulationClass::Unregulated:
            return UnregulatedZeta{};
        case RegulationClass::Ordered:
            return OrderedZeta::make({}, n);
        case RegulationClass::ConcurrentFree:
            return ConcurrentFreeZeta::make({}, n);
        case RegulationClass::Conditional:
            return ConditionalZeta::make({});
        case RegulationClass::Programmed: {
            ProgrammedZeta z;
            std::vector<std::uint32_t> all(n);
            for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
            for (std::uint32_t i = 0; i < n; ++i) z.succ.emplace(i, all);
            return z;
        }
        case RegulationClass::Regular: {
            // Sigma* . Sigma^w over all rules plus eps.
            std::vector<RegexPtr> symbols;
            for (std::uint32_t i = 0; i < n; ++i) symbols.push_back(rx_symbol(RuleLabel(i)));
            symbols.push_back(rx_symbol(RuleLabel::eps()));
            RegexPtr any = rx_union(std::move(symbols));
            OmegaExpr expr;
            expr.lassos.push_back(Lasso{rx_star(any), any});
            return RegularZeta::make(std::move(expr));
        }
    }
    return UnregulatedZeta{};
}

}  // namespace rmrs
