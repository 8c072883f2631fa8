#include "rmrs/explorer.hpp"

#include <algorithm>
#include <cstdint>

#include "rmrs/error.hpp"

namespace rmrs {

namespace {

constexpr std::size_t kParallelGrain = 32;

std::vector<RuleLabel> permitted_enabled(const System& s, const Regulation& z,
                                         const Configuration& c,
                                         const std::vector<std::uint32_t>& enabled_now) {
    std::vector<RuleLabel> out;
    for (std::uint32_t r : enabled_now) {
        RuleLabel label(r);
        if (permits(s, z, c.memory, c.state, label, enabled_now)) out.push_back(label);
    }
    return out;
}

}  // namespace

Configuration initial_configuration(const System& s, const Regulation& z) {
    return {s.init(), init_memory(z)};
}

std::vector<RuleLabel> applicable(const System& s, const Regulation& z, const Configuration& c) {
    std::vector<std::uint32_t> enabled_now = multiset_enabled_rules(s, c.state);
    std::vector<RuleLabel> out = permitted_enabled(s, z, c, enabled_now);
    if (!out.empty()) return out;
    if (permits(s, z, c.memory, c.state, RuleLabel::eps(), enabled_now))
        return {RuleLabel::eps()};
    return {};
}

Configuration step(const System& s, const Regulation& z, const Configuration& c,
                   RuleLabel label) {
    std::vector<RuleLabel> options = applicable(s, z, c);
    if (std::find(options.begin(), options.end(), label) == options.end())
        throw NotApplicableError("rule " + s.label_name(label) + " is not applicable here");
    return {apply_label(s, label, c.state), advance_memory(z, c.memory, label)};
}

std::string invalid_reason_name(InvalidReason r) {
    switch (r) {
        case InvalidReason::NotEnabled: return "NotEnabled";
        case InvalidReason::RegulationForbids: return "RegulationForbids";
        case InvalidReason::EpsNotFallback: return "EpsNotFallback";
        case InvalidReason::AutomatonDead: return "AutomatonDead";
    }
    return "?";
}

std::string verdict_to_string(const RunVerdict& v) {
    if (v.valid) return "Valid";
    return "Invalid(" + std::to_string(v.step) + ", " + invalid_reason_name(v.reason) + ")";
}

RunVerdict validate_run(const System& s, const Regulation& z, std::span<const RuleLabel> labels,
                        bool omega_eps_tail) {
    const bool regular = regulation_class(z) == RegulationClass::Regular;
    Configuration c = initial_configuration(s, z);

    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t step_no = i + 1;
        RuleLabel label = labels[i];
        if (!label.is_eps() && label.index() >= s.rules().size())
            throw UnknownRuleError("run references a rule the system does not declare");
        std::vector<std::uint32_t> enabled_now = multiset_enabled_rules(s, c.state);
        if (!label.is_eps()) {
            if (!enabled(s.rule(label.index()), c.state))
                return RunVerdict::bad(step_no, InvalidReason::NotEnabled);
            if (!permits(s, z, c.memory, c.state, label, enabled_now))
                return RunVerdict::bad(step_no, regular ? InvalidReason::AutomatonDead
                                                        : InvalidReason::RegulationForbids);
        } else {
            if (!permitted_enabled(s, z, c, enabled_now).empty())
                return RunVerdict::bad(step_no, InvalidReason::EpsNotFallback);
            if (!permits(s, z, c.memory, c.state, label, enabled_now))
                return RunVerdict::bad(step_no, InvalidReason::AutomatonDead);
        }
        c.state = apply_label(s, label, c.state);
        c.memory = advance_memory(z, c.memory, label);
    }

    if (!omega_eps_tail) return RunVerdict::ok();
    const std::size_t tail_step = labels.size() + 1;

    if (!regular) {
        std::vector<RuleLabel> options = applicable(s, z, c);
        if (options.size() != 1 || !options.front().is_eps())
            return RunVerdict::bad(tail_step, InvalidReason::EpsNotFallback);
        return RunVerdict::ok();
    }

    // Regular: the eps tail changes automaton states, so the fallback gate is
    // checked for every distinct state set the tail visits, and the whole
    // word labels . eps^w must be Buchi-accepted.
    const auto& automaton = std::get<RegularZeta>(z).automaton();
    std::vector<std::uint32_t> states = std::get<AutomatonStates>(c.memory).states;
    if (!accepts_eps_tail(automaton, states))
        return RunVerdict::bad(tail_step, InvalidReason::AutomatonDead);
    std::vector<std::uint32_t> enabled_now = multiset_enabled_rules(s, c.state);
    std::set<std::vector<std::uint32_t>> seen;
    while (seen.insert(states).second) {
        Configuration tail_cfg{c.state, AutomatonStates{states}};
        if (!permitted_enabled(s, z, tail_cfg, enabled_now).empty())
            return RunVerdict::bad(tail_step, InvalidReason::EpsNotFallback);
        states = step_states(automaton, states, RuleLabel::eps());
        if (states.empty()) return RunVerdict::bad(tail_step, InvalidReason::AutomatonDead);
    }
    return RunVerdict::ok();
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

struct Node {
    RunPrefix prefix;
    RegulationMemory memory;
};

// The cap is tracked two ways: the per-level deduplicated configuration
// count (the official gauge) and the raw node count per level, which bounds
// the materialized prefixes.
class CapAccounting {
public:
    CapAccounting(std::size_t cap, std::size_t depth) : cap_(cap) {
        distinct_.resize(depth + 1);
        nodes_.assign(depth + 1, 0);
    }

    void visit(std::size_t level, const Configuration& c) {
        if (++nodes_[level] > cap_) throw ExplosionLimitError(cap_);
        if (distinct_[level].insert(c).second) {
            if (++distinct_total_ > cap_) throw ExplosionLimitError(cap_);
        }
    }

private:
    std::size_t cap_;
    std::vector<std::set<Configuration>> distinct_;
    std::vector<std::size_t> nodes_;
    std::size_t distinct_total_ = 0;
};

Node make_child(const System& s, const Regulation& z, const Node& parent, RuleLabel label) {
    Node child;
    child.prefix = parent.prefix;
    child.prefix.states.push_back(apply_label(s, label, parent.prefix.states.back()));
    child.prefix.labels.push_back(label);
    child.memory = advance_memory(z, parent.memory, label);
    return child;
}

void dfs_enumerate(const System& s, const Regulation& z, const Node& node, std::size_t level,
                   std::size_t depth, CapAccounting& acct, std::vector<RunPrefix>& out) {
    acct.visit(level, {node.prefix.states.back(), node.memory});
    if (level == depth) {
        out.push_back(node.prefix);
        return;
    }
    for (RuleLabel label : applicable(s, z, {node.prefix.states.back(), node.memory}))
        dfs_enumerate(s, z, make_child(s, z, node, label), level + 1, depth, acct, out);
}

}  // namespace

std::vector<RunPrefix> enumerate_runs_serial(const System& s, const Regulation& z,
                                             std::size_t depth, const ExploreOptions& options) {
    CapAccounting acct(options.max_configs, depth);
    Node root{RunPrefix{{s.init()}, {}}, init_memory(z)};
    std::vector<RunPrefix> out;
    dfs_enumerate(s, z, root, 0, depth, acct, out);
    return out;
}

std::vector<RunPrefix> enumerate_runs(const System& s, const Regulation& z, std::size_t depth,
                                      const ExploreOptions& options) {
    CapAccounting acct(options.max_configs, depth);
    std::vector<Node> nodes{Node{RunPrefix{{s.init()}, {}}, init_memory(z)}};
    acct.visit(0, {nodes.front().prefix.states.back(), nodes.front().memory});

    for (std::size_t level = 1; level <= depth; ++level) {
        std::vector<std::vector<Node>> buckets(nodes.size());
        const bool go_parallel = options.parallel && nodes.size() >= kParallelGrain;
        (void)go_parallel;
#pragma omp parallel for schedule(dynamic, 16) if (go_parallel)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(nodes.size()); ++i) {
            const Node& parent = nodes[i];
            Configuration cfg{parent.prefix.states.back(), parent.memory};
            for (RuleLabel label : applicable(s, z, cfg))
                buckets[i].push_back(make_child(s, z, parent, label));
        }
        // Deterministic merge: bucket order is parent order, bucket contents
        // follow rule declaration order, so the result matches the serial run.
        std::vector<Node> next;
        for (auto& bucket : buckets)
            for (auto& child : bucket) next.push_back(std::move(child));
        for (const Node& n : next) acct.visit(level, {n.prefix.states.back(), n.memory});
        nodes = std::move(next);
    }

    std::vector<RunPrefix> out;
    out.reserve(nodes.size());
    for (Node& n : nodes) out.push_back(std::move(n.prefix));
    return out;
}

std::vector<StateSeq> state_sequences(const System& s, const Regulation& z, std::size_t depth,
                                      const ExploreOptions& options) {
    std::vector<RunPrefix> runs = enumerate_runs(s, z, depth, options);
    std::vector<StateSeq> seqs;
    seqs.reserve(runs.size());
    for (RunPrefix& r : runs) seqs.push_back(std::move(r.states));
    std::sort(seqs.begin(), seqs.end());
    seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());
    return seqs;
}

EquivResult bounded_equiv(const System& sa, const Regulation& za, const System& sb,
                          const Regulation& zb, std::size_t depth,
                          const ExploreOptions& options) {
    std::vector<StateSeq> a = state_sequences(sa, za, depth, options);
    std::vector<StateSeq> b = state_sequences(sb, zb, depth, options);
    if (a == b) return {};

    std::vector<StateSeq> only;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only));
    if (!only.empty()) return {false, EquivWitness{std::move(only.front()), 0}};
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only));
    return {false, EquivWitness{std::move(only.front()), 1}};
}

TerminalOutputs terminal_outputs(const System& s, const Regulation& z, ElementId out,
                                 std::size_t depth, const ExploreOptions& options) {
    if (out >= s.elements().size()) throw Error("output element is not part of the system");

    TerminalOutputs result;
    std::set<Configuration> visited;
    std::vector<Configuration> frontier{initial_configuration(s, z)};
    visited.insert(frontier.front());

    for (std::size_t level = 0; level <= depth; ++level) {
        std::vector<Configuration> next;
        for (const Configuration& c : frontier) {
            std::vector<RuleLabel> labels = applicable(s, z, c);
            const bool terminal = labels.size() == 1 && labels.front().is_eps();
            if (terminal) result.values.insert(c.state.multiplicity(out));
            if (level == depth) {
                if (!terminal) result.all_terminated = false;
                continue;
            }
            for (RuleLabel label : labels) {
                Configuration child{apply_label(s, label, c.state),
                                    advance_memory(z, c.memory, label)};
                if (visited.insert(child).second) {
                    if (visited.size() > options.max_configs)
                        throw ExplosionLimitError(options.max_configs);
                    next.push_back(std::move(child));
                }
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    if (!result.values.empty()) result.max = *result.values.rbegin();
    return result;
}

std::vector<std::vector<RuleLabel>> well_matchedness_gaps(const System& s, const Regulation& z,
                                                          std::size_t depth,
                                                          std::size_t max_reported) {
    if (regulation_class(z) != RegulationClass::Regular) return {};
    const auto& automaton = std::get<RegularZeta>(z).automaton();

    std::vector<RuleLabel> alphabet;
    for (std::uint32_t i = 0; i < s.rules().size(); ++i) alphabet.emplace_back(i);
    alphabet.push_back(RuleLabel::eps());

    std::vector<std::vector<RuleLabel>> gaps;
    using Word = std::vector<RuleLabel>;
    std::vector<std::pair<Word, std::vector<std::uint32_t>>> frontier{
        {Word{}, automaton.live_initial()}};

    for (std::size_t len = 1; len <= depth && !frontier.empty(); ++len) {
        std::set<Word> realized;
        for (const RunPrefix& run : enumerate_runs(s, z, len)) realized.insert(run.labels);
        std::vector<std::pair<Word, std::vector<std::uint32_t>>> next;
        for (const auto& [word, states] : frontier) {
            for (RuleLabel sym : alphabet) {
                std::vector<std::uint32_t> stepped = step_states(automaton, states, sym);
                if (stepped.empty()) continue;
                Word extended = word;
                extended.push_back(sym);
                if (!realized.count(extended) && gaps.size() < max_reported)
                    gaps.push_back(extended);
                next.emplace_back(std::move(extended), std::move(stepped));
            }
        }
        frontier = std::move(next);
    }
    return gaps;
}

}  // namespace rmrs
