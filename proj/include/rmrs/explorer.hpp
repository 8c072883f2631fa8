#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rmrs/regulation.hpp"
#include "rmrs/rewriting.hpp"

namespace rmrs {

// System state paired with the regulation memory that the step semantics
// threads along a run.
struct Configuration {
    Multiset state;
    RegulationMemory memory;

    bool operator==(const Configuration& other) const {
        return state == other.state && memory == other.memory;
    }
    bool operator<(const Configuration& other) const {
        if (state != other.state) return state < other.state;
        return memory_less(memory, other.memory);
    }
};

Configuration initial_configuration(const System& s, const Regulation& z);

// The labels that may fire at c: the multiset-enabled rules the regulation
// permits; when that set is empty, eps if permitted. Empty only under
// Regular regulation (a dead end). Sorted by declaration order, eps last.
std::vector<RuleLabel> applicable(const System& s, const Regulation& z, const Configuration& c);

// Applies one applicable label; throws NotApplicableError otherwise.
Configuration step(const System& s, const Regulation& z, const Configuration& c, RuleLabel label);

enum class InvalidReason { NotEnabled, RegulationForbids, EpsNotFallback, AutomatonDead };

std::string invalid_reason_name(InvalidReason r);

struct RunVerdict {
    bool valid = true;
    std::size_t step = 0;  // 1-based step of the first violation
    InvalidReason reason = InvalidReason::NotEnabled;

    static RunVerdict ok() { return {}; }
    static RunVerdict bad(std::size_t step, InvalidReason reason) {
        return {false, step, reason};
    }
    bool operator==(const RunVerdict&) const = default;
};

std::string verdict_to_string(const RunVerdict& v);

// Replays the labels from the initial configuration and reports the first
// violation. With omega_eps_tail the run must continue as eps^omega: eps must
// be the applicable fallback at the final configuration (checked across the
// whole eps tail under Regular regulation, together with Buchi acceptance).
// Tail failures are reported at step labels.size() + 1.
RunVerdict validate_run(const System& s, const Regulation& z, std::span<const RuleLabel> labels,
                        bool omega_eps_tail);

struct ExploreOptions {
    std::size_t max_configs = 1'000'000;
    bool parallel = true;
};

// All run prefixes of exactly `depth` steps, in lexicographic label order
// (declaration order, eps last). Under Regular regulation dead-end prefixes
// are dropped together with their extensions. Throws ExplosionLimitError when
// the per-level deduplicated configuration count (or the prefix count)
// exceeds options.max_configs.
std::vector<RunPrefix> enumerate_runs(const System& s, const Regulation& z, std::size_t depth,
                                      const ExploreOptions& options = {});

// Single-threaded reference implementation (recursive, no level batching).
// Kept independent of the parallel kernel so the two can be checked against
// each other; output is byte-identical.
std::vector<RunPrefix> enumerate_runs_serial(const System& s, const Regulation& z,
                                             std::size_t depth,
                                             const ExploreOptions& options = {});

using StateSeq = std::vector<Multiset>;

// Label-erased, deduplicated, sorted state sequences at the given depth.
std::vector<StateSeq> state_sequences(const System& s, const Regulation& z, std::size_t depth,
                                      const ExploreOptions& options = {});

struct EquivWitness {
    StateSeq sequence;
    int side = 0;  // 0: only produced by the first system, 1: only by the second
};

struct EquivResult {
    bool equal = true;
    std::optional<EquivWitness> witness;
};

// Bounded run-set equality: compares state sequences (run labels erased) of
// the two regulated systems at the given depth.
EquivResult bounded_equiv(const System& sa, const Regulation& za, const System& sb,
                          const Regulation& zb, std::size_t depth,
                          const ExploreOptions& options = {});

struct TerminalOutputs {
    Count max = 0;
    std::set<Count> values;
    bool all_terminated = true;
};

// Explores the configuration graph to `depth` steps. A configuration is
// terminal when applicable == {eps}; the multiplicity of `out` is collected
// over terminal configurations. all_terminated is false when a non-terminal
// configuration sits on the depth frontier.
TerminalOutputs terminal_outputs(const System& s, const Regulation& z, ElementId out,
                                 std::size_t depth, const ExploreOptions& options = {});

// Bounded well-matchedness scan for Regular regulations: label prefixes the
// automaton considers viable but no run realizes, up to the given length.
// Diagnostic only; at most max_reported words are returned.
std::vector<std::vector<RuleLabel>> well_matchedness_gaps(const System& s, const Regulation& z,
                                                          std::size_t depth,
                                                          std::size_t max_reported = 16);

}  // namespace rmrs
