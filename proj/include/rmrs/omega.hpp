#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmrs/rewriting.hpp"

namespace rmrs {

// Regular expression over rule labels (finite words). Symbols include the
// empty rule as a first-class letter; the empty word exists only as the
// EmptyWord node and has no surface token.
struct RegexNode;
using RegexPtr = std::shared_ptr<const RegexNode>;

struct RegexNode {
    enum class Kind { Symbol, Concat, Union, Star, EmptyWord };

    Kind kind;
    RuleLabel symbol;            // Kind::Symbol only
    std::vector<RegexPtr> kids;  // Concat/Union: >= 2 after normalization; Star: exactly 1
};

// Constructors normalize: single-child Concat/Union collapse to the child,
// nested Concat/Union of the same kind flatten, Star(Star(e)) -> Star(e).
RegexPtr rx_symbol(RuleLabel s);
RegexPtr rx_concat(std::vector<RegexPtr> kids);
RegexPtr rx_union(std::vector<RegexPtr> kids);
RegexPtr rx_star(RegexPtr kid);
RegexPtr rx_empty_word();

bool regex_equal(const RegexPtr& a, const RegexPtr& b);
bool regex_nullable(const RegexPtr& e);

using SymbolNamer = std::function<std::string(RuleLabel)>;

// Canonical text form; parse_omega(regex_to_string(e)) reproduces e.
std::string regex_to_string(const RegexPtr& e, const SymbolNamer& name);

// One prefix-cycle pair of an omega-regular language U.V^omega. The cycle
// language never contains the empty word.
struct Lasso {
    RegexPtr prefix;  // may be EmptyWord
    RegexPtr cycle;
};

struct OmegaExpr {
    std::vector<Lasso> lassos;  // non-empty; language is the union
};

bool omega_equal(const OmegaExpr& a, const OmegaExpr& b);
std::string omega_to_string(const OmegaExpr& e, const SymbolNamer& name);

// Grammar: `.` concatenation, `|` union, `*` star, parentheses, and `^w`
// terminating the tail of each top-level lasso. Symbols must resolve through
// `symbols` or be the token `eps`. Throws ParseError; the reported column is
// 1-based within `text`.
OmegaExpr parse_omega(std::string_view text,
                      const std::map<std::string, RuleLabel, std::less<>>& symbols);
OmegaExpr parse_omega(std::string_view text, const System& system);

// Nondeterministic Buchi automaton over rule labels. `live` marks states
// with a non-empty omega-language ahead; stepping prunes dead states eagerly.
struct BuchiAutomaton {
    std::uint32_t num_states = 0;
    std::vector<std::vector<std::pair<RuleLabel, std::uint32_t>>> transitions;  // per state, sorted
    std::vector<std::uint32_t> initial;  // sorted
    std::vector<bool> accepting;
    std::vector<bool> live;

    std::vector<std::uint32_t> live_initial() const;
};

// Standard union-of-lassos realization: per lasso, finite-word automata for
// prefix and cycle are joined so that completing the cycle re-enters its
// start state, which is the (only) accepting state of the lasso.
BuchiAutomaton to_buchi(const OmegaExpr& e);

std::vector<std::uint32_t> step_states(const BuchiAutomaton& a,
                                       const std::vector<std::uint32_t>& qs, RuleLabel sym);

// True when some accepted infinite word extends the finite prefix.
bool prefix_viable(const BuchiAutomaton& a, std::span<const RuleLabel> word);

// True when the infinite word eps^omega is accepted starting from `qs`.
bool accepts_eps_tail(const BuchiAutomaton& a, const std::vector<std::uint32_t>& qs);

// Line-oriented dump of states, transitions, accepting and live sets.
std::string dump_automaton(const BuchiAutomaton& a, const SymbolNamer& name);

}  // namespace rmrs
