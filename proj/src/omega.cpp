#include "rmrs/omega.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

#include "rmrs/error.hpp"

namespace rmrs {

namespace {

RegexPtr make_node(RegexNode node) { return std::make_shared<const RegexNode>(std::move(node)); }

void sort_unique(std::vector<std::uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

RegexPtr rx_symbol(RuleLabel s) {
    return make_node({RegexNode::Kind::Symbol, s, {}});
}

RegexPtr rx_concat(std::vector<RegexPtr> kids) {
    std::vector<RegexPtr> flat;
    for (auto& k : kids) {
        assert(k);
        if (k->kind == RegexNode::Kind::EmptyWord) continue;  // neutral for concatenation
        if (k->kind == RegexNode::Kind::Concat) {
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (flat.empty()) return rx_empty_word();
    if (flat.size() == 1) return flat.front();
    return make_node({RegexNode::Kind::Concat, RuleLabel(), std::move(flat)});
}

RegexPtr rx_union(std::vector<RegexPtr> kids) {
    std::vector<RegexPtr> flat;
    for (auto& k : kids) {
        assert(k);
        if (k->kind == RegexNode::Kind::Union) {
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        } else {
            flat.push_back(std::move(k));
        }
    }
    if (flat.empty()) throw Error("union of no alternatives");
    if (flat.size() == 1) return flat.front();
    return make_node({RegexNode::Kind::Union, RuleLabel(), std::move(flat)});
}

RegexPtr rx_star(RegexPtr kid) {
    assert(kid);
    if (kid->kind == RegexNode::Kind::Star) return kid;
    if (kid->kind == RegexNode::Kind::EmptyWord) return kid;
    return make_node({RegexNode::Kind::Star, RuleLabel(), {std::move(kid)}});
}

RegexPtr rx_empty_word() {
    return make_node({RegexNode::Kind::EmptyWord, RuleLabel(), {}});
}

bool regex_equal(const RegexPtr& a, const RegexPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case RegexNode::Kind::Symbol:
            return a->symbol == b->symbol;
        case RegexNode::Kind::EmptyWord:
            return true;
        default:
            if (a->kids.size() != b->kids.size()) return false;
            for (std::size_t i = 0; i < a->kids.size(); ++i)
                if (!regex_equal(a->kids[i], b->kids[i])) return false;
            return true;
    }
}

bool regex_nullable(const RegexPtr& e) {
    switch (e->kind) {
        case RegexNode::Kind::Symbol:
            return false;
        case RegexNode::Kind::EmptyWord:
        case RegexNode::Kind::Star:
            return true;
        case RegexNode::Kind::Concat: {
            for (const auto& k : e->kids)
                if (!regex_nullable(k)) return false;
            return true;
        }
        case RegexNode::Kind::Union: {
            for (const auto& k : e->kids)
                if (regex_nullable(k)) return true;
            return false;
        }
    }
    return false;
}

namespace {

// Printing precedence: union < concat < star/atom.
std::string print_regex(const RegexPtr& e, int min_prec, const SymbolNamer& name) {
    switch (e->kind) {
        case RegexNode::Kind::Symbol:
            return name(e->symbol);
        case RegexNode::Kind::EmptyWord:
            throw Error("the empty word has no text form");
        case RegexNode::Kind::Star: {
            const RegexPtr& kid = e->kids.front();
            if (kid->kind == RegexNode::Kind::Symbol) return name(kid->symbol) + "*";
            return "(" + print_regex(kid, 0, name) + ")*";
        }
        case RegexNode::Kind::Concat: {
            std::string out;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += " . ";
                out += print_regex(e->kids[i], 2, name);
            }
            return min_prec > 1 ? "(" + out + ")" : out;
        }
        case RegexNode::Kind::Union: {
            std::string out;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                if (i) out += " | ";
                out += print_regex(e->kids[i], 1, name);
            }
            return min_prec > 0 ? "(" + out + ")" : out;
        }
    }
    return {};
}

}  // namespace

std::string regex_to_string(const RegexPtr& e, const SymbolNamer& name) {
    return print_regex(e, 0, name);
}

bool omega_equal(const OmegaExpr& a, const OmegaExpr& b) {
    if (a.lassos.size() != b.lassos.size()) return false;
    for (std::size_t i = 0; i < a.lassos.size(); ++i) {
        if (!regex_equal(a.lassos[i].prefix, b.lassos[i].prefix)) return false;
        if (!regex_equal(a.lassos[i].cycle, b.lassos[i].cycle)) return false;
    }
    return true;
}

std::string omega_to_string(const OmegaExpr& e, const SymbolNamer& name) {
    std::string out;
    for (std::size_t i = 0; i < e.lassos.size(); ++i) {
        if (i) out += " | ";
        const Lasso& l = e.lassos[i];
        if (l.prefix->kind != RegexNode::Kind::EmptyWord)
            out += print_regex(l.prefix, 1, name) + " . ";
        if (l.cycle->kind == RegexNode::Kind::Symbol) {
            out += name(l.cycle->symbol) + "^w";
        } else {
            out += "(" + print_regex(l.cycle, 0, name) + ")^w";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Kind { Symbol, Dot, Bar, Star, Omega, LParen, RParen, End };
    Kind kind;
    std::string text;
    int column;  // 1-based
};

std::vector<Token> lex_omega(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        int col = static_cast<int>(i) + 1;
        if (c == ' ' || c == '\t') {
            ++i;
        } else if (c == '.') {
            out.push_back({Token::Kind::Dot, ".", col});
            ++i;
        } else if (c == '|') {
            out.push_back({Token::Kind::Bar, "|", col});
            ++i;
        } else if (c == '*') {
            out.push_back({Token::Kind::Star, "*", col});
            ++i;
        } else if (c == '(') {
            out.push_back({Token::Kind::LParen, "(", col});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::Kind::RParen, ")", col});
            ++i;
        } else if (c == '^') {
            if (i + 1 >= text.size() || text[i + 1] != 'w')
                throw ParseError(1, col, "expected 'w' after '^'");
            out.push_back({Token::Kind::Omega, "^w", col});
            i += 2;
        } else if (is_valid_token(std::string_view(&c, 1))) {
            std::size_t j = i;
            while (j < text.size() && is_valid_token(std::string_view(&text[j], 1))) ++j;
            out.push_back({Token::Kind::Symbol, std::string(text.substr(i, j - i)), col});
            i = j;
        } else {
            throw ParseError(1, col, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Token::Kind::End, "", static_cast<int>(text.size()) + 1});
    return out;
}

// Parse tree with an explicit omega-power node; converted to lassos after
// structural validation.
struct PNode {
    enum class Kind { Symbol, Concat, Union, Star, Omega };
    Kind kind;
    RuleLabel symbol;
    int column = 0;
    std::vector<std::shared_ptr<PNode>> kids;
};
using PPtr = std::shared_ptr<PNode>;

class OmegaParser {
public:
    OmegaParser(std::vector<Token> tokens,
                const std::map<std::string, RuleLabel, std::less<>>& symbols)
        : tokens_(std::move(tokens)), symbols_(symbols) {}

    PPtr parse() {
        PPtr e = parse_union();
        if (peek().kind != Token::Kind::End)
            throw ParseError(1, peek().column, "unexpected '" + peek().text + "'");
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token take() { return tokens_[pos_++]; }

    PPtr parse_union() {
        std::vector<PPtr> branches{parse_concat()};
        while (peek().kind == Token::Kind::Bar) {
            take();
            branches.push_back(parse_concat());
        }
        if (branches.size() == 1) return branches.front();
        auto node = std::make_shared<PNode>();
        node->kind = PNode::Kind::Union;
        node->kids = std::move(branches);
        return node;
    }

    PPtr parse_concat() {
        std::vector<PPtr> factors{parse_postfix()};
        while (peek().kind == Token::Kind::Dot) {
            take();
            factors.push_back(parse_postfix());
        }
        if (factors.size() == 1) return factors.front();
        auto node = std::make_shared<PNode>();
        node->kind = PNode::Kind::Concat;
        node->kids = std::move(factors);
        return node;
    }

    PPtr parse_postfix() {
        PPtr e = parse_atom();
        while (peek().kind == Token::Kind::Star || peek().kind == Token::Kind::Omega) {
            Token t = take();
            auto node = std::make_shared<PNode>();
            node->kind = t.kind == Token::Kind::Star ? PNode::Kind::Star : PNode::Kind::Omega;
            node->column = t.column;
            node->kids = {e};
            e = node;
        }
        return e;
    }

    PPtr parse_atom() {
        const Token& t = peek();
        if (t.kind == Token::Kind::LParen) {
            take();
            PPtr e = parse_union();
            if (peek().kind != Token::Kind::RParen)
                throw ParseError(1, peek().column, "expected ')'");
            take();
            return e;
        }
        if (t.kind == Token::Kind::Symbol) {
            Token sym = take();
            auto node = std::make_shared<PNode>();
            node->kind = PNode::Kind::Symbol;
            node->column = sym.column;
            if (sym.text == kEpsName) {
                node->symbol = RuleLabel::eps();
            } else {
                auto it = symbols_.find(sym.text);
                if (it == symbols_.end())
                    throw ParseError(1, sym.column, "unknown symbol '" + sym.text + "'");
                node->symbol = it->second;
            }
            return node;
        }
        throw ParseError(1, t.column,
                         t.kind == Token::Kind::End ? "unexpected end of expression"
                                                    : "unexpected '" + t.text + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const std::map<std::string, RuleLabel, std::less<>>& symbols_;
};

bool contains_omega(const PPtr& e) {
    if (e->kind == PNode::Kind::Omega) return true;
    for (const auto& k : e->kids)
        if (contains_omega(k)) return true;
    return false;
}

RegexPtr to_regex(const PPtr& e) {
    switch (e->kind) {
        case PNode::Kind::Symbol:
            return rx_symbol(e->symbol);
        case PNode::Kind::Star:
            return rx_star(to_regex(e->kids.front()));
        case PNode::Kind::Concat: {
            std::vector<RegexPtr> kids;
            for (const auto& k : e->kids) kids.push_back(to_regex(k));
            return rx_concat(std::move(kids));
        }
        case PNode::Kind::Union: {
            std::vector<RegexPtr> kids;
            for (const auto& k : e->kids) kids.push_back(to_regex(k));
            return rx_union(std::move(kids));
        }
        case PNode::Kind::Omega:
            throw ParseError(1, e->column, "malformed omega-expression: '^w' nested inside a lasso");
    }
    return {};
}

Lasso branch_to_lasso(const PPtr& branch) {
    std::vector<PPtr> factors;
    if (branch->kind == PNode::Kind::Concat) {
        factors = branch->kids;
    } else {
        factors = {branch};
    }
    const PPtr& tail = factors.back();
    if (tail->kind != PNode::Kind::Omega) {
        throw ParseError(1, 0, "malformed omega-expression: lasso without '^w' tail");
    }
    for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
        if (contains_omega(factors[i]))
            throw ParseError(1, factors[i]->column,
                             "malformed omega-expression: '^w' must terminate the lasso");
    }
    const PPtr& cycle_node = tail->kids.front();
    if (contains_omega(cycle_node))
        throw ParseError(1, tail->column, "malformed omega-expression: nested '^w'");
    RegexPtr cycle = to_regex(cycle_node);
    if (regex_nullable(cycle))
        throw ParseError(1, tail->column,
                         "malformed omega-expression: '^w' on an expression deriving the empty word");
    std::vector<RegexPtr> prefix_kids;
    for (std::size_t i = 0; i + 1 < factors.size(); ++i) prefix_kids.push_back(to_regex(factors[i]));
    RegexPtr prefix = prefix_kids.empty() ? rx_empty_word() : rx_concat(std::move(prefix_kids));
    return Lasso{std::move(prefix), std::move(cycle)};
}

}  // namespace

OmegaExpr parse_omega(std::string_view text,
                      const std::map<std::string, RuleLabel, std::less<>>& symbols) {
    OmegaParser parser(lex_omega(text), symbols);
    PPtr root = parser.parse();

    std::vector<PPtr> branches;
    if (root->kind == PNode::Kind::Union) {
        branches = root->kids;
    } else {
        branches = {root};
    }
    OmegaExpr expr;
    for (const auto& b : branches) expr.lassos.push_back(branch_to_lasso(b));
    return expr;
}

OmegaExpr parse_omega(std::string_view text, const System& system) {
    std::map<std::string, RuleLabel, std::less<>> symbols;
    for (std::uint32_t i = 0; i < system.rules().size(); ++i)
        symbols.emplace(system.rules()[i].id, RuleLabel(i));
    return parse_omega(text, symbols);
}

// ---------------------------------------------------------------------------
// Automaton construction (Glushkov position automata joined into lassos)
// ---------------------------------------------------------------------------

namespace {

struct Nfa {
    std::uint32_t num_states = 0;  // state 0 is the start
    std::vector<std::vector<std::pair<RuleLabel, std::uint32_t>>> trans;
    std::vector<bool> final;
};

struct GlushkovInfo {
    bool nullable;
    std::vector<std::uint32_t> first, last;
};

GlushkovInfo glushkov(const RegexPtr& e, std::vector<RuleLabel>& positions,
                      std::vector<std::vector<std::uint32_t>>& follow) {
    switch (e->kind) {
        case RegexNode::Kind::Symbol: {
            auto p = static_cast<std::uint32_t>(positions.size());
            positions.push_back(e->symbol);
            follow.emplace_back();
            return {false, {p}, {p}};
        }
        case RegexNode::Kind::EmptyWord:
            return {true, {}, {}};
        case RegexNode::Kind::Concat: {
            GlushkovInfo acc = glushkov(e->kids.front(), positions, follow);
            for (std::size_t i = 1; i < e->kids.size(); ++i) {
                GlushkovInfo next = glushkov(e->kids[i], positions, follow);
                for (std::uint32_t l : acc.last)
                    follow[l].insert(follow[l].end(), next.first.begin(), next.first.end());
                GlushkovInfo merged;
                merged.nullable = acc.nullable && next.nullable;
                merged.first = acc.first;
                if (acc.nullable)
                    merged.first.insert(merged.first.end(), next.first.begin(), next.first.end());
                merged.last = next.last;
                if (next.nullable)
                    merged.last.insert(merged.last.end(), acc.last.begin(), acc.last.end());
                acc = std::move(merged);
            }
            return acc;
        }
        case RegexNode::Kind::Union: {
            GlushkovInfo acc{false, {}, {}};
            for (const auto& k : e->kids) {
                GlushkovInfo info = glushkov(k, positions, follow);
                acc.nullable = acc.nullable || info.nullable;
                acc.first.insert(acc.first.end(), info.first.begin(), info.first.end());
                acc.last.insert(acc.last.end(), info.last.begin(), info.last.end());
            }
            return acc;
        }
        case RegexNode::Kind::Star: {
            GlushkovInfo info = glushkov(e->kids.front(), positions, follow);
            for (std::uint32_t l : info.last)
                follow[l].insert(follow[l].end(), info.first.begin(), info.first.end());
            info.nullable = true;
            return info;
        }
    }
    return {true, {}, {}};
}

Nfa regex_to_nfa(const RegexPtr& e) {
    std::vector<RuleLabel> positions;
    std::vector<std::vector<std::uint32_t>> follow;
    GlushkovInfo info = glushkov(e, positions, follow);

    Nfa nfa;
    nfa.num_states = static_cast<std::uint32_t>(positions.size()) + 1;
    nfa.trans.resize(nfa.num_states);
    nfa.final.assign(nfa.num_states, false);
    for (std::uint32_t p : info.first) nfa.trans[0].emplace_back(positions[p], p + 1);
    for (std::uint32_t q = 0; q < positions.size(); ++q) {
        sort_unique(follow[q]);
        for (std::uint32_t p : follow[q]) nfa.trans[q + 1].emplace_back(positions[p], p + 1);
    }
    for (std::uint32_t p : info.last) nfa.final[p + 1] = true;
    if (info.nullable) nfa.final[0] = true;
    return nfa;
}

void compute_liveness(BuchiAutomaton& a) {
    // Core: accepting states lying on a cycle through themselves.
    std::vector<std::vector<std::uint32_t>> fwd(a.num_states), rev(a.num_states);
    for (std::uint32_t q = 0; q < a.num_states; ++q) {
        for (const auto& [sym, tgt] : a.transitions[q]) {
            fwd[q].push_back(tgt);
            rev[tgt].push_back(q);
        }
    }
    auto reachable_from = [&](std::uint32_t start, const auto& adj) {
        std::vector<bool> seen(a.num_states, false);
        std::deque<std::uint32_t> queue(adj[start].begin(), adj[start].end());
        while (!queue.empty()) {
            std::uint32_t q = queue.front();
            queue.pop_front();
            if (seen[q]) continue;
            seen[q] = true;
            for (std::uint32_t n : adj[q]) queue.push_back(n);
        }
        return seen;
    };

    std::vector<bool> core(a.num_states, false);
    for (std::uint32_t q = 0; q < a.num_states; ++q) {
        if (!a.accepting[q]) continue;
        if (reachable_from(q, fwd)[q]) core[q] = true;
    }
    a.live.assign(a.num_states, false);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t q = 0; q < a.num_states; ++q) {
        if (core[q]) {
            a.live[q] = true;
            queue.push_back(q);
        }
    }
    while (!queue.empty()) {
        std::uint32_t q = queue.front();
        queue.pop_front();
        for (std::uint32_t p : rev[q]) {
            if (!a.live[p]) {
                a.live[p] = true;
                queue.push_back(p);
            }
        }
    }
}

}  // namespace

std::vector<std::uint32_t> BuchiAutomaton::live_initial() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t q : initial)
        if (live[q]) out.push_back(q);
    return out;
}

BuchiAutomaton to_buchi(const OmegaExpr& e) {
    BuchiAutomaton a;
    for (const Lasso& lasso : e.lassos) {
        Nfa u = regex_to_nfa(lasso.prefix);
        Nfa v = regex_to_nfa(lasso.cycle);
        std::uint32_t u_base = a.num_states;
        std::uint32_t v_base = u_base + u.num_states;
        std::uint32_t v_start = v_base;
        a.num_states += u.num_states + v.num_states;
        a.transitions.resize(a.num_states);
        a.accepting.resize(a.num_states, false);

        for (std::uint32_t q = 0; q < u.num_states; ++q) {
            for (const auto& [sym, tgt] : u.trans[q]) {
                a.transitions[u_base + q].emplace_back(sym, u_base + tgt);
                if (u.final[tgt]) a.transitions[u_base + q].emplace_back(sym, v_start);
            }
        }
        for (std::uint32_t q = 0; q < v.num_states; ++q) {
            for (const auto& [sym, tgt] : v.trans[q]) {
                a.transitions[v_base + q].emplace_back(sym, v_base + tgt);
                if (v.final[tgt]) a.transitions[v_base + q].emplace_back(sym, v_start);
            }
        }
        a.initial.push_back(u_base);
        if (u.final[0]) a.initial.push_back(v_start);  // empty prefix word
        a.accepting[v_start] = true;
    }
    for (auto& t : a.transitions) {
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
    }
    sort_unique(a.initial);
    compute_liveness(a);
    return a;
}

std::vector<std::uint32_t> step_states(const BuchiAutomaton& a,
                                       const std::vector<std::uint32_t>& qs, RuleLabel sym) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t q : qs) {
        const auto& trans = a.transitions[q];
        auto lo = std::lower_bound(trans.begin(), trans.end(), sym,
                                   [](const auto& t, RuleLabel s) { return t.first < s; });
        for (auto it = lo; it != trans.end() && it->first == sym; ++it) {
            if (a.live[it->second]) out.push_back(it->second);
        }
    }
    sort_unique(out);
    return out;
}

bool prefix_viable(const BuchiAutomaton& a, std::span<const RuleLabel> word) {
    std::vector<std::uint32_t> qs = a.live_initial();
    for (RuleLabel sym : word) {
        if (qs.empty()) return false;
        qs = step_states(a, qs, sym);
    }
    return !qs.empty();
}

bool accepts_eps_tail(const BuchiAutomaton& a, const std::vector<std::uint32_t>& qs) {
    // Restrict to eps-labelled edges and look for an accepting state on an
    // eps-cycle reachable from qs.
    std::vector<std::vector<std::uint32_t>> eps_fwd(a.num_states);
    for (std::uint32_t q = 0; q < a.num_states; ++q) {
        for (const auto& [sym, tgt] : a.transitions[q])
            if (sym.is_eps()) eps_fwd[q].push_back(tgt);
    }
    auto eps_reach = [&](std::uint32_t start) {
        std::vector<bool> seen(a.num_states, false);
        std::deque<std::uint32_t> queue(eps_fwd[start].begin(), eps_fwd[start].end());
        while (!queue.empty()) {
            std::uint32_t q = queue.front();
            queue.pop_front();
            if (seen[q]) continue;
            seen[q] = true;
            for (std::uint32_t n : eps_fwd[q]) queue.push_back(n);
        }
        return seen;
    };
    std::vector<bool> core(a.num_states, false);
    for (std::uint32_t q = 0; q < a.num_states; ++q)
        if (a.accepting[q] && eps_reach(q)[q]) core[q] = true;
    for (std::uint32_t q : qs) {
        if (core[q]) return true;
        std::vector<bool> seen = eps_reach(q);
        for (std::uint32_t t = 0; t < a.num_states; ++t)
            if (seen[t] && core[t]) return true;
    }
    return false;
}

std::string dump_automaton(const BuchiAutomaton& a, const SymbolNamer& name) {
    std::ostringstream out;
    out << "states: " << a.num_states << "\n";
    out << "initial:";
    for (std::uint32_t q : a.initial) out << " " << q;
    out << "\naccepting:";
    for (std::uint32_t q = 0; q < a.num_states; ++q)
        if (a.accepting[q]) out << " " << q;
    out << "\nlive:";
    for (std::uint32_t q = 0; q < a.num_states; ++q)
        if (a.live[q]) out << " " << q;
    out << "\n";
    for (std::uint32_t q = 0; q < a.num_states; ++q) {
        for (const auto& [sym, tgt] : a.transitions[q])
            out << "trans: " << q << " " << name(sym) << " " << tgt << "\n";
    }
    return out.str();
}

}  // namespace rmrs
