#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "rmrs/error.hpp"

namespace rmrs {

using ElementId = std::uint32_t;
using Count = std::uint64_t;

// Finite mapping element -> multiplicity, kept in canonical form: entries
// sorted by element id and every stored count >= 1. Equality and ordering
// are entry-wise on the canonical representation.
class Multiset {
public:
    using Entry = std::pair<ElementId, Count>;

    Multiset() = default;

    // Canonicalizes: merges duplicate ids, drops zero counts, sorts.
    static Multiset from_entries(std::vector<Entry> entries);

    // One entry per listed id; repetition encodes multiplicity.
    static Multiset of(std::initializer_list<ElementId> ids);

    Count multiplicity(ElementId a) const;

    bool empty() const { return entries_.empty(); }
    Count total() const;
    const std::vector<Entry>& entries() const { return entries_; }

    // Largest element id stored + 1; 0 for the empty multiset. Used to
    // validate that a multiset fits a system's element universe.
    ElementId id_bound() const;

    bool operator==(const Multiset&) const = default;
    auto operator<=>(const Multiset&) const = default;

private:
    std::vector<Entry> entries_;
};

// x subseteq y, multiplicity-wise.
bool subset(const Multiset& x, const Multiset& y);

// Per-element sum of multiplicities (additive union).
Multiset sum_union(const Multiset& x, const Multiset& y);

// Per-element difference; requires subset(y, x), throws NotContainedError
// otherwise.
Multiset difference(const Multiset& x, const Multiset& y);

Count multiplicity(const Multiset& m, ElementId a);

// True when the two multisets share at least one element occurrence.
bool intersects(const Multiset& x, const Multiset& y);

}  // namespace rmrs
