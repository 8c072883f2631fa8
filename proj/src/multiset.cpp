#include "rmrs/multiset.hpp"

#include <algorithm>
#include <map>

namespace rmrs {

Multiset Multiset::from_entries(std::vector<Entry> entries) {
    std::map<ElementId, Count> acc;
    for (const auto& [id, count] : entries) acc[id] += count;
    Multiset m;
    m.entries_.reserve(acc.size());
    for (const auto& [id, count] : acc) {
        if (count > 0) m.entries_.emplace_back(id, count);
    }
    return m;
}

Multiset Multiset::of(std::initializer_list<ElementId> ids) {
    std::vector<Entry> entries;
    entries.reserve(ids.size());
    for (ElementId id : ids) entries.emplace_back(id, 1);
    return from_entries(std::move(entries));
}

Count Multiset::multiplicity(ElementId a) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), a,
                               [](const Entry& e, ElementId id) { return e.first < id; });
    if (it != entries_.end() && it->first == a) return it->second;
    return 0;
}

Count Multiset::total() const {
    Count sum = 0;
    for (const auto& [id, count] : entries_) sum += count;
    return sum;
}

ElementId Multiset::id_bound() const {
    return entries_.empty() ? 0 : entries_.back().first + 1;
}

bool subset(const Multiset& x, const Multiset& y) {
    // Both entry lists are sorted; walk them in lockstep.
    auto ix = x.entries().begin(), ex = x.entries().end();
    auto iy = y.entries().begin(), ey = y.entries().end();
    while (ix != ex) {
        while (iy != ey && iy->first < ix->first) ++iy;
        if (iy == ey || iy->first != ix->first || ix->second > iy->second) return false;
        ++ix;
    }
    return true;
}

Multiset sum_union(const Multiset& x, const Multiset& y) {
    std::vector<Multiset::Entry> entries;
    entries.reserve(x.entries().size() + y.entries().size());
    entries.insert(entries.end(), x.entries().begin(), x.entries().end());
    entries.insert(entries.end(), y.entries().begin(), y.entries().end());
    return Multiset::from_entries(std::move(entries));
}

Multiset difference(const Multiset& x, const Multiset& y) {
    if (!subset(y, x)) throw NotContainedError("multiset difference without containment");
    std::vector<Multiset::Entry> entries;
    entries.reserve(x.entries().size());
    for (const auto& [id, count] : x.entries()) {
        Count remaining = count - y.multiplicity(id);
        if (remaining > 0) entries.emplace_back(id, remaining);
    }
    return Multiset::from_entries(std::move(entries));
}

Count multiplicity(const Multiset& m, ElementId a) { return m.multiplicity(a); }

bool intersects(const Multiset& x, const Multiset& y) {
    auto ix = x.entries().begin(), ex = x.entries().end();
    auto iy = y.entries().begin(), ey = y.entries().end();
    while (ix != ex && iy != ey) {
        if (ix->first < iy->first) {
            ++ix;
        } else if (iy->first < ix->first) {
            ++iy;
        } else {
            return true;
        }
    }
    return false;
}

}  // namespace rmrs
