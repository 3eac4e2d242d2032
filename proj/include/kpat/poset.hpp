#ifndef KPAT_POSET_HPP
#define KPAT_POSET_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "element_set.hpp"

namespace kpat {

using Element = std::size_t;
using Relation = std::pair<Element, Element>;

/// A finite strict partial order on 0..n-1 for which the natural order is a
/// linear extension: x < y in the poset implies x < y as integers.
///
/// The relation is stored transitively closed, once as lower sets and once as
/// upper sets. Values are immutable after construction.
class Poset {
   public:
    Poset() = default;

    /// The antichain on n elements.
    explicit Poset(std::size_t n) : n_(n), lower_(n), upper_(n) {
        if (n > kMaxElements)
            throw std::length_error("poset has " + std::to_string(n) + " elements; limit is " +
                                    std::to_string(kMaxElements));
    }

    static Poset antichain(std::size_t n) { return Poset(n); }
    static Poset chain(std::size_t n) {
        Poset p(n);
        for (Element j = 0; j < n; ++j) {
            p.lower_[j] = ElementSet::first(j);
            for (Element i = j + 1; i < n; ++i) p.upper_[j].set(i);
        }
        p.rel_count_ = n * (n - 1) / 2;
        return p;
    }

    /// Transitive closure of the generating pairs. Every pair must satisfy i < j < n.
    static Poset from_relations(std::size_t n, std::span<const Relation> pairs) {
        std::vector<ElementSet> lower(n);
        for (auto [i, j] : pairs) {
            if (i >= j || j >= n)
                throw std::invalid_argument("relation (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) +
                                            ") violates the natural-order linear extension");
            lower[j].set(i);
        }
        return from_lower_sets(std::move(lower));
    }
    static Poset from_relations(std::size_t n, std::initializer_list<Relation> pairs) {
        return from_relations(n, std::span<const Relation>(pairs.begin(), pairs.size()));
    }

    /// Closes arbitrary lower sets (each lower[j] must lie in 0..j-1).
    static Poset from_lower_sets(std::vector<ElementSet> lower) {
        Poset p(lower.size());
        for (Element j = 0; j < p.n_; ++j) {
            if (!lower[j].is_subset_of(ElementSet::first(j)))
                throw std::invalid_argument("lower set of element " + std::to_string(j + 1) +
                                            " is not below it in the natural order");
            ElementSet closed;
            lower[j].for_each([&](Element i) {
                closed.set(i);
                closed |= p.lower_[i];
            });
            p.lower_[j] = closed;
        }
        p.rebuild_upper();
        return p;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool empty() const noexcept { return n_ == 0; }
    [[nodiscard]] bool less(Element x, Element y) const noexcept { return lower_[y].test(x); }
    [[nodiscard]] bool comparable(Element x, Element y) const noexcept {
        return x == y || less(x, y) || less(y, x);
    }

    /// lb(x) = {y : y < x}
    [[nodiscard]] const ElementSet& lower(Element x) const { return lower_.at(x); }
    /// ub(x) = {y : x < y}
    [[nodiscard]] const ElementSet& upper(Element x) const { return upper_.at(x); }
    [[nodiscard]] std::size_t relation_count() const noexcept { return rel_count_; }
    [[nodiscard]] ElementSet all() const noexcept { return ElementSet::first(n_); }

    [[nodiscard]] ElementSet maximal() const {
        ElementSet s;
        for (Element x = 0; x < n_; ++x)
            if (upper_[x].empty()) s.set(x);
        return s;
    }
    [[nodiscard]] ElementSet minimal() const {
        ElementSet s;
        for (Element x = 0; x < n_; ++x)
            if (lower_[x].empty()) s.set(x);
        return s;
    }

    [[nodiscard]] std::vector<Relation> relations() const {
        std::vector<Relation> out;
        out.reserve(rel_count_);
        for (Element j = 0; j < n_; ++j) lower_[j].for_each([&](Element i) { out.emplace_back(i, j); });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Cover relations of the Hasse diagram.
    [[nodiscard]] std::vector<Relation> covers() const {
        std::vector<Relation> out;
        for (Element j = 0; j < n_; ++j) {
            ElementSet implied;
            lower_[j].for_each([&](Element i) { implied |= lower_[i]; });
            (lower_[j] - implied).for_each([&](Element i) { out.emplace_back(i, j); });
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Copy with the given relations deleted. The remainder must already be
    /// transitively closed; std::logic_error otherwise.
    [[nodiscard]] Poset without_relations(std::span<const Relation> removed) const {
        if (removed.empty()) return *this;
        std::vector<ElementSet> lower(lower_.begin(), lower_.end());
        for (auto [i, j] : removed) lower[j].reset(i);
        for (Element j = 0; j < n_; ++j) {
            bool closed = true;
            lower[j].for_each([&](Element i) {
                if (!lower[i].is_subset_of(lower[j])) closed = false;
            });
            if (!closed) throw std::logic_error("relation removal broke transitivity");
        }
        Poset p(n_);
        p.lower_ = std::move(lower);
        p.rebuild_upper();
        return p;
    }

    /// Throws std::logic_error if any structural invariant fails.
    void check_invariants() const {
        if (lower_.size() != n_ || upper_.size() != n_) throw std::logic_error("size mismatch");
        std::size_t count = 0;
        for (Element j = 0; j < n_; ++j) {
            if (!lower_[j].is_subset_of(ElementSet::first(j)))
                throw std::logic_error("natural order is not a linear extension");
            lower_[j].for_each([&](Element i) {
                if (!lower_[i].is_subset_of(lower_[j])) throw std::logic_error("not transitively closed");
                if (!upper_[i].test(j)) throw std::logic_error("upper/lower sets disagree");
            });
            count += lower_[j].count();
        }
        std::size_t up = 0;
        for (Element i = 0; i < n_; ++i) up += upper_[i].count();
        if (count != rel_count_ || up != rel_count_) throw std::logic_error("relation count mismatch");
    }

    friend bool operator==(const Poset& a, const Poset& b) {
        return a.n_ == b.n_ && a.lower_ == b.lower_;
    }

   private:
    void rebuild_upper() {
        upper_.assign(n_, ElementSet{});
        rel_count_ = 0;
        for (Element j = 0; j < n_; ++j) {
            lower_[j].for_each([&](Element i) { upper_[i].set(j); });
            rel_count_ += lower_[j].count();
        }
    }

    std::size_t n_ = 0;
    std::vector<ElementSet> lower_;
    std::vector<ElementSet> upper_;
    std::size_t rel_count_ = 0;
};

inline Poset transitive_closure(std::size_t n, std::span<const Relation> pairs) {
    return Poset::from_relations(n, pairs);
}

/// P*: element i is relabelled n-1-i so the natural order stays a linear extension.
inline Poset dual(const Poset& p) {
    const std::size_t n = p.size();
    std::vector<ElementSet> lower(n);
    for (Element x = 0; x < n; ++x)
        p.upper(x).for_each([&](Element y) { lower[n - 1 - x].set(n - 1 - y); });
    return Poset::from_lower_sets(std::move(lower));
}

namespace detail {
inline Poset combine(const Poset& p, const Poset& q, bool q_above_p) {
    const std::size_t np = p.size(), n = np + q.size();
    std::vector<ElementSet> lower(n);
    for (Element x = 0; x < np; ++x) lower[x] = p.lower(x);
    for (Element y = 0; y < q.size(); ++y) {
        ElementSet s;
        q.lower(y).for_each([&](Element z) { s.set(z + np); });
        if (q_above_p) s |= ElementSet::first(np);
        lower[np + y] = s;
    }
    return Poset::from_lower_sets(std::move(lower));
}
}  // namespace detail

/// P ⨿ Q with Q's elements relabelled after P's.
inline Poset disjoint_union(const Poset& p, const Poset& q) { return detail::combine(p, q, false); }

/// P + Q: Q placed above P.
inline Poset lex_sum(const Poset& p, const Poset& q) { return detail::combine(p, q, true); }

/// P|_S, surviving elements renumbered in increasing order.
inline Poset induced(const Poset& p, const ElementSet& s) {
    std::vector<Element> keep = (s & p.all()).elements();
    std::vector<std::size_t> index(p.size(), kMaxElements);
    for (std::size_t k = 0; k < keep.size(); ++k) index[keep[k]] = k;
    std::vector<ElementSet> lower(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k)
        (p.lower(keep[k]) & s).for_each([&](Element y) { lower[k].set(index[y]); });
    return Poset::from_lower_sets(std::move(lower));
}

/// P - x
inline Poset remove(const Poset& p, Element x) {
    ElementSet s = p.all();
    s.reset(x);
    return induced(p, s);
}

inline const ElementSet& lb(const Poset& p, Element x) { return p.lower(x); }
inline const ElementSet& ub(const Poset& p, Element x) { return p.upper(x); }

[[nodiscard]] inline bool is_antichain(const Poset& p, const ElementSet& s) {
    bool ok = true;
    s.for_each([&](Element x) {
        if (p.lower(x).intersects(s)) ok = false;
    });
    return ok;
}

/// Every antichain contained in s (including the empty one), ordered by size
/// and then lexicographically.
inline std::vector<ElementSet> antichains_in(const Poset& p, const ElementSet& s) {
    std::vector<Element> cand = (s & p.all()).elements();
    std::vector<ElementSet> out;
    ElementSet current;
    // depth-first over candidates in label order; `blocked` holds everything
    // comparable to the current antichain
    auto dfs = [&](auto&& self, std::size_t from, const ElementSet& blocked) -> void {
        out.push_back(current);
        for (std::size_t k = from; k < cand.size(); ++k) {
            Element x = cand[k];
            if (blocked.test(x)) continue;
            current.set(x);
            ElementSet nb = blocked | p.lower(x) | p.upper(x);
            self(self, k + 1, nb);
            current.reset(x);
        }
    };
    dfs(dfs, 0, ElementSet{});
    std::stable_sort(out.begin(), out.end(), [](const ElementSet& a, const ElementSet& b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return lex_less(a, b);
    });
    return out;
}

/// The 4-element poset with one top, one middle and two incomparable bottoms.
inline Poset y_poset() { return Poset::from_relations(4, {{0, 2}, {1, 2}, {2, 3}}); }

/// True iff the down-set {x : x <= m} contains no induced Y. An induced Y
/// below m exists exactly when some x < m has two incomparable elements below it.
[[nodiscard]] inline bool is_y_free_below(const Poset& p, Element m) {
    bool free = true;
    p.lower(m).for_each([&](Element x) {
        const auto below = p.lower(x).elements();
        for (std::size_t i = 0; i < below.size() && free; ++i)
            for (std::size_t j = i + 1; j < below.size(); ++j)
                if (!p.comparable(below[i], below[j])) {
                    free = false;
                    break;
                }
    });
    return free;
}

[[nodiscard]] inline bool is_y_free(const Poset& p) {
    for (Element x = 0; x < p.size(); ++x) {
        if (p.upper(x).empty()) continue;
        const auto below = p.lower(x).elements();
        for (std::size_t i = 0; i < below.size(); ++i)
            for (std::size_t j = i + 1; j < below.size(); ++j)
                if (!p.comparable(below[i], below[j])) return false;
    }
    return true;
}

/// No induced C2 ⨿ C2.
[[nodiscard]] inline bool is_c2c2_free(const Poset& p) {
    const auto rel = p.relations();
    for (std::size_t u = 0; u < rel.size(); ++u) {
        auto [a, b] = rel[u];
        for (std::size_t v = u + 1; v < rel.size(); ++v) {
            auto [c, d] = rel[v];
            if (!p.comparable(a, c) && !p.comparable(a, d) && !p.comparable(b, c) &&
                !p.comparable(b, d))
                return false;
        }
    }
    return true;
}

/// The lower sets lb(x) form a chain under inclusion.
[[nodiscard]] inline bool lower_sets_nested(const Poset& p) {
    for (Element x = 0; x < p.size(); ++x)
        for (Element y = x + 1; y < p.size(); ++y)
            if (!p.lower(x).is_subset_of(p.lower(y)) && !p.lower(y).is_subset_of(p.lower(x)))
                return false;
    return true;
}

[[nodiscard]] inline bool upper_sets_nested(const Poset& p) {
    for (Element x = 0; x < p.size(); ++x)
        for (Element y = x + 1; y < p.size(); ++y)
            if (!p.upper(x).is_subset_of(p.upper(y)) && !p.upper(y).is_subset_of(p.upper(x)))
                return false;
    return true;
}

/// Interval order test. Both characterizations are evaluated and must agree.
[[nodiscard]] inline bool is_interval(const Poset& p) {
    const bool free = is_c2c2_free(p);
    const bool nested = lower_sets_nested(p);
    if (free != nested) throw std::logic_error("interval characterizations disagree");
    return free;
}

/// Connected components of the comparability graph, each relabelled from 0,
/// ordered by their smallest element.
inline std::vector<Poset> components(const Poset& p) {
    std::vector<Poset> out;
    ElementSet seen;
    for (Element x = 0; x < p.size(); ++x) {
        if (seen.test(x)) continue;
        ElementSet comp, frontier;
        frontier.set(x);
        while (!frontier.empty()) {
            comp |= frontier;
            ElementSet next;
            frontier.for_each([&](Element y) { next |= p.lower(y) | p.upper(y); });
            frontier = next - comp;
        }
        seen |= comp;
        out.push_back(induced(p, comp));
    }
    return out;
}

[[nodiscard]] inline bool is_chain(const Poset& p) {
    return p.relation_count() == p.size() * (p.size() - (p.size() ? 1 : 0)) / 2;
}

/// Elements not comparable to every other element.
[[nodiscard]] inline ElementSet incomparable_somewhere(const Poset& p) {
    ElementSet f;
    for (Element x = 0; x < p.size(); ++x)
        if (p.lower(x).count() + p.upper(x).count() + 1 != p.size()) f.set(x);
    return f;
}

}  // namespace kpat

#endif  // KPAT_POSET_HPP
