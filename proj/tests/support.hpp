#ifndef KPAT_TESTS_SUPPORT_HPP
#define KPAT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "kpat/fq.hpp"
#include "kpat/poset.hpp"

namespace kpat::testkit {

/// Random poset on n elements: each pair i < j is related with probability
/// density, then closed transitively, then relabelled at random.
inline Poset random_poset(std::mt19937_64& rng, std::size_t n, double density = 0.4) {
    std::bernoulli_distribution coin(density);
    std::vector<Element> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Relation> pairs;
    for (Element i = 0; i < n; ++i)
        for (Element j = i + 1; j < n; ++j)
            if (coin(rng)) pairs.emplace_back(i, j);
    const Poset natural = transitive_closure(n, pairs);
    std::vector<Relation> rel;
    for (const auto& [a, b] : natural.relations()) rel.emplace_back(perm[a], perm[b]);
    std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : rel) less[a][b] = true;
    // sort by down-set size to restore natural labels
    std::vector<Element> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Element x, Element y) {
        std::size_t bx = 0, by = 0;
        for (Element z = 0; z < n; ++z) {
            bx += less[z][x];
            by += less[z][y];
        }
        return bx < by;
    });
    std::vector<Element> pos(n);
    for (Element k = 0; k < n; ++k) pos[order[k]] = k;
    std::vector<Relation> out;
    for (const auto& [a, b] : rel) out.emplace_back(pos[a], pos[b]);
    return transitive_closure(n, out);
}

/// Relation matrix as a bit string under the given relabelling.
inline std::vector<bool> relation_code(const Poset& p, const std::vector<Element>& perm) {
    const std::size_t n = p.size();
    std::vector<bool> code(n * n, false);
    for (Element i = 0; i < n; ++i)
        for (Element j = 0; j < n; ++j)
            if (p.less(i, j)) code[perm[i] * n + perm[j]] = true;
    return code;
}

/// Lexicographically least relation code over all n! relabellings.
inline std::vector<bool> brute_canonical(const Poset& p) {
    std::vector<Element> perm(p.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> best = relation_code(p, perm);
    while (std::next_permutation(perm.begin(), perm.end())) best = std::min(best, relation_code(p, perm));
    return best;
}

inline bool brute_isomorphic(const Poset& a, const Poset& b) {
    return a.size() == b.size() && brute_canonical(a) == brute_canonical(b);
}

/// Number of isomorphism classes on n elements from all 2^(n(n-1)/2)
/// relation sets on naturally ordered labels.
inline std::size_t brute_poset_count(std::size_t n) {
    std::vector<Relation> slots;
    for (Element i = 0; i < n; ++i)
        for (Element j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    std::set<std::vector<bool>> classes;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
        std::vector<Relation> pairs;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask >> s & 1) pairs.push_back(slots[s]);
        const Poset p = transitive_closure(n, pairs);
        if (p.relation_count() != pairs.size()) continue;  // count each closed set once
        classes.insert(brute_canonical(p));
    }
    return classes.size();
}

/// Every element of U_P(q) as a dense matrix.
inline std::vector<FqMatrix> pattern_group(const Poset& p, std::uint32_t q) {
    const auto rel = p.relations();
    std::vector<FqMatrix> out;
    std::vector<std::uint32_t> digit(rel.size(), 0);
    for (;;) {
        FqMatrix g = FqMatrix::identity(p.size(), q);
        for (std::size_t c = 0; c < rel.size(); ++c) g(rel[c].first, rel[c].second) = digit[c];
        out.push_back(std::move(g));
        std::size_t c = 0;
        while (c < rel.size() && ++digit[c] == q) digit[c++] = 0;
        if (c == rel.size()) break;
    }
    return out;
}

inline std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

/// Conjugacy classes of U_P(q) by explicit union-find over conjugation.
inline std::size_t brute_class_count(const Poset& p, std::uint32_t q) {
    const auto group = pattern_group(p, q);
    std::map<std::vector<std::uint32_t>, std::size_t> index;
    auto key = [&](const FqMatrix& g) {
        std::vector<std::uint32_t> k;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) k.push_back(g(i, j));
        return k;
    };
    for (std::size_t i = 0; i < group.size(); ++i) index[key(group[i])] = i;
    std::vector<std::size_t> parent(group.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& h : group) {
        const FqMatrix hinv = h.unitriangular_inverse();
        for (std::size_t i = 0; i < group.size(); ++i) {
            const std::size_t j = index.at(key(h * group[i] * hinv));
            parent[find_root(parent, i)] = find_root(parent, j);
        }
    }
    std::size_t classes = 0;
    for (std::size_t i = 0; i < group.size(); ++i) classes += find_root(parent, i) == i;
    return classes;
}

}  // namespace kpat::testkit

#endif  // KPAT_TESTS_SUPPORT_HPP
