#ifndef KPAT_ENUMERATE_HPP
#define KPAT_ENUMERATE_HPP

#include <unordered_set>
#include <vector>

#include "canonical.hpp"

namespace kpat {

/// One representative (in canonical form) of every isomorphism class with
/// n elements. Each class arises from a class on n - 1 elements by adding a
/// new maximal element above an antichain.
inline std::vector<Poset> posets_of_size(std::size_t n) {
    std::vector<Poset> level{Poset::antichain(0)};
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<Poset> next;
        std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
        for (const Poset& p : level) {
            std::vector<ElementSet> lower(k);
            for (Element x = 0; x + 1 < k; ++x) lower[x] = p.lower(x);
            for (const ElementSet& below : antichains_in(p, p.all())) {
                lower[k - 1] = below;
                const CanonicalForm cf = canonical_form(Poset::from_lower_sets(lower));
                if (seen.insert(detail::key_of_canonical(cf.poset)).second) next.push_back(cf.poset);
            }
        }
        level = std::move(next);
    }
    return level;
}

/// posets_of_size(k) for k = 0..n, concatenated.
inline std::vector<Poset> posets_up_to(std::size_t n) {
    std::vector<Poset> out;
    for (std::size_t k = 0; k <= n; ++k) {
        auto level = posets_of_size(k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace kpat

#endif  // KPAT_ENUMERATE_HPP
