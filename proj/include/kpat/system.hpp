#ifndef KPAT_SYSTEM_HPP
#define KPAT_SYSTEM_HPP

#include <stdexcept>
#include <string>

#include "poset.hpp"

namespace kpat {

/// (P, m, A): a maximal element m of P and an antichain A below m.
struct PosetSystem {
    Poset poset;
    Element top = 0;
    ElementSet antichain;

    PosetSystem() = default;
    PosetSystem(Poset p, Element m, ElementSet a) : poset(std::move(p)), top(m), antichain(a) {
        validate();
    }

    void validate() const {
        if (top >= poset.size()) throw std::invalid_argument("system top is not an element");
        if (!poset.upper(top).empty()) throw std::invalid_argument("system top is not maximal");
        if (!antichain.is_subset_of(poset.lower(top)))
            throw std::invalid_argument("antichain is not below the system top");
        if (!is_antichain(poset, antichain)) throw std::invalid_argument("system set is not an antichain");
    }

    friend bool operator==(const PosetSystem&, const PosetSystem&) = default;
};

}  // namespace kpat

#endif  // KPAT_SYSTEM_HPP
