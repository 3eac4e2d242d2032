#ifndef KPAT_CANONICAL_HPP
#define KPAT_CANONICAL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "poset.hpp"

namespace kpat {

/// Byte string that is equal for two posets exactly when they are isomorphic.
class CanonicalKey {
   public:
    CanonicalKey() = default;
    explicit CanonicalKey(std::string bytes) : bytes_(std::move(bytes)) {}

    [[nodiscard]] const std::string& bytes() const noexcept { return bytes_; }
    [[nodiscard]] std::string hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(2 * bytes_.size());
        for (unsigned char c : bytes_) {
            out.push_back(digits[c >> 4]);
            out.push_back(digits[c & 15]);
        }
        return out;
    }

    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;

   private:
    std::string bytes_;
};

struct CanonicalKeyHash {
    std::size_t operator()(const CanonicalKey& k) const noexcept {
        return std::hash<std::string>{}(k.bytes());
    }
};

/// Canonical relabelling: label[v] is the new index of v, and poset is the
/// relabelled poset. The relabelling is a linear extension, so poset keeps
/// the natural-order invariant.
struct CanonicalForm {
    Poset poset;
    std::vector<Element> label;
};

namespace detail {

using Coloring = std::vector<std::uint32_t>;

// Equitable refinement. Colours are renumbered by sorted signature with the old
// colour as primary key, so cell order is preserved and the whole procedure is
// isomorphism-equivariant.
inline std::size_t refine(const Poset& p, Coloring& col) {
    const std::size_t n = p.size();
    std::size_t ncol = n ? *std::max_element(col.begin(), col.end()) + 1 : 0;
    std::vector<std::uint32_t> sig;
    std::vector<std::size_t> order(n);
    while (true) {
        const std::size_t width = 1 + 2 * ncol;
        sig.assign(n * width, 0);
        for (Element v = 0; v < n; ++v) {
            std::uint32_t* s = sig.data() + v * width;
            s[0] = col[v];
            p.lower(v).for_each([&](Element u) { ++s[1 + col[u]]; });
            p.upper(v).for_each([&](Element u) { ++s[1 + ncol + col[u]]; });
        }
        std::iota(order.begin(), order.end(), 0);
        auto cmp = [&](std::size_t a, std::size_t b) {
            return std::lexicographical_compare(sig.begin() + a * width, sig.begin() + (a + 1) * width,
                                                sig.begin() + b * width, sig.begin() + (b + 1) * width);
        };
        std::sort(order.begin(), order.end(), cmp);
        std::uint32_t c = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0 && cmp(order[k - 1], order[k])) ++c;
            col[order[k]] = c;
        }
        const std::size_t next = n ? c + 1 : 0;
        if (next == ncol) return ncol;
        ncol = next;
    }
}

class CanonicalSearch {
   public:
    explicit CanonicalSearch(const Poset& p) : p_(p), n_(p.size()) {}

    CanonicalForm run() {
        Coloring col(n_);
        {
            std::vector<std::pair<std::size_t, std::size_t>> deg(n_);
            for (Element v = 0; v < n_; ++v) deg[v] = {p_.lower(v).count(), p_.upper(v).count()};
            auto sorted = deg;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (Element v = 0; v < n_; ++v)
                col[v] = static_cast<std::uint32_t>(
                    std::lower_bound(sorted.begin(), sorted.end(), deg[v]) - sorted.begin());
        }
        std::vector<Element> path;
        search(col, path);
        CanonicalForm out;
        out.label = best_label_;
        std::vector<ElementSet> lower(n_);
        for (Element v = 0; v < n_; ++v)
            p_.lower(v).for_each([&](Element u) { lower[best_label_[v]].set(best_label_[u]); });
        out.poset = Poset::from_lower_sets(std::move(lower));
        return out;
    }

   private:
    using Code = std::vector<std::uint64_t>;

    Code encode(const std::vector<Element>& label) const {
        Code code(n_ * ElementSet::kWords, 0);
        for (Element v = 0; v < n_; ++v) {
            std::uint64_t* row = code.data() + label[v] * ElementSet::kWords;
            p_.lower(v).for_each([&](Element u) {
                const Element l = label[u];
                row[l >> 6] |= std::uint64_t{1} << (l & 63);
            });
        }
        return code;
    }

    void leaf(const Coloring& col) {
        std::vector<Element> label(col.begin(), col.end());
        Code code = encode(label);
        if (!have_best_) {
            have_best_ = true;
            best_code_ = first_code_ = code;
            best_label_ = first_label_ = label;
            return;
        }
        auto record = [&](const std::vector<Element>& other) {
            std::vector<Element> inv(n_);
            for (Element v = 0; v < n_; ++v) inv[other[v]] = v;
            std::vector<Element> gamma(n_);
            for (Element v = 0; v < n_; ++v) gamma[v] = inv[label[v]];
            automorphisms_.push_back(std::move(gamma));
        };
        if (code == first_code_) {
            record(first_label_);
        } else if (code == best_code_) {
            record(best_label_);
        } else if (code < best_code_) {
            best_code_ = std::move(code);
            best_label_ = std::move(label);
        }
    }

    static Element find(std::vector<Element>& uf, Element x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
    }

    void search(Coloring col, std::vector<Element>& path) {
        const std::size_t ncol = refine(p_, col);
        if (ncol == n_) {
            leaf(col);
            return;
        }
        std::vector<std::size_t> size(ncol, 0);
        for (auto c : col) ++size[c];
        std::uint32_t target = 0;
        while (size[target] == 1) ++target;
        std::vector<Element> cell;
        for (Element v = 0; v < n_; ++v)
            if (col[v] == target) cell.push_back(v);

        std::vector<Element> explored;
        for (Element v : cell) {
            if (!explored.empty() && !automorphisms_.empty()) {
                std::vector<Element> uf(n_);
                std::iota(uf.begin(), uf.end(), 0);
                for (const auto& g : automorphisms_) {
                    bool fixes = std::all_of(path.begin(), path.end(), [&](Element x) { return g[x] == x; });
                    if (!fixes) continue;
                    for (Element x = 0; x < n_; ++x) uf[find(uf, x)] = find(uf, g[x]);
                }
                const Element rv = find(uf, v);
                if (std::any_of(explored.begin(), explored.end(),
                                [&](Element u) { return find(uf, u) == rv; }))
                    continue;
            }
            Coloring next = col;
            for (Element x = 0; x < n_; ++x)
                if (next[x] > target || (next[x] == target && x != v)) ++next[x];
            path.push_back(v);
            search(std::move(next), path);
            path.pop_back();
            explored.push_back(v);
        }
    }

    const Poset& p_;
    std::size_t n_;
    bool have_best_ = false;
    Code best_code_, first_code_;
    std::vector<Element> best_label_, first_label_;
    std::vector<std::vector<Element>> automorphisms_;
};

inline CanonicalKey key_of_canonical(const Poset& c) {
    std::string bytes;
    bytes.push_back(static_cast<char>(c.size()));
    unsigned acc = 0, nbits = 0;
    for (Element j = 1; j < c.size(); ++j)
        for (Element i = 0; i < j; ++i) {
            acc = (acc << 1) | (c.less(i, j) ? 1U : 0U);
            if (++nbits == 8) {
                bytes.push_back(static_cast<char>(acc));
                acc = nbits = 0;
            }
        }
    if (nbits) bytes.push_back(static_cast<char>(acc << (8 - nbits)));
    return CanonicalKey(std::move(bytes));
}

}  // namespace detail

inline CanonicalForm canonical_form(const Poset& p) {
    if (p.empty()) return {Poset{}, {}};
    return detail::CanonicalSearch(p).run();
}

inline CanonicalKey canonical_key(const Poset& p) {
    return detail::key_of_canonical(canonical_form(p).poset);
}

inline bool is_isomorphic(const Poset& a, const Poset& b) {
    if (a.size() != b.size() || a.relation_count() != b.relation_count()) return false;
    return canonical_key(a) == canonical_key(b);
}

}  // namespace kpat

#endif  // KPAT_CANONICAL_HPP
