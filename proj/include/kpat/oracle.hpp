#ifndef KPAT_ORACLE_HPP
#define KPAT_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fq.hpp"
#include "polynomial.hpp"
#include "poset.hpp"
#include "system.hpp"

namespace kpat {

struct OracleOptions {
    std::uint64_t budget = std::uint64_t{1} << 26;  ///< max group elements enumerated
    unsigned threads = 1;
};

/// The group to enumerate has more elements than the configured budget.
class BudgetExceeded : public std::runtime_error {
   public:
    BudgetExceeded(BigInt required, std::uint64_t budget)
        : std::runtime_error("enumeration needs " + required.str() + " group elements, budget is " +
                             std::to_string(budget)),
          required_(std::move(required)),
          budget_(budget) {}
    [[nodiscard]] const BigInt& required() const noexcept { return required_; }
    [[nodiscard]] std::uint64_t budget() const noexcept { return budget_; }

   private:
    BigInt required_;
    std::uint64_t budget_;
};

[[nodiscard]] inline BigInt big_pow(std::uint64_t q, std::size_t e) {
    BigInt r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= q;
    return r;
}

/// Group size q^r as a 64-bit count, or BudgetExceeded.
inline std::uint64_t checked_group_size(std::uint32_t q, std::size_t r, std::uint64_t budget) {
    const BigInt size = big_pow(q, r);
    if (size > BigInt(budget)) throw BudgetExceeded(size, budget);
    return static_cast<std::uint64_t>(size);
}

inline void require_prime(std::uint64_t q) {
    if (!is_prime(q)) throw std::invalid_argument("q = " + std::to_string(q) + " is not prime; only prime fields are supported");
}

// ---------------------------------------------------------------------------
// Group elements as dense unitriangular matrices

/// E_{i,j}(alpha) = 1 + alpha e_{i,j}.
inline FqMatrix elementary(std::size_t n, std::uint32_t q, Element i, Element j, std::int64_t alpha) {
    FqMatrix e = FqMatrix::identity(n, q);
    e.set(i, j, alpha);
    return e;
}

[[nodiscard]] inline bool in_pattern_group(const Poset& p, const FqMatrix& g) {
    if (g.size() != p.size()) return false;
    for (Element i = 0; i < p.size(); ++i)
        for (Element j = 0; j < p.size(); ++j) {
            const std::uint32_t v = g(i, j);
            if (i == j ? v != 1 : (v != 0 && !p.less(i, j))) return false;
        }
    return true;
}

/// x y x^-1 y^-1
inline FqMatrix commutator(const FqMatrix& x, const FqMatrix& y) {
    return x * y * x.unitriangular_inverse() * y.unitriangular_inverse();
}

/// K_g(L) = rho(g L g^-1): conjugate, then keep only the cells (j, i) with
/// i below j in p.
inline FqMatrix coadjoint_act(const Poset& p, const FqMatrix& g, const FqMatrix& l) {
    FqMatrix y = g * l * g.unitriangular_inverse();
    for (Element j = 0; j < p.size(); ++j)
        for (Element i = 0; i < p.size(); ++i)
            if (!p.less(i, j)) y(j, i) = 0;
    return y;
}

namespace detail {

struct Coordinates {
    std::vector<Relation> cells;                ///< rel(P) in lexicographic order
    std::vector<std::vector<int>> index;        ///< index[i][j], -1 off rel

    explicit Coordinates(const Poset& p) : cells(p.relations()), index(p.size(), std::vector<int>(p.size(), -1)) {
        std::sort(cells.begin(), cells.end());
        for (std::size_t c = 0; c < cells.size(); ++c) index[cells[c].first][cells[c].second] = static_cast<int>(c);
    }
};

struct AdTerm {
    std::uint8_t row;  ///< input coordinate
    std::uint8_t col;  ///< output coordinate
    bool negative;
};

// ad_{e_ab}(e_ij) = [b == i] e_aj - [j == a] e_ib
inline std::vector<std::vector<AdTerm>> ad_basis(const Coordinates& co) {
    const std::size_t r = co.cells.size();
    std::vector<std::vector<AdTerm>> out(r);
    for (std::size_t c = 0; c < r; ++c) {
        const auto [a, b] = co.cells[c];
        for (std::size_t x = 0; x < r; ++x) {
            const auto [i, j] = co.cells[x];
            if (b == i)
                out[c].push_back({static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(co.index[a][j]), false});
            if (j == a)
                out[c].push_back({static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(co.index[i][b]), true});
        }
    }
    return out;
}

// Rows are input coordinates, bits are output coordinates.
struct F2Kernel {
    std::vector<std::uint64_t> rows;
    explicit F2Kernel(std::size_t r, std::uint32_t) : rows(r, 0) {}
    void add(const std::vector<AdTerm>& ts) {
        for (const auto& t : ts) rows[t.row] ^= std::uint64_t{1} << t.col;
    }
    std::size_t rank() const { return rank_f2(rows.data(), rows.size()); }
};

struct F3Kernel {
    std::vector<F3Row> rows;
    explicit F3Kernel(std::size_t r, std::uint32_t) : rows(r) {}
    void add(const std::vector<AdTerm>& ts) {
        for (const auto& t : ts) rows[t.row].add_at(t.col, t.negative ? 2 : 1);
    }
    std::size_t rank() const { return rank_f3(rows.data(), rows.size()); }
};

struct FpKernel {
    std::size_t r;
    std::uint32_t p;
    std::vector<std::uint32_t> a;
    mutable std::vector<std::uint32_t> scratch;
    FpKernel(std::size_t r_, std::uint32_t p_) : r(r_), p(p_), a(r_ * r_, 0) {}
    void add(const std::vector<AdTerm>& ts) {
        for (const auto& t : ts) {
            auto& v = a[t.row * r + t.col];
            v = (v + (t.negative ? p - 1 : 1)) % p;
        }
    }
    std::size_t rank() const {
        scratch = a;
        return rank_mod_p(scratch, r, r, p);
    }
};

template <class Kernel>
void burnside_range(const std::vector<std::vector<AdTerm>>& basis, std::uint32_t q, std::uint64_t begin,
                    std::uint64_t end, std::vector<std::uint64_t>& hist) {
    const std::size_t r = basis.size();
    Kernel k(r, q);
    std::vector<std::uint32_t> digit(r, 0);
    {
        std::uint64_t s = begin;
        for (std::size_t c = r; c-- > 0;) {
            digit[c] = static_cast<std::uint32_t>(s % q);
            s /= q;
            for (std::uint32_t t = 0; t < digit[c]; ++t) k.add(basis[c]);
        }
    }
    for (std::uint64_t idx = begin; idx < end; ++idx) {
        ++hist[k.rank()];
        for (std::size_t c = r; c-- > 0;) {
            k.add(basis[c]);
            if (++digit[c] < q) break;
            digit[c] = 0;
        }
    }
}

template <class Kernel>
std::vector<std::uint64_t> burnside_histogram(const std::vector<std::vector<AdTerm>>& basis, std::uint32_t q,
                                              std::uint64_t total, unsigned threads) {
    const std::size_t r = basis.size();
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(total, 256))));
    if (total < 4096) threads = 1;
    std::vector<std::vector<std::uint64_t>> hists(threads, std::vector<std::uint64_t>(r + 1, 0));
    if (threads == 1) {
        burnside_range<Kernel>(basis, q, 0, total, hists[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t b = total / threads * t, e = t + 1 == threads ? total : total / threads * (t + 1);
            pool.emplace_back([&, t, b, e] { burnside_range<Kernel>(basis, q, b, e, hists[t]); });
        }
        for (auto& th : pool) th.join();
    }
    std::vector<std::uint64_t> out(r + 1, 0);
    for (const auto& h : hists)
        for (std::size_t i = 0; i <= r; ++i) out[i] += h[i];
    return out;
}

}  // namespace detail

/// Number of conjugacy classes of U_P(q) by Burnside: the mean over Y in the
/// pattern algebra of q^dim ker(ad_Y), since the centralizer of 1 + Y is the
/// kernel of ad_Y.
inline BigInt count_k(const Poset& p, std::uint32_t q, const OracleOptions& opt = {}) {
    require_prime(q);
    const detail::Coordinates co(p);
    const std::size_t r = co.cells.size();
    if (r == 0) return 1;
    if (r > 64) throw std::invalid_argument("oracle supports at most 64 relations");
    const std::uint64_t total = checked_group_size(q, r, opt.budget);
    const auto basis = detail::ad_basis(co);
    std::vector<std::uint64_t> hist;
    if (q == 2)
        hist = detail::burnside_histogram<detail::F2Kernel>(basis, q, total, opt.threads);
    else if (q == 3)
        hist = detail::burnside_histogram<detail::F3Kernel>(basis, q, total, opt.threads);
    else
        hist = detail::burnside_histogram<detail::FpKernel>(basis, q, total, opt.threads);
    BigInt sum = 0;
    for (std::size_t rank = 0; rank <= r; ++rank)
        if (hist[rank]) sum += BigInt(hist[rank]) * big_pow(q, r - rank);
    const BigInt order = big_pow(q, r);
    if (sum % order != 0) throw std::logic_error("Burnside sum is not divisible by the group order");
    return sum / order;
}

/// k(S): orbits of the stabilizer of the row vector 1_A on the fiber of
/// L_P over it. `units` optionally replaces the entries 1 of 1_A, in the
/// order of the elements of A.
///
/// Writing h = g^-1, g fixes the row vector exactly when
/// sum_{a in A} v_a h_{a,x} = 0 for every x < m outside A. Each such x with
/// A meeting lb(x) pins one coordinate h_{a*,x} (a* the largest such a), so
/// the stabilizer is enumerated directly over the remaining coordinates.
/// The fixed points of g on the fiber solve (K_g - 1) Z = -K_g(1_A) over
/// the free cells Z.
inline BigInt count_k_system(const PosetSystem& s, std::uint32_t q, const OracleOptions& opt = {},
                             const std::vector<std::uint32_t>& units = {}) {
    require_prime(q);
    s.validate();
    const Poset& p = s.poset;
    const std::size_t n = p.size();
    const Element m = s.top;
    const detail::Coordinates co(p);
    const std::size_t r = co.cells.size();

    const auto a_elems = s.antichain.elements();
    if (!units.empty() && units.size() != a_elems.size())
        throw std::invalid_argument("unit list does not match the antichain size");
    std::vector<std::uint32_t> value(n, 0);
    for (std::size_t i = 0; i < a_elems.size(); ++i) {
        const std::uint32_t v = units.empty() ? 1 : units[i] % q;
        if (v == 0) throw std::invalid_argument("antichain entries must be nonzero");
        value[a_elems[i]] = v;
    }

    struct Pinned {
        std::size_t cell;
        Element pivot, x;
    };
    std::vector<Pinned> pinned;
    std::vector<bool> is_pinned(r, false);
    (p.lower(m) - s.antichain).for_each([&](Element x) {
        const ElementSet under = p.lower(x) & s.antichain;
        if (under.empty()) return;
        Element pivot = 0;
        under.for_each([&](Element a) { pivot = a; });
        const auto c = static_cast<std::size_t>(co.index[pivot][x]);
        pinned.push_back({c, pivot, x});
        is_pinned[c] = true;
    });
    std::vector<std::size_t> free_coords;
    for (std::size_t c = 0; c < r; ++c)
        if (!is_pinned[c]) free_coords.push_back(c);
    const std::uint64_t total = checked_group_size(q, free_coords.size(), opt.budget);

    std::vector<Relation> cells;  // (k, l): lower cell with l below k, k != m
    for (const auto& [l, k] : co.cells)
        if (k != m) cells.emplace_back(k, l);
    const std::size_t f = cells.size();

    std::vector<std::uint32_t> digit(free_coords.size(), 0);
    BigInt fixed_sum = 0;
    std::vector<std::uint32_t> aug(f * (f + 1)), lhs(f * f), both;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        FqMatrix h = FqMatrix::identity(n, q);
        for (std::size_t i = 0; i < free_coords.size(); ++i)
            h(co.cells[free_coords[i]].first, co.cells[free_coords[i]].second) = digit[i];
        for (const auto& pin : pinned) {
            std::uint64_t acc = 0;
            (p.lower(pin.x) & s.antichain).for_each([&](Element a) {
                if (a != pin.pivot) acc += std::uint64_t{value[a]} * h(a, pin.x);
            });
            const std::uint64_t inv = mod_inv(value[pin.pivot], q);
            h(pin.pivot, pin.x) = static_cast<std::uint32_t>((q - acc % q) % q * inv % q);
        }
        const FqMatrix g = h.unitriangular_inverse();
        for (std::size_t out = 0; out < f; ++out) {
            const auto [k, l] = cells[out];
            for (std::size_t in = 0; in < f; ++in) {
                const auto [a, b] = cells[in];
                std::uint64_t v = std::uint64_t{g(k, a)} * h(b, l) % q;
                if (in == out) v = (v + q - 1) % q;
                aug[out * (f + 1) + in] = static_cast<std::uint32_t>(v);
            }
            std::uint64_t c = 0;
            for (Element a : a_elems) c += std::uint64_t{value[a]} * g(k, m) % q * h(a, l);
            aug[out * (f + 1) + f] = static_cast<std::uint32_t>((q - c % q) % q);
        }
        for (std::size_t i = 0; i < f; ++i)
            std::copy_n(aug.begin() + static_cast<std::ptrdiff_t>(i * (f + 1)), f,
                        lhs.begin() + static_cast<std::ptrdiff_t>(i * f));
        both = aug;
        const std::size_t rk = rank_mod_p(lhs, f, f, q);
        if (rank_mod_p(both, f, f + 1, q) == rk) fixed_sum += big_pow(q, f - rk);
        for (std::size_t c = digit.size(); c-- > 0;) {
            if (++digit[c] < q) break;
            digit[c] = 0;
        }
    }
    if (fixed_sum % total != 0) throw std::logic_error("fiber Burnside sum is not divisible by the stabilizer order");
    return fixed_sum / total;
}

}  // namespace kpat

#endif  // KPAT_ORACLE_HPP
