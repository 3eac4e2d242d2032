#ifndef KPAT_ELEMENT_SET_HPP
#define KPAT_ELEMENT_SET_HPP

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace kpat {

/// Upper bound on poset size. The reduction engine only sees small posets;
/// the headroom is for embedding targets such as the 97-element chain.
inline constexpr std::size_t kMaxElements = 128;

/// Fixed-capacity bit set over element indices 0..kMaxElements-1.
class ElementSet {
   public:
    static constexpr std::size_t kWords = kMaxElements / 64;

    constexpr ElementSet() noexcept = default;
    ElementSet(std::initializer_list<std::size_t> xs) noexcept {
        for (auto x : xs) set(x);
    }

    /// {0, ..., n-1}
    static ElementSet first(std::size_t n) noexcept {
        ElementSet s;
        for (std::size_t w = 0; w < kWords; ++w) {
            if (n >= 64 * (w + 1))
                s.words_[w] = ~std::uint64_t{0};
            else if (n > 64 * w)
                s.words_[w] = (std::uint64_t{1} << (n - 64 * w)) - 1;
        }
        return s;
    }

    void set(std::size_t x) noexcept { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
    void reset(std::size_t x) noexcept { words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63)); }
    [[nodiscard]] bool test(std::size_t x) const noexcept {
        return (words_[x >> 6] >> (x & 63)) & 1U;
    }
    [[nodiscard]] bool contains(std::size_t x) const noexcept { return test(x); }

    [[nodiscard]] std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    [[nodiscard]] bool empty() const noexcept {
        for (auto w : words_)
            if (w) return false;
        return true;
    }
    [[nodiscard]] bool is_subset_of(const ElementSet& o) const noexcept {
        for (std::size_t w = 0; w < kWords; ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }
    [[nodiscard]] bool intersects(const ElementSet& o) const noexcept {
        for (std::size_t w = 0; w < kWords; ++w)
            if (words_[w] & o.words_[w]) return true;
        return false;
    }

    /// Smallest element, or kMaxElements when empty.
    [[nodiscard]] std::size_t front() const noexcept { return next(0); }
    /// Smallest element >= from, or kMaxElements.
    [[nodiscard]] std::size_t next(std::size_t from) const noexcept {
        if (from >= kMaxElements) return kMaxElements;
        std::size_t w = from >> 6;
        std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (bits) return 64 * w + static_cast<std::size_t>(std::countr_zero(bits));
            if (++w == kWords) return kMaxElements;
            bits = words_[w];
        }
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < kWords; ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                f(64 * w + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
    }

    [[nodiscard]] std::vector<std::size_t> elements() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t x) { out.push_back(x); });
        return out;
    }

    ElementSet& operator|=(const ElementSet& o) noexcept {
        for (std::size_t w = 0; w < kWords; ++w) words_[w] |= o.words_[w];
        return *this;
    }
    ElementSet& operator&=(const ElementSet& o) noexcept {
        for (std::size_t w = 0; w < kWords; ++w) words_[w] &= o.words_[w];
        return *this;
    }
    /// Set difference.
    ElementSet& operator-=(const ElementSet& o) noexcept {
        for (std::size_t w = 0; w < kWords; ++w) words_[w] &= ~o.words_[w];
        return *this;
    }
    friend ElementSet operator|(ElementSet a, const ElementSet& b) noexcept { return a |= b; }
    friend ElementSet operator&(ElementSet a, const ElementSet& b) noexcept { return a &= b; }
    friend ElementSet operator-(ElementSet a, const ElementSet& b) noexcept { return a -= b; }
    friend bool operator==(const ElementSet&, const ElementSet&) = default;

    /// Lexicographic by ascending element list, used for deterministic ordering.
    friend bool lex_less(const ElementSet& a, const ElementSet& b) noexcept {
        std::size_t x = a.front(), y = b.front();
        while (x != kMaxElements && y != kMaxElements) {
            if (x != y) return x < y;
            x = a.next(x + 1);
            y = b.next(y + 1);
        }
        return x == kMaxElements && y != kMaxElements;
    }

    [[nodiscard]] std::uint64_t word(std::size_t w) const noexcept { return words_[w]; }
    [[nodiscard]] std::size_t hash() const noexcept {
        std::size_t h = 0;
        for (auto w : words_) h = h * 0x9E3779B97F4A7C15ULL + std::hash<std::uint64_t>{}(w);
        return h;
    }

   private:
    std::array<std::uint64_t, kWords> words_{};
};

}  // namespace kpat

#endif  // KPAT_ELEMENT_SET_HPP
