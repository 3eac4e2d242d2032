#ifndef KPAT_FQ_HPP
#define KPAT_FQ_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpat {

[[nodiscard]] constexpr bool is_prime(std::uint64_t q) noexcept {
    if (q < 2) return false;
    for (std::uint64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

[[nodiscard]] inline std::uint32_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

[[nodiscard]] inline std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) { return mod_pow(a, p - 2, p); }

/// Dense square matrix over a prime field.
class FqMatrix {
   public:
    FqMatrix(std::size_t n, std::uint32_t q) : n_(n), q_(q), a_(n * n, 0) {
        if (!is_prime(q)) throw std::invalid_argument("field order " + std::to_string(q) + " is not prime");
    }
    static FqMatrix identity(std::size_t n, std::uint32_t q) {
        FqMatrix m(n, q);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t field() const noexcept { return q_; }
    std::uint32_t& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    [[nodiscard]] std::uint32_t operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, std::int64_t v) {
        const std::int64_t q = q_;
        a_[i * n_ + j] = static_cast<std::uint32_t>(((v % q) + q) % q);
    }

    friend FqMatrix operator*(const FqMatrix& x, const FqMatrix& y) {
        FqMatrix z(x.n_, x.q_);
        for (std::size_t i = 0; i < x.n_; ++i)
            for (std::size_t k = 0; k < x.n_; ++k) {
                const std::uint64_t xik = x(i, k);
                if (!xik) continue;
                for (std::size_t j = 0; j < x.n_; ++j) z.a_[i * x.n_ + j] = static_cast<std::uint32_t>((z(i, j) + xik * y(k, j)) % x.q_);
            }
        return z;
    }
    friend FqMatrix operator-(const FqMatrix& x, const FqMatrix& y) {
        FqMatrix z(x.n_, x.q_);
        for (std::size_t i = 0; i < x.a_.size(); ++i) z.a_[i] = (x.a_[i] + x.q_ - y.a_[i]) % x.q_;
        return z;
    }
    friend bool operator==(const FqMatrix&, const FqMatrix&) = default;

    /// Inverse of an upper unitriangular matrix (1 + N with N nilpotent):
    /// 1 - N + N^2 - ...
    [[nodiscard]] FqMatrix unitriangular_inverse() const {
        FqMatrix nil = *this - identity(n_, q_);
        FqMatrix result = identity(n_, q_), power = identity(n_, q_);
        for (std::size_t k = 1; k < n_; ++k) {
            power = power * nil;
            for (std::size_t i = 0; i < a_.size(); ++i)
                result.a_[i] = (k % 2 ? result.a_[i] + q_ - power.a_[i] : result.a_[i] + power.a_[i]) % q_;
        }
        return result;
    }

   private:
    std::size_t n_;
    std::uint32_t q_;
    std::vector<std::uint32_t> a_;
};

/// Rank of rows over F2, each row a bit mask of columns.
[[nodiscard]] inline std::size_t rank_f2(const std::uint64_t* rows, std::size_t count) {
    std::array<std::uint64_t, 64> basis{};
    std::size_t rank = 0;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t v = rows[i];
        while (v) {
            const int b = std::countr_zero(v);
            if (!basis[b]) {
                basis[b] = v;
                ++rank;
                break;
            }
            v ^= basis[b];
        }
    }
    return rank;
}

/// Vector over F3 in bit-sliced form: bit c of `one` (resp. `two`) is set when
/// coordinate c equals 1 (resp. 2).
struct F3Row {
    std::uint64_t one = 0;
    std::uint64_t two = 0;

    [[nodiscard]] bool zero() const noexcept { return (one | two) == 0; }
    [[nodiscard]] F3Row neg() const noexcept { return {two, one}; }
    friend F3Row operator+(F3Row x, F3Row y) noexcept {
        const std::uint64_t xz = ~(x.one | x.two), yz = ~(y.one | y.two);
        return {(x.one & yz) | (xz & y.one) | (x.two & y.two), (x.two & yz) | (xz & y.two) | (x.one & y.one)};
    }
    friend F3Row operator-(F3Row x, F3Row y) noexcept { return x + y.neg(); }

    /// Adds v in {1, 2} at column c.
    void add_at(int c, std::uint32_t v) noexcept {
        const std::uint64_t bit = std::uint64_t{1} << c;
        F3Row d = v == 1 ? F3Row{bit, 0} : F3Row{0, bit};
        *this = *this + d;
    }
};

[[nodiscard]] inline std::size_t rank_f3(const F3Row* rows, std::size_t count) {
    std::array<F3Row, 64> basis{};
    std::size_t rank = 0;
    for (std::size_t i = 0; i < count; ++i) {
        F3Row v = rows[i];
        while (!v.zero()) {
            const int b = std::countr_zero(v.one | v.two);
            const std::uint64_t bit = std::uint64_t{1} << b;
            if (basis[b].zero()) {
                basis[b] = (v.two & bit) ? v.neg() : v;
                ++rank;
                break;
            }
            v = (v.one & bit) ? v - basis[b] : v + basis[b];
        }
    }
    return rank;
}

/// Rank of a row-major rows x cols matrix over F_p; the buffer is destroyed.
[[nodiscard]] inline std::size_t rank_mod_p(std::vector<std::uint32_t>& a, std::size_t rows, std::size_t cols,
                                            std::uint32_t p) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv * cols + c] == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[rank * cols + j]);
        const std::uint64_t inv = mod_inv(a[rank * cols + c], p);
        for (std::size_t j = c; j < cols; ++j) a[rank * cols + j] = static_cast<std::uint32_t>(a[rank * cols + j] * inv % p);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const std::uint64_t f = a[i * cols + c];
            if (!f) continue;
            for (std::size_t j = c; j < cols; ++j)
                a[i * cols + j] = static_cast<std::uint32_t>((a[i * cols + j] + (p - f) * a[rank * cols + j]) % p);
        }
        ++rank;
    }
    return rank;
}

}  // namespace kpat

#endif  // KPAT_FQ_HPP
