#ifndef KPAT_POLYNOMIAL_HPP
#define KPAT_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace kpat {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Polynomial with big-integer coefficients in t = q - 1. Coefficient i is
/// the coefficient of t^i; no trailing zeros, the zero polynomial is empty.
class Poly {
   public:
    Poly() = default;
    Poly(int c) : coeffs_{BigInt(c)} { trim(); }
    Poly(std::initializer_list<BigInt> cs) : coeffs_(cs) { trim(); }
    explicit Poly(std::vector<BigInt> cs) : coeffs_(std::move(cs)) { trim(); }

    static Poly t_power(std::size_t k) {
        std::vector<BigInt> cs(k + 1, 0);
        cs[k] = 1;
        return Poly(std::move(cs));
    }

    [[nodiscard]] const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    [[nodiscard]] long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
    [[nodiscard]] BigInt coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : BigInt(0); }

    [[nodiscard]] bool nonnegative() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return c >= 0; });
    }

    Poly& operator+=(const Poly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Poly(std::move(out));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend bool operator==(const Poly&, const Poly&) = default;

    /// a * t^k
    [[nodiscard]] Poly scale_tk(std::size_t k) const {
        if (is_zero()) return {};
        std::vector<BigInt> out(k, 0);
        out.insert(out.end(), coeffs_.begin(), coeffs_.end());
        return Poly(std::move(out));
    }

    /// Value at t = q - 1.
    [[nodiscard]] BigInt eval_at_q(const BigInt& q) const { return eval_at_t(q - 1); }
    [[nodiscard]] BigInt eval_at_t(const BigInt& t) const {
        BigInt acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    /// Coefficients in powers of q (binomial re-expansion of (q-1)^i).
    [[nodiscard]] std::vector<BigInt> to_q_basis() const {
        std::vector<BigInt> out(coeffs_.size(), 0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            BigInt binom = 1;  // C(i, j)
            for (std::size_t j = 0; j <= i; ++j) {
                const BigInt term = binom * coeffs_[i];
                if ((i - j) % 2 == 0)
                    out[j] += term;
                else
                    out[j] -= term;
                binom = binom * (i - j) / (j + 1);
            }
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    }

    /// Inverse of to_q_basis: q^j = (t + 1)^j.
    static Poly from_q_basis(const std::vector<BigInt>& qc) {
        std::vector<BigInt> out(qc.size(), 0);
        for (std::size_t j = 0; j < qc.size(); ++j) {
            BigInt binom = 1;
            for (std::size_t i = 0; i <= j; ++i) {
                out[i] += binom * qc[j];
                binom = binom * (j - i) / (i + 1);
            }
        }
        return Poly(std::move(out));
    }

    /// ASCII rendering, e.g. "1 + 3t + t^2".
    [[nodiscard]] std::string to_string(char var = 't') const { return render(var, false); }
    /// Rendering with superscript exponents, e.g. "1 + 3t + t²".
    [[nodiscard]] std::string pretty(char var = 't') const { return render(var, true); }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

   private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::string render(char var, bool superscript) const {
        return render_terms(coeffs_, var, superscript);
    }

   public:
    static std::string render_terms(const std::vector<BigInt>& cs, char var, bool superscript) {
        static const char* const sup[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const BigInt& c = cs[i];
            if (c == 0) continue;
            BigInt mag = c < 0 ? BigInt(-c) : c;
            if (first)
                os << (c < 0 ? "-" : "");
            else
                os << (c < 0 ? " - " : " + ");
            first = false;
            if (i == 0 || mag != 1) os << mag;
            if (i >= 1) os << var;
            if (i >= 2) {
                if (superscript) {
                    for (char d : std::to_string(i)) os << sup[d - '0'];
                } else {
                    os << '^' << i;
                }
            }
        }
        if (first) os << '0';
        return os.str();
    }

   private:
    std::vector<BigInt> coeffs_;
};

}  // namespace kpat

#endif  // KPAT_POLYNOMIAL_HPP
