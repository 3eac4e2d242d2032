#ifndef KPAT_INTERPOLATE_HPP
#define KPAT_INTERPOLATE_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace kpat {

struct SamplePoint {
    BigInt q;
    BigInt count;
};

struct Interpolation {
    std::optional<Poly> poly;           ///< set only on success
    std::vector<BigRational> residuals; ///< count - fit at every held-out point
    std::string reason;                 ///< empty on success
    std::vector<SamplePoint> fit_points;
    std::vector<SamplePoint> validation_points;

    [[nodiscard]] bool ok() const noexcept { return poly.has_value(); }
};

/// Fits a polynomial of degree <= degree_bound through the first
/// degree_bound + 1 points with exact rational arithmetic (Newton form in
/// t = q - 1), then demands integer coefficients and an exact match on every
/// remaining point. At least one held-out point is mandatory.
inline Interpolation interpolate(const std::vector<SamplePoint>& points, std::size_t degree_bound) {
    Interpolation out;
    {
        std::set<BigInt> qs;
        for (const auto& p : points) qs.insert(p.q);
        if (qs.size() != points.size()) {
            out.reason = "sample points must have distinct q";
            return out;
        }
    }
    const std::size_t m = degree_bound + 1;
    if (points.size() < m + 1) {
        out.reason = "need " + std::to_string(m + 1) + " points for degree bound " +
                     std::to_string(degree_bound) + ", have " + std::to_string(points.size());
        return out;
    }
    out.fit_points.assign(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(m));
    out.validation_points.assign(points.begin() + static_cast<std::ptrdiff_t>(m), points.end());

    std::vector<BigRational> xs(m), dd(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = BigRational(points[i].q - 1);
        dd[i] = BigRational(points[i].count);
    }
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);

    // Horner expansion of the Newton form into monomial coefficients in t.
    std::vector<BigRational> c(1, dd[m - 1]);
    for (std::size_t k = m - 1; k-- > 0;) {
        std::vector<BigRational> next(c.size() + 1, BigRational(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= c[i] * xs[k];
        }
        next[0] += dd[k];
        c = std::move(next);
    }

    auto value_at = [&](const BigInt& q) {
        const BigRational t(q - 1);
        BigRational acc(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
        return acc;
    };
    bool matched = true;
    for (const auto& p : out.validation_points) {
        BigRational r = BigRational(p.count) - value_at(p.q);
        if (r != 0) matched = false;
        out.residuals.push_back(std::move(r));
    }
    bool integral = true;
    std::vector<BigInt> ic;
    for (const auto& x : c) {
        if (boost::multiprecision::denominator(x) != 1) {
            integral = false;
            break;
        }
        ic.push_back(boost::multiprecision::numerator(x));
    }
    if (!matched) {
        out.reason = "held-out point disagrees with the fit";
        return out;
    }
    if (!integral) {
        out.reason = "fit has non-integer coefficients";
        return out;
    }
    out.poly = Poly(std::move(ic));
    return out;
}

}  // namespace kpat

#endif  // KPAT_INTERPOLATE_HPP
