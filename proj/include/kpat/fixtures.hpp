#ifndef KPAT_FIXTURES_HPP
#define KPAT_FIXTURES_HPP

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polynomial.hpp"

namespace kpat::fixtures {

/// Chain polynomials k(U_n) for n = 1..16; same bytes as data/chain_polynomials.txt.
inline constexpr std::string_view kChainPolynomials = R"(# k(U_n) in t = q - 1: n followed by the coefficients of t^0, t^1, ...
1 1
2 1 1
3 1 3 1
4 1 6 7 2
5 1 10 25 20 5
6 1 15 65 105 70 18 1
7 1 21 140 385 490 301 84 8
8 1 28 266 1120 2345 2604 1568 496 74 4
9 1 36 462 2772 8715 15372 15862 9720 3489 701 72 3
10 1 45 750 6090 26985 69825 110530 110280 70320 28640 7362 1170 110 5
11 1 55 1155 12210 72765 261261 592207 877030 868725 583550 267542 83909 18007 2618 242 11
12 1 66 1705 22770 176055 841302 2600983 5387646 7680310 7684820 5473050 2803182 1042181 284109 57256 8484 890 60 2
13 1 78 2431 40040 390390 2403258 9766471 27116232 52873678 74012653 75670881 57294120 32515314 14000495 4635125 1195116 241436 37778 4381 338 13
14 1 91 3367 67067 805805 6225219 32296264 116332645 298956658 560602042 781499719 822549728 662497381 413509705 202666910 79124292 24968979 6441876 1362732 233758 31542 3159 210 7
15 1 105 4550 107835 1566565 14864850 96136040 437680815 1440259535 3502779995 6416611201 8998108665 9796436195 8387410675 5718426690 3145744973 1416179446 529371274 166405370 44325415 9997955 1887955 291345 35270 3130 180 5
16 1 120 6020 167440 2894710 33137104 261929668 1475199440 6072906125 18674026800 43703418616 79124540872 112420822696 126975887444 115398765556 85415064915 52146190588 26615252562 11515549082 4278222573 1378103758 386616800 94259304 19784488 3513854 514128 59504 5104 288 8
)";

/// n, A_(n+1), k(U_n(2)), B_n, k(U_n(3)); same bytes as data/chain_values.txt.
inline constexpr std::string_view kChainValues = R"(# n, A_{n+1}, k(U_n(2)), B_n, k(U_n(3))
1 1 1 1 1
2 2 2 3 3
3 5 5 11 11
4 16 16 57 57
5 61 61 361 361
6 272 275 2763 2891
7 1385 1430 24611 27555
8 7936 8506 250737 315761
9 50521 57205 2873041 4246737
10 353792 432113 36581523 66999699
11 2702765 3641288 512343611 1226296635
12 22368256 34064872 7828053417 26011112361
13 199360981 352200229 129570724921 635526804025
14 1903757312 4010179157 2309644635483 17881012846299
15 19391512145 50124636035 44110959165011 577907517043923
16 209865342976 685996839568 898621108880097 21474199259637473
)";

struct KirillovRow {
    std::size_t n = 0;
    BigInt euler;    ///< A_(n+1)
    BigInt k2;       ///< k(U_n(2))
    BigInt springer; ///< B_n
    BigInt k3;       ///< k(U_n(3))
};

namespace detail {

inline std::vector<std::vector<BigInt>> table_rows(std::string_view text) {
    std::vector<std::vector<BigInt>> rows;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<BigInt> row;
        for (std::string w; ls >> w;) row.emplace_back(w);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

/// The chain table as a map n -> polynomial in t.
inline const std::map<std::size_t, Poly>& chain_polynomials() {
    static const std::map<std::size_t, Poly> table = [] {
        std::map<std::size_t, Poly> out;
        for (auto& row : detail::table_rows(kChainPolynomials)) {
            const auto n = static_cast<std::size_t>(row.front());
            out.emplace(n, Poly(std::vector<BigInt>(row.begin() + 1, row.end())));
        }
        return out;
    }();
    return table;
}

inline const Poly& chain_polynomial(std::size_t n) {
    const auto& t = chain_polynomials();
    auto it = t.find(n);
    if (it == t.end()) throw std::out_of_range("no chain polynomial for n = " + std::to_string(n));
    return it->second;
}

inline const std::vector<KirillovRow>& kirillov_table() {
    static const std::vector<KirillovRow> table = [] {
        std::vector<KirillovRow> out;
        for (auto& r : detail::table_rows(kChainValues))
            out.push_back({static_cast<std::size_t>(r.at(0)), r.at(1), r.at(2), r.at(3), r.at(4)});
        return out;
    }();
    return table;
}

/// k(U_n(q)) from the value table for q in {2, 3}.
inline const BigInt& chain_value(std::size_t n, unsigned q) {
    const auto& t = kirillov_table();
    if (n < 1 || n > t.size() || (q != 2 && q != 3))
        throw std::out_of_range("no table value for n = " + std::to_string(n) + ", q = " + std::to_string(q));
    return q == 2 ? t[n - 1].k2 : t[n - 1].k3;
}

/// Euler zigzag numbers E_0..E_(count-1) by the boustrophedon transform.
inline std::vector<BigInt> euler_numbers(std::size_t count) {
    std::vector<BigInt> out;
    std::vector<BigInt> row{1};
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(row.back());
        std::vector<BigInt> next(row.size() + 1, 0);
        for (std::size_t i = 1; i < next.size(); ++i) next[i] = next[i - 1] + row[row.size() - i];
        row = std::move(next);
    }
    return out;
}

}  // namespace kpat::fixtures

#endif  // KPAT_FIXTURES_HPP
