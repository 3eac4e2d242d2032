#ifndef KPAT_CAMPAIGN_HPP
#define KPAT_CAMPAIGN_HPP

#include <string>
#include <vector>

#include "enumerate.hpp"
#include "engine.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

namespace kpat {

struct TableCheck {
    std::string check;
    std::size_t n = 0;
    bool pass = false;
    std::string detail;
};

struct TablesOptions {
    std::size_t max_chain = 8;
    std::size_t max_q2 = 7;
    std::size_t max_q3 = 6;
    EngineOptions engine;
};

struct TablesReport {
    std::vector<TableCheck> checks;
    std::vector<std::pair<std::size_t, std::uint64_t>> exceptional;  ///< (n, fallback systems)
    [[nodiscard]] bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const TableCheck& c) { return c.pass; });
    }
};

/// Chain polynomials against the reference tables, the degree law, the
/// Kirillov lower bounds, and the oracle against the value table.
inline TablesReport verify_tables(const TablesOptions& opt = {}) {
    TablesReport rep;
    Engine engine(opt.engine);
    for (std::size_t n = 1; n <= opt.max_chain; ++n) {
        const std::uint64_t before = engine.stats().fallbacks.load();
        const KResult r = engine.compute(Poset::chain(n));
        rep.exceptional.emplace_back(n, engine.stats().fallbacks.load() - before);
        const std::string got = r.poly ? r.poly->to_string() : std::string("unresolved");
        const bool have_table = n <= fixtures::chain_polynomials().size();
        if (have_table)
            rep.checks.push_back({"chain-polynomial", n, r.proven() && *r.poly == fixtures::chain_polynomial(n),
                                  got + " [" + to_string(r.status) + "]"});
        if (r.poly) {
            const long want = static_cast<long>(n * (n + 6) / 12);
            rep.checks.push_back({"degree-law", n, r.poly->degree() == want,
                                  "degree " + std::to_string(r.poly->degree()) + ", floor(n(n+6)/12) = " +
                                      std::to_string(want)});
            if (have_table) {
                const auto& row = fixtures::kirillov_table().at(n - 1);
                const BigInt k2 = r.poly->eval_at_q(2), k3 = r.poly->eval_at_q(3);
                rep.checks.push_back({"kirillov-q2", n, k2 >= row.euler,
                                      "k(U_n(2)) = " + k2.str() + ", A_(n+1) = " + row.euler.str()});
                rep.checks.push_back({"kirillov-q3", n, k3 >= row.springer,
                                      "k(U_n(3)) = " + k3.str() + ", B_n = " + row.springer.str()});
            }
        }
    }
    for (unsigned q : {2U, 3U}) {
        const std::size_t top = q == 2 ? opt.max_q2 : opt.max_q3;
        for (std::size_t n = 1; n <= top; ++n) {
            TableCheck c{"oracle-q" + std::to_string(q), n, false, ""};
            try {
                const BigInt k = count_k(Poset::chain(n), q, opt.engine.oracle);
                const BigInt& want = fixtures::chain_value(n, q);
                c.pass = k == want;
                c.detail = k.str() + " (table " + want.str() + ")";
            } catch (const BudgetExceeded& e) {
                c.detail = e.what();
            }
            rep.checks.push_back(std::move(c));
        }
    }
    return rep;
}

struct SweepEntry {
    Poset poset;
    KResult result;
    std::optional<BigInt> oracle_q2, oracle_q3;
    bool pass = false;
    std::string detail;
};

struct SweepReport {
    std::vector<std::pair<std::size_t, std::size_t>> counts;  ///< (size, posets)
    std::vector<SweepEntry> entries;
    std::uint64_t fallbacks = 0;
    [[nodiscard]] bool ok() const {
        return std::all_of(entries.begin(), entries.end(), [](const SweepEntry& e) { return e.pass; });
    }
};

/// Every poset with 1..max_elements elements: status resolved, coefficients
/// nonnegative, and agreement with the oracle at q = 2 and q = 3.
inline SweepReport sweep(std::size_t max_elements, const EngineOptions& opt = {}) {
    SweepReport rep;
    Engine engine(opt);
    for (std::size_t k = 1; k <= max_elements; ++k) {
        const auto level = posets_of_size(k);
        rep.counts.emplace_back(k, level.size());
        for (const Poset& p : level) {
            SweepEntry e{p, engine.compute(p), std::nullopt, std::nullopt, false, ""};
            std::string why;
            if (!e.result.poly) {
                why = "unresolved";
            } else if (!e.result.poly->nonnegative()) {
                why = "negative coefficient";
            } else {
                try {
                    e.oracle_q2 = count_k(p, 2, opt.oracle);
                    e.oracle_q3 = count_k(p, 3, opt.oracle);
                    if (*e.oracle_q2 != e.result.poly->eval_at_q(2)) why = "mismatch at q = 2";
                    else if (*e.oracle_q3 != e.result.poly->eval_at_q(3)) why = "mismatch at q = 3";
                } catch (const BudgetExceeded& ex) {
                    why = ex.what();
                }
            }
            e.pass = why.empty();
            e.detail = why;
            rep.entries.push_back(std::move(e));
        }
    }
    rep.fallbacks = engine.stats().fallbacks.load();
    return rep;
}

}  // namespace kpat

#endif  // KPAT_CAMPAIGN_HPP
