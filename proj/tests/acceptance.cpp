#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "kpat/campaign.hpp"
#include "kpat/embedding.hpp"
#include "kpat/enumerate.hpp"
#include "kpat/engine.hpp"
#include "kpat/fixtures.hpp"
#include "kpat/oracle.hpp"

using namespace kpat;

namespace {

// Wall-clock limits per criterion, in seconds.
constexpr double kLimitChains = 60;
constexpr double kLimitOracle = 600;
constexpr double kLimitSweep = 600;
constexpr double kLimitDiamond = 60;

// Criterion 5: at least this many random systems.
constexpr std::size_t kRandomSystems = 240;
// Criterion 7: numeric step checks only where both sides have at most this many relations.
constexpr std::size_t kTwoChainsNumericRelations = 24;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double x, int digits = 2) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
}

Outcome golden_chains() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string bad;
    Engine e;
    for (std::size_t n = 1; n <= 8; ++n) {
        const KResult r = e.compute(Poset::chain(n));
        if (!r.proven() || *r.poly != fixtures::chain_polynomial(n)) {
            ok = false;
            bad += " C" + std::to_string(n);
        }
    }
    const double t = seconds_since(t0);
    std::string stretch;
    for (std::size_t n = 9; n <= 11; ++n) {
        const auto s0 = std::chrono::steady_clock::now();
        const KResult r = e.compute(Poset::chain(n));
        const bool match = r.proven() && *r.poly == fixtures::chain_polynomial(n);
        stretch += " C" + std::to_string(n) + (match ? " match" : " MISMATCH") + " " + fixed(seconds_since(s0), 3) + "s;";
    }
    const KResult c12 = e.compute(Poset::chain(12));
    const std::size_t open = c12.residual.size();
    stretch += " C12 " + std::string(to_string(c12.status)) + " with " + std::to_string(open) + " residual system" +
               (open == 1 ? "" : "s");
    return {ok && t < kLimitChains,
            "C1..C8 exact in " + fixed(t, 3) + "s" + (bad.empty() ? "" : ", failed:" + bad) + "; stretch:" + stretch};
}

Outcome oracle_tables() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> q2{1, 2, 5, 16, 61, 275, 1430}, q3{1, 3, 11, 57, 361, 2891};
    bool ok = true;
    std::string bad;
    for (std::size_t n = 1; n <= q2.size(); ++n)
        if (count_k(Poset::chain(n), 2) != q2[n - 1]) {
            ok = false;
            bad += " q=2 n=" + std::to_string(n);
        }
    for (std::size_t n = 1; n <= q3.size(); ++n)
        if (count_k(Poset::chain(n), 3) != q3[n - 1]) {
            ok = false;
            bad += " q=3 n=" + std::to_string(n);
        }
    const double t = seconds_since(t0);
    return {ok && t < kLimitOracle, "q=2 n<=7, q=3 n<=6 in " + fixed(t) + "s" + (bad.empty() ? "" : ", failed:" + bad)};
}

Outcome cross_consistency() {
    std::size_t checks = 0;
    bool ok = true;
    for (std::size_t n = 1; n <= 16; ++n)
        for (unsigned q : {2U, 3U}) {
            ++checks;
            ok = ok && fixtures::chain_polynomial(n).eval_at_q(q) == fixtures::chain_value(n, q);
        }
    return {ok, std::to_string(checks) + " evaluations for n<=16"};
}

Outcome small_sweep() {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepReport rep = sweep(6);
    std::size_t proven = 0, interpolated = 0, failed = 0;
    for (const auto& e : rep.entries) {
        proven += e.result.status == Status::proven;
        interpolated += e.result.status == Status::interpolated;
        failed += !e.pass;
    }
    const double t = seconds_since(t0);
    return {rep.ok() && t < kLimitSweep,
            std::to_string(rep.entries.size()) + " posets (" + std::to_string(proven) + " proven, " +
                std::to_string(interpolated) + " interpolated, " + std::to_string(failed) + " failed), " +
                std::to_string(rep.fallbacks) + " fallbacks, " + fixed(t) + "s"};
}

Outcome lemma_equivalence() {
    std::mt19937_64 rng(2024);
    std::size_t systems = 0, d_checks = 0, prune_checks = 0, remove_checks = 0, strat_checks = 0;
    bool ok = true;
    while (systems < kRandomSystems) {
        const std::size_t n = 2 + systems % 4;
        std::bernoulli_distribution coin(0.45);
        std::vector<Relation> pairs;
        for (Element i = 0; i < n; ++i)
            for (Element j = i + 1; j < n; ++j)
                if (coin(rng)) pairs.emplace_back(i, j);
        const Poset p = transitive_closure(n, pairs);
        const auto tops = p.maximal().elements();
        const Element m = tops[std::uniform_int_distribution<std::size_t>(0, tops.size() - 1)(rng)];
        const auto acs = antichains_in(p, p.lower(m));
        const ElementSet a = acs[std::uniform_int_distribution<std::size_t>(0, acs.size() - 1)(rng)];
        const PosetSystem s(p, m, a);
        ++systems;
        for (std::uint32_t q : {2U, 3U}) {
            const BigInt k = count_k_system(s, q);
            ok = ok && count_k_system(PosetSystem(apply_D(s), m, a), q) == k;
            ++d_checks;
            const PosetSystem pr = prune_antichain(s);
            if (pr.antichain != a) {
                ok = ok && count_k_system(pr, q) == k;
                ++prune_checks;
            }
            if (remove_max_applies(s)) {
                ok = ok && count_k(remove(p, m), q) == k;
                ++remove_checks;
            }
            BigInt sum = 0;
            for (const auto& b : acs) sum += big_pow(q - 1, b.count()) * count_k_system(PosetSystem(p, m, b), q);
            ok = ok && sum == count_k(p, q);
            ++strat_checks;
        }
    }
    return {ok, std::to_string(systems) + " systems on <=5 elements at q=2,3: apply_D " + std::to_string(d_checks) +
                    ", normal_conj " + std::to_string(prune_checks) + ", remove_max " +
                    std::to_string(remove_checks) + ", stratification " + std::to_string(strat_checks)};
}

Outcome guarantees() {
    std::size_t y_free = 0, interval = 0, bad = 0;
    for (const Poset& p : posets_up_to(6)) {
        const Guarantee g = reducibility_guarantees(p);
        if (!g.guaranteed) continue;
        (g.theorem == "y-free-below" ? y_free : interval) += 1;
        Engine e;
        const KResult r = e.compute(p);
        if (!r.proven() || e.stats().fallbacks != 0) ++bad;
    }
    return {bad == 0, std::to_string(y_free) + " Y-free-below, " + std::to_string(interval) +
                          " interval with unique max; " + std::to_string(bad) + " with fallbacks"};
}

Outcome embeddings() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t posets = 0, bad_univ = 0;
    for (const Poset& p : posets_up_to(7)) {
        ++posets;
        const EmbeddingCertificate c = chain_univ_cert(p);
        const bool size_ok = is_chain(c.target) && c.target.size() == p.size() * p.size() - 2 * p.relation_count();
        if (!size_ok || !verify(c)) ++bad_univ;
    }
    const double t_univ = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    std::size_t bad_two = 0, steps = 0, checked = 0;
    VerifyOptions numeric;
    numeric.numeric = true;
    numeric.primes = {2};
    numeric.max_relations = kTwoChainsNumericRelations;
    for (std::size_t a = 0; a <= 4; ++a)
        for (std::size_t b = 0; b <= 4; ++b) {
            const EmbeddingCertificate c = two_chains_cert(a, b);
            const VerifyReport rep = verify(c, numeric);
            if (!rep || !is_isomorphic(c.target, Poset::chain(2 * a + b))) ++bad_two;
            steps += c.length();
            checked += rep.numeric_checks;
        }
    const double t_two = seconds_since(t1);

    const auto t2 = std::chrono::steady_clock::now();
    const EmbeddingCertificate pd = p_diamond_c59_cert();
    const VerifyReport pd_rep = verify(pd);
    const bool pd_ok = pd_rep && is_isomorphic(pd.target, Poset::chain(59));
    const double t_pd = seconds_since(t2);

    return {bad_univ == 0 && bad_two == 0 && pd_ok && t_pd < kLimitDiamond,
            "chain_univ " + std::to_string(posets - bad_univ) + "/" + std::to_string(posets) + " posets <=7 in " +
                fixed(t_univ) + "s; two_chains a,b<=4 " + std::to_string(25 - bad_two) + "/25 with " +
                std::to_string(checked) + "/" + std::to_string(steps) + " steps checked at q=2 (|rel|<=" +
                std::to_string(kTwoChainsNumericRelations) + ") in " + fixed(t_two) + "s; P-diamond -> C59 " +
                std::to_string(pd.length()) + " steps " + (pd_ok ? "verified" : "FAILED " + pd_rep.reason) + " in " +
                fixed(t_pd) + "s"};
}

Outcome degree_law() {
    Engine e;
    std::size_t computed = 0;
    bool ok = true;
    std::string degrees;
    for (std::size_t n = 1; n <= 11; ++n) {
        const KResult r = e.compute(Poset::chain(n));
        if (!r.proven()) break;
        ++computed;
        const long want = static_cast<long>(n * (n + 6) / 12);
        ok = ok && r.poly->degree() == want;
        degrees += (n > 1 ? "," : "") + std::to_string(r.poly->degree());
    }
    return {ok && computed >= 8, "n=1.." + std::to_string(computed) + " degrees " + degrees};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"golden chain polynomials", golden_chains},
        {"value tables by the oracle", oracle_tables},
        {"table cross-consistency", cross_consistency},
        {"small-poset sweep", small_sweep},
        {"lemma-level oracle equivalence", lemma_equivalence},
        {"reducibility guarantees", guarantees},
        {"embedding certificates", embeddings},
        {"degree law", degree_law},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << i + 1 << ' ' << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
