#ifndef KPAT_ENGINE_HPP
#define KPAT_ENGINE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "canonical.hpp"
#include "interpolate.hpp"
#include "oracle.hpp"
#include "polynomial.hpp"
#include "poset.hpp"
#include "system.hpp"

namespace kpat {

// ---------------------------------------------------------------------------
// Reduction lemmas

/// D(S): drop every relation a < x with a in A, x < m and a the only member
/// of A below x.
inline Poset apply_D(const PosetSystem& s) {
    const Poset& p = s.poset;
    std::vector<Relation> removed;
    s.antichain.for_each([&](Element a) {
        (p.upper(a) & p.lower(s.top)).for_each([&](Element x) {
            if ((p.lower(x) & s.antichain).count() == 1) removed.emplace_back(a, x);
        });
    });
    if (removed.empty()) return p;
    return p.without_relations(removed);
}

/// ub(a) contains ub(b) and lb(a) is contained in lb(b).
[[nodiscard]] inline bool dominates(const Poset& p, Element a, Element b) {
    return p.upper(b).is_subset_of(p.upper(a)) && p.lower(a).is_subset_of(p.lower(b));
}

/// Repeatedly drops a dominated member of A, scanning in ascending label
/// order; among twins the lowest label survives.
inline PosetSystem prune_antichain(const PosetSystem& s) {
    ElementSet a = s.antichain;
    for (bool changed = true; changed;) {
        changed = false;
        for (Element b : a.elements()) {
            bool drop = false;
            a.for_each([&](Element x) {
                if (drop || x == b || !dominates(s.poset, x, b)) return;
                if (dominates(s.poset, b, x) && x > b) return;
                drop = true;
            });
            if (drop) {
                a.reset(b);
                changed = true;
                break;
            }
        }
    }
    return {s.poset, s.top, a};
}

/// No pair a < x < m with a in A.
[[nodiscard]] inline bool remove_max_applies(const PosetSystem& s) {
    const ElementSet below = s.poset.lower(s.top);
    bool ok = true;
    s.antichain.for_each([&](Element a) { ok = ok && !s.poset.upper(a).intersects(below); });
    return ok;
}

struct Reduction {
    std::optional<Poset> reduced;  ///< Q with k(S) = k(Q); empty on failure
    PosetSystem fixed_point;
    std::size_t passes = 0;

    explicit operator bool() const noexcept { return reduced.has_value(); }
};

/// Alternates D and pruning until nothing changes, then applies the
/// remove-max lemma if its hypothesis holds.
inline Reduction reduce_system(const PosetSystem& s) {
    PosetSystem cur = s;
    const std::size_t cap = s.poset.relation_count() + s.antichain.count() + 1;
    Reduction out;
    for (;;) {
        if (out.passes == cap) throw std::logic_error("D/prune loop did not reach a fixed point");
        ++out.passes;
        PosetSystem next = prune_antichain(PosetSystem(apply_D(cur), cur.top, cur.antichain));
        if (next == cur) break;
        cur = std::move(next);
    }
    if (remove_max_applies(cur)) out.reduced = remove(cur.poset, cur.top);
    out.fixed_point = std::move(cur);
    return out;
}

// ---------------------------------------------------------------------------
// Results

enum class Status { proven, interpolated, unresolved };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::proven: return "proven";
        case Status::interpolated: return "interpolated";
        case Status::unresolved: return "unresolved";
    }
    return "?";
}

inline Status combine(Status a, Status b) { return std::max(a, b); }

struct TraceNode {
    std::string poset_key;
    std::optional<Element> m;
    std::optional<std::vector<Element>> antichain;
    std::string rule;  ///< component | dual | memo | D+remove_max | fallback
    Status status = Status::proven;
    std::optional<Poly> poly;
    std::vector<std::shared_ptr<const TraceNode>> children;
};
using TracePtr = std::shared_ptr<const TraceNode>;

struct FallbackRecord {
    PosetSystem system;
    std::size_t degree_bound = 0;
    std::vector<SamplePoint> samples;
    Interpolation fit;
    std::optional<Interpolation> odd_fit;       ///< odd primes only, on failure
    std::optional<BigRational> even_residual;   ///< q = 2 against the odd fit
    Status status = Status::unresolved;
    std::string reason;
};

struct KResult {
    Status status = Status::proven;
    std::optional<Poly> poly;  ///< absent when unresolved
    Poly partial;              ///< sum of the resolved terms
    std::vector<PosetSystem> residual;
    std::vector<FallbackRecord> fallbacks;
    TracePtr trace;

    [[nodiscard]] bool proven() const noexcept { return status == Status::proven; }
};

struct EngineOptions {
    unsigned threads = 1;
    bool trace = false;
    OracleOptions oracle{};
    std::optional<std::size_t> fallback_degree_bound;  ///< overrides |rel(P)|
};

struct EngineStats {
    std::atomic<std::uint64_t> expansions{0};
    std::atomic<std::uint64_t> memo_hits{0};
    std::atomic<std::uint64_t> fallbacks{0};
    std::atomic<std::uint64_t> systems{0};
};

// ---------------------------------------------------------------------------
// Fallback

/// Samples k(S) at consecutive primes within the oracle budget and fits a
/// polynomial in t with one held-out point.
inline FallbackRecord fallback_system(const PosetSystem& s, const OracleOptions& opt = {},
                                      std::optional<std::size_t> degree_bound = std::nullopt) {
    FallbackRecord rec;
    rec.system = s;
    rec.degree_bound = degree_bound.value_or(s.poset.relation_count());
    const std::size_t need = rec.degree_bound + 2;
    const std::size_t r = s.poset.relation_count();
    std::vector<std::uint32_t> primes;
    for (std::uint32_t q = 2; primes.size() < need && big_pow(q, r) <= BigInt(opt.budget); ++q)
        if (is_prime(q)) primes.push_back(q);
    if (primes.size() < need) {
        rec.fit.reason = "not enough samples";
        rec.reason = "oracle budget allows only " + std::to_string(primes.size()) + " of " + std::to_string(need) +
                     " samples";
        return rec;
    }
    for (std::uint32_t q : primes) rec.samples.push_back({q, count_k_system(s, q, opt)});
    rec.fit = interpolate(rec.samples, rec.degree_bound);
    if (rec.fit.ok()) {
        rec.status = Status::interpolated;
        return rec;
    }
    rec.reason = rec.samples.size() < need ? "oracle budget allows only " + std::to_string(rec.samples.size()) +
                                                 " of " + std::to_string(need) + " samples"
                                           : rec.fit.reason;
    if (rec.samples.size() >= 2 && rec.samples.front().q == 2) {
        std::vector<SamplePoint> odd(rec.samples.begin() + 1, rec.samples.end());
        if (odd.size() >= 2) {
            rec.odd_fit = interpolate(odd, std::min(rec.degree_bound, odd.size() - 2));
            if (rec.odd_fit->ok())
                rec.even_residual = BigRational(rec.samples.front().count - rec.odd_fit->poly->eval_at_q(2));
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Engine

namespace detail {

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Recursive evaluation of k(P) over poset systems with a memo shared
/// between calls.
class Engine {
   public:
    explicit Engine(EngineOptions opt = {}) : opt_(std::move(opt)) {}

    KResult compute(const Poset& p) { return compute(p, 0); }

    [[nodiscard]] const EngineStats& stats() const noexcept { return stats_; }
    [[nodiscard]] const EngineOptions& options() const noexcept { return opt_; }

    std::optional<Poly> memo_lookup(const CanonicalKey& k) const {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(k);
        if (it == memo_.end()) return std::nullopt;
        return it->second;
    }
    void memo_insert(const CanonicalKey& k, const Poly& poly) {
        std::unique_lock lock(mutex_);
        memo_.insert_or_assign(k, poly);
    }
    [[nodiscard]] std::size_t memo_size() const {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }
    void clear_memo() {
        std::unique_lock lock(mutex_);
        memo_.clear();
        conjectural_.clear();
    }

   private:
    struct Candidate {
        Poset poset;
        Element m = 0;
        bool dual = false;
        std::vector<ElementSet> antichains;
        std::vector<Reduction> reductions;
        std::size_t failures = 0;
    };

    static TracePtr leaf(std::string key, std::string rule, const Poly& poly, Status st = Status::proven) {
        auto n = std::make_shared<TraceNode>();
        n->poset_key = std::move(key);
        n->rule = std::move(rule);
        n->poly = poly;
        n->status = st;
        return n;
    }

    KResult compute(const Poset& p, int depth) {
        if (is_antichain(p, p.all())) {
            KResult r;
            r.poly = Poly(1);
            r.partial = Poly(1);
            if (opt_.trace) r.trace = leaf(canonical_key(p).hex(), "component", Poly(1));
            return r;
        }
        auto comps = components(p);
        if (comps.size() > 1) {
            std::vector<KResult> parts(comps.size());
            detail::parallel_for(comps.size(), depth == 0 ? opt_.threads : 1,
                                 [&](std::size_t i) { parts[i] = compute(comps[i], depth + 1); });
            KResult r;
            r.partial = Poly(1);
            auto node = std::make_shared<TraceNode>();
            for (auto& part : parts) {
                r.status = combine(r.status, part.status);
                r.partial *= part.poly ? *part.poly : part.partial;
                r.residual.insert(r.residual.end(), part.residual.begin(), part.residual.end());
                r.fallbacks.insert(r.fallbacks.end(), part.fallbacks.begin(), part.fallbacks.end());
                if (opt_.trace) node->children.push_back(part.trace);
            }
            if (r.status != Status::unresolved) r.poly = r.partial;
            if (opt_.trace) {
                node->poset_key = canonical_key(p).hex();
                node->rule = "component";
                node->status = r.status;
                node->poly = r.poly;
                r.trace = node;
            }
            return r;
        }

        const CanonicalForm cf = canonical_form(p);
        const CanonicalKey key = detail::key_of_canonical(cf.poset);
        if (auto hit = lookup(key, cf.poset)) return *hit;

        ++stats_.expansions;
        KResult r = expand(cf.poset, key, depth);
        if (r.status == Status::proven) {
            memo_insert(key, *r.poly);
        } else if (r.status == Status::interpolated) {
            std::unique_lock lock(mutex_);
            conjectural_.insert_or_assign(key, r);
        }
        return r;
    }

    std::optional<KResult> lookup(const CanonicalKey& key, const Poset& canon) {
        auto from_memo = [&](const Poly& poly) {
            ++stats_.memo_hits;
            KResult r;
            r.poly = poly;
            r.partial = poly;
            if (opt_.trace) r.trace = leaf(key.hex(), "memo", poly);
            return r;
        };
        if (auto p = memo_lookup(key)) return from_memo(*p);
        const CanonicalKey dkey = canonical_key(dual(canon));
        if (dkey != key)
            if (auto p = memo_lookup(dkey)) return from_memo(*p);
        std::shared_lock lock(mutex_);
        for (const auto* k : {&key, &dkey}) {
            auto it = conjectural_.find(*k);
            if (it == conjectural_.end()) continue;
            ++stats_.memo_hits;
            KResult r = it->second;
            if (opt_.trace) r.trace = leaf(key.hex(), "memo", *r.poly, r.status);
            return r;
        }
        return std::nullopt;
    }

    static Candidate evaluate(Poset poset, Element m, bool is_dual) {
        Candidate c;
        c.poset = std::move(poset);
        c.m = m;
        c.dual = is_dual;
        c.antichains = antichains_in(c.poset, c.poset.lower(m));
        for (const auto& a : c.antichains) {
            c.reductions.push_back(reduce_system(PosetSystem(c.poset, m, a)));
            if (!c.reductions.back()) ++c.failures;
        }
        return c;
    }

    Candidate choose(const Poset& p) {
        std::optional<Candidate> best;
        auto consider = [&](const Poset& x, bool is_dual) {
            for (Element m : x.maximal().elements()) {
                Candidate c = evaluate(x, m, is_dual);
                if (c.failures == 0) return std::optional<Candidate>(std::move(c));
                if (!best || c.failures < best->failures) best = std::move(c);
            }
            return std::optional<Candidate>();
        };
        if (auto c = consider(p, false)) return std::move(*c);
        if (auto c = consider(dual(p), true)) return std::move(*c);
        return std::move(*best);
    }

    KResult expand(const Poset& p, const CanonicalKey& key, int depth) {
        Candidate c = choose(p);
        const std::size_t count = c.antichains.size();
        stats_.systems += count;
        std::vector<KResult> terms(count);
        detail::parallel_for(count, depth == 0 ? opt_.threads : 1, [&](std::size_t i) {
            const Reduction& red = c.reductions[i];
            if (red) {
                terms[i] = compute(*red.reduced, depth + 1);
                return;
            }
            ++stats_.fallbacks;
            FallbackRecord rec;
            try {
                rec = fallback_system(PosetSystem(c.poset, c.m, c.antichains[i]), opt_.oracle,
                                      opt_.fallback_degree_bound);
            } catch (const BudgetExceeded& e) {
                rec.system = PosetSystem(c.poset, c.m, c.antichains[i]);
                rec.reason = e.what();
            }
            KResult t;
            t.status = rec.status;
            if (rec.fit.ok()) {
                t.poly = *rec.fit.poly;
                t.partial = *rec.fit.poly;
            } else {
                t.residual.push_back(rec.system);
            }
            t.fallbacks.push_back(std::move(rec));
            terms[i] = std::move(t);
        });

        KResult r;
        auto node = std::make_shared<TraceNode>();
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t size = c.antichains[i].count();
            KResult& t = terms[i];
            r.status = combine(r.status, t.status);
            r.partial += (t.poly ? *t.poly : t.partial).scale_tk(size);
            r.residual.insert(r.residual.end(), t.residual.begin(), t.residual.end());
            r.fallbacks.insert(r.fallbacks.end(), t.fallbacks.begin(), t.fallbacks.end());
            if (opt_.trace) {
                auto sys = std::make_shared<TraceNode>();
                sys->poset_key = detail::key_of_canonical(canonical_form(c.poset).poset).hex();
                sys->m = c.m;
                sys->antichain = c.antichains[i].elements();
                sys->status = t.status;
                sys->poly = t.poly;
                if (c.reductions[i]) {
                    sys->rule = "D+remove_max";
                    sys->children.push_back(t.trace);
                } else {
                    sys->rule = "fallback";
                }
                node->children.push_back(std::move(sys));
            }
        }
        if (r.status != Status::unresolved) r.poly = r.partial;
        if (opt_.trace) {
            node->poset_key = key.hex();
            node->m = c.m;
            node->rule = "D+remove_max";
            node->status = r.status;
            node->poly = r.poly;
            if (c.dual) {
                auto wrap = std::make_shared<TraceNode>();
                wrap->poset_key = key.hex();
                wrap->rule = "dual";
                wrap->status = r.status;
                wrap->poly = r.poly;
                node->poset_key = canonical_key(c.poset).hex();
                wrap->children.push_back(node);
                r.trace = wrap;
            } else {
                r.trace = node;
            }
        }
        return r;
    }

    EngineOptions opt_;
    EngineStats stats_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<CanonicalKey, Poly, CanonicalKeyHash> memo_;
    std::unordered_map<CanonicalKey, KResult, CanonicalKeyHash> conjectural_;
};

inline KResult compute_k(const Poset& p, EngineOptions opt = {}) { return Engine(std::move(opt)).compute(p); }

// ---------------------------------------------------------------------------
// Guarantees

struct Guarantee {
    bool guaranteed = false;
    std::string theorem;        ///< "y-free-below" | "interval-unique-max" | ""
    std::optional<Element> m;   ///< the maximal element for y-free-below
};

/// Which reducibility theorem, if any, covers every system at the first
/// expansion of P.
inline Guarantee reducibility_guarantees(const Poset& p) {
    Guarantee g;
    for (Element m : p.maximal().elements())
        if (is_y_free_below(p, m)) {
            g.guaranteed = true;
            g.theorem = "y-free-below";
            g.m = m;
            return g;
        }
    if (p.maximal().count() == 1 && is_interval(p)) {
        g.guaranteed = true;
        g.theorem = "interval-unique-max";
        g.m = p.maximal().front();
    }
    return g;
}

}  // namespace kpat

#endif  // KPAT_ENGINE_HPP
