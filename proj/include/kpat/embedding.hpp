#ifndef KPAT_EMBEDDING_HPP
#define KPAT_EMBEDDING_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "engine.hpp"
#include "oracle.hpp"
#include "poset.hpp"
#include "system.hpp"

namespace kpat {

enum class StepRule { strong_d, dual };
enum class CertKind { strong, weak };

inline const char* to_string(StepRule r) { return r == StepRule::strong_d ? "strong-D" : "dual"; }
inline const char* to_string(CertKind k) { return k == CertKind::strong ? "strong" : "weak"; }

/// One link P_i -> P_{i+1}. For strong-D, (after, m, {a}) is a poset system
/// with before isomorphic to D(after, m, {a}) - m. For dual, after is the
/// dual of before. `origin` names the construction that produced the step
/// (max-el, saturate, add-top, two-chains, antichain-to-chain, lift, ...).
struct EmbeddingStep {
    StepRule rule = StepRule::strong_d;
    std::string origin;
    Poset before;
    Poset after;
    Element m = 0;
    Element a = 0;
};

struct EmbeddingCertificate {
    Poset source;
    Poset target;
    std::vector<EmbeddingStep> steps;
    CertKind kind = CertKind::strong;

    [[nodiscard]] std::size_t length() const noexcept { return steps.size(); }
};

inline EmbeddingCertificate identity_cert(const Poset& p) { return {p, p, {}, CertKind::strong}; }

/// a followed by b; a.target must be isomorphic to b.source.
inline EmbeddingCertificate concat(EmbeddingCertificate a, const EmbeddingCertificate& b) {
    a.steps.insert(a.steps.end(), b.steps.begin(), b.steps.end());
    a.target = b.target;
    if (b.kind == CertKind::weak) a.kind = CertKind::weak;
    return a;
}

namespace detail {

class SequenceBuilder {
   public:
    explicit SequenceBuilder(Poset source) : cert_{source, std::move(source), {}, CertKind::strong} {}

    void strong(std::string origin, Poset before, Poset after, Element m, Element a) {
        cert_.steps.push_back({StepRule::strong_d, std::move(origin), std::move(before), after, m, a});
        cert_.target = std::move(after);
    }
    void dual(std::string origin) {
        Poset before = cert_.target;
        Poset after = kpat::dual(before);
        cert_.steps.push_back({StepRule::dual, std::move(origin), std::move(before), after, 0, 0});
        cert_.target = std::move(after);
        cert_.kind = CertKind::weak;
    }
    void append(const EmbeddingCertificate& c) { cert_ = concat(std::move(cert_), c); }

    [[nodiscard]] const Poset& take_view() const noexcept { return cert_.target; }
    EmbeddingCertificate take() { return std::move(cert_); }

   private:
    EmbeddingCertificate cert_;
};

/// Builds a poset from transitively closed lower sets on arbitrary ids,
/// relabelling by a topological order (smallest id first among ready ones).
/// map[id] is the new label.
inline Poset topological_poset(const std::vector<ElementSet>& lower, std::vector<Element>& map) {
    const std::size_t n = lower.size();
    map.assign(n, 0);
    std::vector<bool> placed(n, false);
    ElementSet done;
    for (std::size_t pos = 0; pos < n; ++pos) {
        std::size_t pick = n;
        for (std::size_t v = 0; v < n && pick == n; ++v)
            if (!placed[v] && lower[v].is_subset_of(done)) pick = v;
        if (pick == n) throw std::logic_error("lower sets contain a cycle");
        placed[pick] = true;
        done.set(pick);
        map[pick] = pos;
    }
    std::vector<ElementSet> relabelled(n);
    for (std::size_t v = 0; v < n; ++v) lower[v].for_each([&](Element u) { relabelled[map[v]].set(map[u]); });
    return Poset::from_lower_sets(std::move(relabelled));
}

inline Element after_removal(Element label, Element removed) { return label > removed ? label - 1 : label; }

}  // namespace detail

struct SaturateResult {
    EmbeddingCertificate cert;
    std::vector<Element> image;  ///< image[x]: label in cert.target of source element x
};

/// Places the elements `extra` under the maximal element m by growing a
/// chain of |extra| new elements above m, then peels that chain off one
/// strong-D step at a time. lb(m) together with `extra` must be a down-set.
inline SaturateResult saturate_cert(const Poset& p, Element m, const ElementSet& extra,
                                    const std::string& origin = "saturate") {
    if (m >= p.size() || !p.upper(m).empty()) throw std::invalid_argument("saturate needs a maximal element");
    if (extra.test(m) || extra.intersects(p.lower(m))) throw std::invalid_argument("extra elements must lie outside lb(m)");
    const ElementSet under = p.lower(m) | extra;
    under.for_each([&](Element x) {
        if (!p.lower(x).is_subset_of(under)) throw std::invalid_argument("lb(m) plus extra must be a down-set");
    });
    const std::size_t n = p.size(), k = extra.count();
    if (n + k > kMaxElements) throw std::length_error("saturated poset is too large");

    // ids: 0..n-1 the elements of p, n + j - 1 the chain element p_j;
    // m < p_k < ... < p_1.
    std::vector<ElementSet> lower(n + k);
    for (Element y = 0; y < n; ++y) lower[y] = p.lower(y);
    lower[m] = under;
    for (std::size_t j = k; j >= 1; --j) {
        ElementSet s = under;
        s.set(m);
        for (std::size_t jj = j + 1; jj <= k; ++jj) s.set(n + jj - 1);
        lower[n + j - 1] = s;
    }
    std::vector<Element> label;
    Poset q = detail::topological_poset(lower, label);
    SaturateResult out;
    out.image.assign(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(n));

    std::vector<Element> xs = extra.elements();
    std::sort(xs.rbegin(), xs.rend());  // reverse linear extension
    std::vector<Poset> chain{q};
    std::vector<std::pair<Element, Element>> systems;
    for (std::size_t i = 1; i <= k; ++i) {
        const Element top = label[n + i - 1];
        const Element a = label[xs[i - 1]];
        systems.emplace_back(top, a);
        ElementSet as;
        as.set(a);
        chain.push_back(remove(apply_D(PosetSystem(chain.back(), top, as)), top));
        for (auto& l : label) l = detail::after_removal(l, top);
    }
    if (canonical_key(chain.back()) != canonical_key(p)) throw std::logic_error("saturation does not return to the source");

    detail::SequenceBuilder b(p);
    for (std::size_t i = k; i >= 1; --i) b.strong(origin, chain[i], chain[i - 1], systems[i - 1].first, systems[i - 1].second);
    out.cert = b.take();
    out.cert.target = q;
    return out;
}

/// P strongly embeds into (P - m) + C_{k+1} in k = |P| - |lb(m)| - 1 steps.
inline EmbeddingCertificate max_el_cert(const Poset& p, Element m) {
    ElementSet extra = p.all() - p.lower(m);
    extra.reset(m);
    return saturate_cert(p, m, extra, "max-el").cert;
}

/// From P -> Q strong of length k, P + R -> Q + R + C_k of length 2k.
inline EmbeddingCertificate add_top_cert(const EmbeddingCertificate& inner, const Poset& r) {
    if (inner.kind != CertKind::strong) throw std::invalid_argument("add-top needs a strong certificate");
    detail::SequenceBuilder b(lex_sum(inner.source, r));
    Poset ri = r;
    for (const auto& st : inner.steps) {
        const Poset big = lex_sum(lex_sum(st.after, ri), Poset::chain(1));
        const Element top = big.size() - 1;
        ElementSet ms;
        ms.set(st.m);
        const Poset mid = remove(apply_D(PosetSystem(big, top, ms)), top);
        ElementSet as;
        as.set(st.a);
        const Poset low = remove(apply_D(PosetSystem(mid, st.m, as)), st.m);
        b.strong("add-top", low, mid, st.m, st.a);
        b.strong("add-top", mid, big, top, st.m);
        ri = lex_sum(ri, Poset::chain(1));
    }
    return b.take();
}

enum class LiftMode { below, beside };

/// R + P -> R + Q (below) or R disjoint-union P -> R disjoint-union Q.
inline EmbeddingCertificate lift_cert(const EmbeddingCertificate& c, const Poset& r, LiftMode mode) {
    auto put = [&](const Poset& x) { return mode == LiftMode::below ? lex_sum(r, x) : disjoint_union(r, x); };
    EmbeddingCertificate out{put(c.source), put(c.target), {}, c.kind};
    for (const auto& st : c.steps) {
        if (st.rule != StepRule::strong_d) throw std::invalid_argument("only strong-D steps can be lifted");
        out.steps.push_back({st.rule, st.origin, put(st.before), put(st.after), st.m + r.size(), st.a + r.size()});
    }
    return out;
}

/// C_a disjoint-union C_b strongly embeds into C_{2a+b} in a steps.
inline EmbeddingCertificate two_chains_cert(std::size_t a, std::size_t b) {
    const Poset source = disjoint_union(Poset::chain(a), Poset::chain(b));
    if (a == 0) return identity_cert(source);
    const Poset big = lex_sum(Poset::chain(1), disjoint_union(Poset::chain(a - 1), Poset::chain(b + 1)));
    const Element top = a + b;
    ElementSet zero;
    zero.set(0);
    detail::SequenceBuilder s(source);
    s.strong("two-chains", remove(apply_D(PosetSystem(big, top, zero)), top), big, top, 0);
    s.append(lift_cert(two_chains_cert(a - 1, b + 1), Poset::chain(1), LiftMode::below));
    return s.take();
}

/// A_n strongly embeds into C_{2n-1} in n - 1 steps by merging one point
/// into the growing chain at a time.
inline EmbeddingCertificate antichain_to_chain_cert(std::size_t n) {
    if (n <= 1) return identity_cert(Poset::antichain(n));
    detail::SequenceBuilder s(Poset::antichain(n));
    for (std::size_t j = 0; j + 1 < n; ++j) {
        EmbeddingCertificate c = lift_cert(two_chains_cert(1, 2 * j + 1), Poset::antichain(n - 2 - j), LiftMode::beside);
        for (auto& st : c.steps) st.origin = "antichain-to-chain";
        s.append(c);
    }
    return s.take();
}

/// Strong embedding of P into C_{|P|^2 - 2|rel(P)|}.
inline EmbeddingCertificate chain_univ_cert(const Poset& p) {
    detail::SequenceBuilder s(p);
    Poset cur = p;
    for (;;) {
        const ElementSet f = incomparable_somewhere(cur);
        if (f.empty()) break;
        Element m = 0;
        f.for_each([&](Element x) {
            if (!cur.upper(x).intersects(f)) m = x;
        });
        const ElementSet up = cur.upper(m);
        const Poset p0 = induced(cur, cur.all() - up);  // keeps the label of m
        const EmbeddingCertificate inner = max_el_cert(p0, m);
        const EmbeddingCertificate lifted = add_top_cert(inner, Poset::chain(up.count()));
        s.append(lifted);
        cur = lifted.target;
    }
    return s.take();
}

// ---------------------------------------------------------------------------
// P-diamond

/// The 13-element poset: minima 0..3, middle 4..9, maxima 10..12.
inline Poset p_diamond() {
    // drawing x-coordinates: minima -3,-1,1,3; middle -5..5 step 2; maxima -2,0,2
    auto lo = [](int x) { return static_cast<Element>((x + 3) / 2); };
    auto mid = [](int x) { return static_cast<Element>(4 + (x + 5) / 2); };
    auto hi = [](int x) { return static_cast<Element>(10 + (x + 2) / 2); };
    struct Middle {
        int x, lo1, lo2, hi1, hi2;
    };
    static constexpr Middle middles[] = {
        {5, 3, 1, 2, 0}, {-1, -1, 1, -2, 0}, {1, -3, 1, -2, 2},
        {-3, -3, -1, 2, 0}, {-5, -3, 3, -2, 0}, {3, -1, 3, -2, 2},
    };
    std::vector<Relation> covers;
    for (const auto& c : middles) {
        covers.emplace_back(lo(c.lo1), mid(c.x));
        covers.emplace_back(lo(c.lo2), mid(c.x));
        covers.emplace_back(mid(c.x), hi(c.hi1));
        covers.emplace_back(mid(c.x), hi(c.hi2));
    }
    return Poset::from_relations(13, covers);
}

/// (C3 + C3 + C3) lex-sum A6 lex-sum (C4 + C4 + C4 + C4), disjoint unions inside.
inline Poset p_prime() {
    auto copies = [](std::size_t len, std::size_t count) {
        Poset out;
        for (std::size_t i = 0; i < count; ++i) out = disjoint_union(out, Poset::chain(len));
        return out;
    };
    return lex_sum(lex_sum(copies(3, 3), Poset::antichain(6)), copies(4, 4));
}

/// Weak embedding of P-diamond into C_59.
inline EmbeddingCertificate p_diamond_c59_cert() {
    const Poset pd = p_diamond();
    detail::SequenceBuilder s(pd);
    std::vector<Element> where(pd.size());
    for (Element x = 0; x < pd.size(); ++x) where[x] = x;
    auto track = [&](const std::vector<Element>& image) {
        for (auto& w : where) w = image[w];
    };

    // Saturate each maximum over the non-maximal elements of P-diamond.
    const ElementSet non_max = pd.all() - pd.maximal();
    for (Element top : pd.maximal().elements()) {
        const Poset& cur = s.take_view();
        ElementSet extra;
        non_max.for_each([&](Element x) {
            if (!cur.less(where[x], where[top])) extra.set(where[x]);
        });
        SaturateResult r = saturate_cert(cur, where[top], extra);
        track(r.image);
        s.append(r.cert);
    }
    s.dual("dual");
    {
        const std::size_t n = s.take_view().size();
        for (auto& w : where) w = n - 1 - w;
    }
    // Then each former minimum over the middle layer.
    for (Element bottom : pd.minimal().elements()) {
        const Poset& cur = s.take_view();
        ElementSet extra;
        for (Element x = 4; x < 10; ++x)
            if (!cur.less(where[x], where[bottom])) extra.set(where[x]);
        SaturateResult r = saturate_cert(cur, where[bottom], extra);
        track(r.image);
        s.append(r.cert);
    }
    if (canonical_key(s.take_view()) != canonical_key(p_prime())) throw std::logic_error("intermediate poset has the wrong shape");

    const Poset c3x3 = disjoint_union(disjoint_union(Poset::chain(3), Poset::chain(3)), Poset::chain(3));
    const Poset a6 = Poset::antichain(6);
    {
        const Poset c4x2 = disjoint_union(Poset::chain(4), Poset::chain(4));
        EmbeddingCertificate top = lift_cert(two_chains_cert(4, 4), c4x2, LiftMode::beside);
        top = concat(std::move(top), lift_cert(two_chains_cert(4, 12), Poset::chain(4), LiftMode::beside));
        top = concat(std::move(top), two_chains_cert(4, 20));
        s.append(lift_cert(top, lex_sum(c3x3, a6), LiftMode::below));
    }
    s.dual("dual");
    {
        EmbeddingCertificate bottom = lift_cert(two_chains_cert(3, 3), Poset::chain(3), LiftMode::beside);
        bottom = concat(std::move(bottom), two_chains_cert(3, 9));
        s.append(lift_cert(bottom, lex_sum(Poset::chain(28), a6), LiftMode::below));
    }
    const EmbeddingCertificate middle = lift_cert(antichain_to_chain_cert(6), Poset::chain(28), LiftMode::below);
    s.append(add_top_cert(middle, Poset::chain(15)));
    return s.take();
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyOptions {
    bool numeric = false;
    std::vector<std::uint32_t> primes{2, 3};
    std::size_t max_relations = 12;  ///< numeric checks only on posets this small
    OracleOptions oracle{};
};

struct VerifyReport {
    bool ok = true;
    std::optional<std::size_t> failed_step;  ///< index into steps; steps.size() for the target
    std::string reason;
    std::size_t numeric_checks = 0;

    explicit operator bool() const noexcept { return ok; }
};

inline VerifyReport verify(const EmbeddingCertificate& cert, const VerifyOptions& opt = {}) {
    VerifyReport rep;
    auto fail = [&](std::size_t i, std::string why) {
        rep.ok = false;
        rep.failed_step = i;
        rep.reason = std::move(why);
        return rep;
    };
    const std::size_t len = cert.steps.size();
    CanonicalKey prev = canonical_key(cert.source);
    for (std::size_t i = 0; i < len; ++i) {
        const EmbeddingStep& st = cert.steps[i];
        if (canonical_key(st.before) != prev) return fail(i, "step does not continue from the previous poset");
        const CanonicalKey after = canonical_key(st.after);
        if (st.rule == StepRule::dual) {
            if (cert.kind == CertKind::strong) return fail(i, "dual step in a strong certificate");
            if (canonical_key(dual(st.before)) != after) return fail(i, "after is not the dual of before");
        } else {
            const Poset& q = st.after;
            if (st.m >= q.size() || st.a >= q.size()) return fail(i, "system element out of range");
            if (!q.upper(st.m).empty()) return fail(i, "system top is not maximal");
            if (!q.less(st.a, st.m)) return fail(i, "system element is not below the top");
            ElementSet as;
            as.set(st.a);
            if (canonical_key(remove(apply_D(PosetSystem(q, st.m, as)), st.m)) != prev)
                return fail(i, "before is not isomorphic to D(after) - m");
        }
        prev = after;
    }
    if (canonical_key(cert.target) != prev) return fail(len, "target does not match the last poset");

    if (opt.numeric) {
        // k(P_i) = k(S_{i+1}) for a strong-D step, k(P_i) = k(P_{i+1}) for a dual step.
        for (std::size_t i = 0; i < len; ++i) {
            const EmbeddingStep& st = cert.steps[i];
            if (st.before.relation_count() > opt.max_relations || st.after.relation_count() > opt.max_relations)
                continue;
            for (std::uint32_t q : opt.primes) {
                BigInt lhs, rhs;
                try {
                    lhs = count_k(st.before, q, opt.oracle);
                    if (st.rule == StepRule::dual) {
                        rhs = count_k(st.after, q, opt.oracle);
                    } else {
                        ElementSet as;
                        as.set(st.a);
                        rhs = count_k_system(PosetSystem(st.after, st.m, as), q, opt.oracle);
                    }
                } catch (const BudgetExceeded&) {
                    continue;
                }
                ++rep.numeric_checks;
                if (lhs != rhs)
                    return fail(i, "k at q = " + std::to_string(q) + " is " + lhs.str() + " before but " + rhs.str() +
                                       " for the step system");
            }
        }
    }
    return rep;
}

/// Steps in the opposite order with before and after exchanged.
inline EmbeddingCertificate reversed(const EmbeddingCertificate& c) {
    EmbeddingCertificate out{c.target, c.source, {}, c.kind};
    for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) {
        EmbeddingStep st = *it;
        std::swap(st.before, st.after);
        out.steps.push_back(std::move(st));
    }
    return out;
}

}  // namespace kpat

#endif  // KPAT_EMBEDDING_HPP
