#ifndef KPAT_SERIALIZE_HPP
#define KPAT_SERIALIZE_HPP

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "engine.hpp"

namespace kpat {

using Json = nlohmann::ordered_json;

/// Malformed JSON document for one of the kpat schemas.
class SchemaError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> big_strings(const std::vector<BigInt>& cs) {
    std::vector<std::string> out;
    out.reserve(cs.size());
    for (const auto& c : cs) out.push_back(c.str());
    return out;
}

inline BigInt big_from(const Json& j) {
    try {
        if (j.is_string()) return BigInt(j.get<std::string>());
        if (j.is_number_integer()) return BigInt(j.get<long long>());
    } catch (const std::exception&) {
    }
    throw SchemaError("expected an integer, got " + j.dump());
}

inline BigRational rational_from(const Json& j) {
    if (!j.is_string()) return BigRational(big_from(j));
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return BigRational(big_from(j));
    const BigInt den = big_from(Json(s.substr(slash + 1)));
    if (den == 0) throw SchemaError("zero denominator in " + s);
    return BigRational(big_from(Json(s.substr(0, slash))), den);
}

inline std::string rational_string(const BigRational& r) {
    const BigInt num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
    return den == 1 ? num.str() : num.str() + "/" + den.str();
}

inline const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw SchemaError(std::string("missing field '") + name + "'");
    return j.at(name);
}

inline Element one_based(const Json& j, std::size_t n) {
    if (!j.is_number_integer()) throw SchemaError("expected an element label, got " + j.dump());
    const long long v = j.get<long long>();
    if (v < 1 || v > static_cast<long long>(n)) throw SchemaError("element label " + j.dump() + " out of range");
    return static_cast<Element>(v - 1);
}

inline std::vector<std::size_t> one_based_list(const ElementSet& s) {
    std::vector<std::size_t> out;
    for (Element x : s.elements()) out.push_back(x + 1);
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Polynomials

inline Json to_json(const Poly& p) {
    Json j;
    j["basis"] = "t";
    j["coeffs"] = detail::big_strings(p.coeffs());
    j["q_coeffs"] = detail::big_strings(p.to_q_basis());
    j["text"] = p.to_string();
    return j;
}

inline Poly poly_from_json(const Json& j) {
    const Json& cs = detail::field(j, "coeffs");
    if (!cs.is_array()) throw SchemaError("coeffs must be an array");
    std::vector<BigInt> out;
    for (const auto& c : cs) out.push_back(detail::big_from(c));
    Poly p(std::move(out));
    if (j.contains("basis") && j.at("basis") == "q") return Poly::from_q_basis(p.coeffs());
    return p;
}

// ---------------------------------------------------------------------------
// Posets and systems (labels are 1-based)

inline Json to_json(const Poset& p) {
    Json covers = Json::array();
    for (const auto& [i, j] : p.covers()) covers.push_back({i + 1, j + 1});
    return {{"n", p.size()}, {"covers", covers}};
}

inline Poset poset_from_json(const Json& j) {
    const Json& nj = detail::field(j, "n");
    if (!nj.is_number_unsigned() || nj.get<std::size_t>() > kMaxElements) throw SchemaError("bad element count");
    const std::size_t n = nj.get<std::size_t>();
    std::vector<Relation> pairs;
    for (const auto& c : detail::field(j, "covers")) {
        if (!c.is_array() || c.size() != 2) throw SchemaError("a cover must be a pair");
        const Element a = detail::one_based(c[0], n), b = detail::one_based(c[1], n);
        if (a >= b) throw SchemaError("cover " + c.dump() + " must increase");
        pairs.emplace_back(a, b);
    }
    return transitive_closure(n, pairs);
}

inline Json to_json(const PosetSystem& s) {
    return {{"poset", to_json(s.poset)}, {"m", s.top + 1}, {"antichain", detail::one_based_list(s.antichain)}};
}

inline PosetSystem system_from_json(const Json& j) {
    Poset p = poset_from_json(detail::field(j, "poset"));
    const Element m = detail::one_based(detail::field(j, "m"), p.size());
    ElementSet a;
    for (const auto& x : detail::field(j, "antichain")) a.set(detail::one_based(x, p.size()));
    try {
        return PosetSystem(std::move(p), m, a);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
}

// ---------------------------------------------------------------------------
// Engine results

inline Json to_json(const SamplePoint& s) { return {{"q", s.q.str()}, {"count", s.count.str()}}; }

inline SamplePoint sample_from_json(const Json& j) {
    return {detail::big_from(detail::field(j, "q")), detail::big_from(detail::field(j, "count"))};
}

inline Json to_json(const Interpolation& f) {
    Json j;
    j["poly"] = f.poly ? to_json(*f.poly) : Json();
    Json res = Json::array();
    for (const auto& r : f.residuals) res.push_back(detail::rational_string(r));
    j["residuals"] = res;
    j["reason"] = f.reason;
    Json fit = Json::array(), val = Json::array();
    for (const auto& s : f.fit_points) fit.push_back(to_json(s));
    for (const auto& s : f.validation_points) val.push_back(to_json(s));
    j["fit_points"] = fit;
    j["validation_points"] = val;
    return j;
}

inline Interpolation interpolation_from_json(const Json& j) {
    Interpolation f;
    if (!detail::field(j, "poly").is_null()) f.poly = poly_from_json(j.at("poly"));
    for (const auto& r : detail::field(j, "residuals")) f.residuals.push_back(detail::rational_from(r));
    f.reason = detail::field(j, "reason").get<std::string>();
    for (const auto& s : detail::field(j, "fit_points")) f.fit_points.push_back(sample_from_json(s));
    for (const auto& s : detail::field(j, "validation_points")) f.validation_points.push_back(sample_from_json(s));
    return f;
}

inline Status status_from_string(const std::string& s) {
    if (s == "proven") return Status::proven;
    if (s == "interpolated") return Status::interpolated;
    if (s == "unresolved") return Status::unresolved;
    throw SchemaError("unknown status '" + s + "'");
}

inline Json to_json(const FallbackRecord& r) {
    Json j;
    j["system"] = to_json(r.system);
    j["degree_bound"] = r.degree_bound;
    Json samples = Json::array();
    for (const auto& s : r.samples) samples.push_back(to_json(s));
    j["samples"] = samples;
    j["fit"] = to_json(r.fit);
    j["odd_fit"] = r.odd_fit ? to_json(*r.odd_fit) : Json();
    j["even_residual"] = r.even_residual ? Json(detail::rational_string(*r.even_residual)) : Json();
    j["status"] = to_string(r.status);
    j["reason"] = r.reason;
    return j;
}

inline FallbackRecord fallback_from_json(const Json& j) {
    FallbackRecord r;
    r.system = system_from_json(detail::field(j, "system"));
    r.degree_bound = detail::field(j, "degree_bound").get<std::size_t>();
    for (const auto& s : detail::field(j, "samples")) r.samples.push_back(sample_from_json(s));
    r.fit = interpolation_from_json(detail::field(j, "fit"));
    if (!detail::field(j, "odd_fit").is_null()) r.odd_fit = interpolation_from_json(j.at("odd_fit"));
    if (!detail::field(j, "even_residual").is_null()) r.even_residual = detail::rational_from(j.at("even_residual"));
    r.status = status_from_string(detail::field(j, "status").get<std::string>());
    r.reason = detail::field(j, "reason").get<std::string>();
    return r;
}

inline Json to_json(const TraceNode& n) {
    Json j;
    j["poset_key"] = n.poset_key;
    j["m"] = n.m ? Json(*n.m + 1) : Json();
    if (n.antichain) {
        Json a = Json::array();
        for (Element x : *n.antichain) a.push_back(x + 1);
        j["antichain"] = a;
    } else {
        j["antichain"] = Json();
    }
    j["rule"] = n.rule;
    j["status"] = to_string(n.status);
    j["poly"] = n.poly ? to_json(*n.poly) : Json();
    Json children = Json::array();
    for (const auto& c : n.children) children.push_back(to_json(*c));
    j["children"] = children;
    return j;
}

inline TracePtr trace_from_json(const Json& j) {
    auto n = std::make_shared<TraceNode>();
    n->poset_key = detail::field(j, "poset_key").get<std::string>();
    if (!detail::field(j, "m").is_null()) n->m = j.at("m").get<Element>() - 1;
    if (!detail::field(j, "antichain").is_null()) {
        std::vector<Element> a;
        for (const auto& x : j.at("antichain")) a.push_back(x.get<Element>() - 1);
        n->antichain = std::move(a);
    }
    n->rule = detail::field(j, "rule").get<std::string>();
    n->status = status_from_string(detail::field(j, "status").get<std::string>());
    if (!detail::field(j, "poly").is_null()) n->poly = poly_from_json(j.at("poly"));
    for (const auto& c : detail::field(j, "children")) n->children.push_back(trace_from_json(c));
    return n;
}

inline Json to_json(const KResult& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["poly"] = r.poly ? to_json(*r.poly) : Json();
    j["partial"] = to_json(r.partial);
    Json residual = Json::array();
    for (const auto& s : r.residual) residual.push_back(to_json(s));
    j["residual"] = residual;
    Json fallbacks = Json::array();
    for (const auto& f : r.fallbacks) fallbacks.push_back(to_json(f));
    j["fallbacks"] = fallbacks;
    j["trace"] = r.trace ? to_json(*r.trace) : Json();
    return j;
}

inline KResult kresult_from_json(const Json& j) {
    KResult r;
    r.status = status_from_string(detail::field(j, "status").get<std::string>());
    if (!detail::field(j, "poly").is_null()) r.poly = poly_from_json(j.at("poly"));
    r.partial = poly_from_json(detail::field(j, "partial"));
    for (const auto& s : detail::field(j, "residual")) r.residual.push_back(system_from_json(s));
    for (const auto& f : detail::field(j, "fallbacks")) r.fallbacks.push_back(fallback_from_json(f));
    if (!detail::field(j, "trace").is_null()) r.trace = trace_from_json(j.at("trace"));
    return r;
}

// ---------------------------------------------------------------------------
// Embedding certificates

inline Json to_json(const EmbeddingCertificate& c) {
    Json steps = Json::array();
    for (const auto& s : c.steps) {
        Json st;
        st["rule"] = to_string(s.rule);
        st["origin"] = s.origin;
        st["before"] = to_json(s.before);
        st["after"] = to_json(s.after);
        if (s.rule == StepRule::strong_d) {
            st["m"] = s.m + 1;
            st["a"] = s.a + 1;
        }
        steps.push_back(std::move(st));
    }
    Json j;
    j["kind"] = to_string(c.kind);
    j["length"] = c.length();
    j["source"] = to_json(c.source);
    j["target"] = to_json(c.target);
    j["steps"] = steps;
    return j;
}

inline EmbeddingCertificate certificate_from_json(const Json& j) {
    EmbeddingCertificate c;
    const std::string kind = detail::field(j, "kind").get<std::string>();
    if (kind != "strong" && kind != "weak") throw SchemaError("unknown certificate kind '" + kind + "'");
    c.kind = kind == "strong" ? CertKind::strong : CertKind::weak;
    c.source = poset_from_json(detail::field(j, "source"));
    c.target = poset_from_json(detail::field(j, "target"));
    for (const auto& st : detail::field(j, "steps")) {
        EmbeddingStep s;
        const std::string rule = detail::field(st, "rule").get<std::string>();
        if (rule == "strong-D") {
            s.rule = StepRule::strong_d;
        } else if (rule == "dual") {
            s.rule = StepRule::dual;
        } else {
            throw SchemaError("unknown step rule '" + rule + "'");
        }
        s.origin = st.value("origin", "");
        s.before = poset_from_json(detail::field(st, "before"));
        s.after = poset_from_json(detail::field(st, "after"));
        if (s.rule == StepRule::strong_d) {
            s.m = detail::one_based(detail::field(st, "m"), s.after.size());
            s.a = detail::one_based(detail::field(st, "a"), s.after.size());
        }
        c.steps.push_back(std::move(s));
    }
    return c;
}

inline Json to_json(const VerifyReport& r) {
    Json j;
    j["ok"] = r.ok;
    j["failed_step"] = r.failed_step ? Json(*r.failed_step) : Json();
    j["reason"] = r.reason;
    j["numeric_checks"] = r.numeric_checks;
    return j;
}

}  // namespace kpat

#endif  // KPAT_SERIALIZE_HPP
