#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "kpat/cache.hpp"
#include "kpat/campaign.hpp"
#include "kpat/embedding.hpp"
#include "kpat/io.hpp"
#include "kpat/serialize.hpp"

namespace {

using namespace kpat;

enum Exit { kOk = 0, kParse = 1, kUnresolved = 2, kBudget = 3, kVerify = 4 };

struct Common {
    bool json = false;
    unsigned threads = std::max(1U, std::thread::hardware_concurrency());
    std::uint64_t budget = OracleOptions{}.budget;
    std::optional<std::string> cache;

    [[nodiscard]] OracleOptions oracle() const { return {budget, threads}; }
    [[nodiscard]] EngineOptions engine(bool trace) const {
        EngineOptions e;
        e.threads = threads;
        e.trace = trace;
        e.oracle = oracle();
        return e;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_flag("--json", c.json, "Print machine-readable JSON");
    cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--budget", c.budget, "Oracle enumeration budget (group elements)")->check(CLI::PositiveNumber);
}

Poset resolve(const std::string& spec) {
    if (spec == "p-diamond") return p_diamond();
    if (spec == "p-prime") return p_prime();
    return poset_from_spec(spec);
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string elapsed(std::chrono::steady_clock::time_point t0) {
    std::ostringstream os;
    os.precision(3);
    os << std::fixed << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s";
    return os.str();
}

// ---------------------------------------------------------------------------

struct ComputeArgs {
    std::string spec;
    bool trace = false;
    std::optional<std::string> trace_out;
};

int cmd_compute(const ComputeArgs& a, const Common& c) {
    const Poset p = resolve(a.spec);
    const CanonicalKey key = canonical_key(p);
    auto cache = ResultCache::open(c.cache);
    std::optional<KResult> result;
    std::string cache_state = cache ? "miss" : "off";
    if (cache && !a.trace && !a.trace_out) {
        if (auto e = cache->load(key)) {
            result = std::move(e->result);
            cache_state = "hit";
        }
    }
    Engine engine(c.engine(a.trace || a.trace_out));
    const auto t0 = std::chrono::steady_clock::now();
    if (!result) {
        result = engine.compute(p);
        if (cache && cache->store(key, *result)) cache_state = "stored";
    }
    const KResult& r = *result;
    if (a.trace_out && r.trace) {
        std::ofstream out(*a.trace_out);
        out << to_json(*r.trace).dump(1) << '\n';
    }
    if (c.json) {
        Json j;
        j["input"] = a.spec;
        j["n"] = p.size();
        j["relations"] = p.relation_count();
        j["key"] = key.hex();
        j["cache"] = cache_state;
        j["result"] = to_json(r);
        if (!a.trace) j["result"].erase("trace");
        j["trace_file"] = a.trace_out ? Json(*a.trace_out) : Json();
        j["stats"] = {{"expansions", engine.stats().expansions.load()},
                      {"memo_hits", engine.stats().memo_hits.load()},
                      {"systems", engine.stats().systems.load()},
                      {"fallbacks", engine.stats().fallbacks.load()}};
        print(j);
    } else if (r.poly) {
        std::cout << r.poly->pretty() << " [" << to_string(r.status) << "]\n";
        std::cout << "q-basis: " << Poly::render_terms(r.poly->to_q_basis(), 'q', true) << '\n';
        std::cout << "time: " << elapsed(t0) << ", cache: " << cache_state << '\n';
        if (a.trace_out) std::cout << "trace: " << *a.trace_out << '\n';
    } else {
        std::cout << "unresolved; partial sum " << r.partial.pretty() << '\n';
        for (const auto& s : r.residual) std::cout << "  residual system " << to_json(s).dump() << '\n';
        for (const auto& f : r.fallbacks)
            if (f.status == Status::unresolved) std::cout << "  fallback: " << f.reason << '\n';
    }
    return r.status == Status::unresolved ? kUnresolved : kOk;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
    std::string spec;
    std::uint32_t q = 2;
    bool fiber = false;
    std::size_t m = 0;
    std::vector<std::size_t> antichain;
};

int cmd_oracle(const OracleArgs& a, const Common& c) {
    const Poset p = resolve(a.spec);
    const auto t0 = std::chrono::steady_clock::now();
    Json j{{"input", a.spec}, {"q", a.q}};
    try {
        BigInt k;
        if (a.fiber) {
            if (a.m < 1 || a.m > p.size()) throw ParseError(0, "--m must name an element 1.." + std::to_string(p.size()));
            ElementSet as;
            for (std::size_t x : a.antichain) {
                if (x < 1 || x > p.size()) throw ParseError(0, "antichain element out of range");
                as.set(x - 1);
            }
            PosetSystem s;
            try {
                s = PosetSystem(p, a.m - 1, as);
            } catch (const std::invalid_argument& e) {
                throw ParseError(0, e.what());
            }
            k = count_k_system(s, a.q, c.oracle());
            j["system"] = to_json(s);
        } else {
            k = count_k(p, a.q, c.oracle());
        }
        j["count"] = k.str();
        if (c.json) print(j);
        else std::cout << k << '\n';
        if (!c.json) std::cerr << "time: " << elapsed(t0) << '\n';
        return kOk;
    } catch (const BudgetExceeded& e) {
        j["error"] = "budget";
        j["required"] = e.required().str();
        j["budget"] = e.budget();
        if (c.json) print(j);
        else std::cerr << "budget exceeded: requires " << e.required() << " group elements, budget " << e.budget() << '\n';
        return kBudget;
    }
}

// ---------------------------------------------------------------------------

int cmd_verify_tables(const TablesOptions& base, const Common& c) {
    TablesOptions opt = base;
    opt.engine = c.engine(false);
    const TablesReport rep = verify_tables(opt);
    if (c.json) {
        Json checks = Json::array();
        for (const auto& ch : rep.checks)
            checks.push_back({{"check", ch.check}, {"n", ch.n}, {"pass", ch.pass}, {"detail", ch.detail}});
        Json exc = Json::array();
        for (const auto& [n, k] : rep.exceptional) exc.push_back({{"n", n}, {"fallback_systems", k}});
        print({{"ok", rep.ok()}, {"checks", checks}, {"exceptional", exc}});
    } else {
        for (const auto& ch : rep.checks)
            std::cout << (ch.pass ? "pass " : "FAIL ") << ch.check << " n=" << ch.n << "  " << ch.detail << '\n';
        for (const auto& [n, k] : rep.exceptional) std::cout << "exceptional systems n=" << n << ": " << k << '\n';
    }
    return rep.ok() ? kOk : kVerify;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    std::size_t max = 6;
    std::size_t cap = 6;
    std::optional<std::string> out;
};

int cmd_sweep(const SweepArgs& a, const Common& c) {
    if (a.max > a.cap) {
        std::cerr << "--max " << a.max << " exceeds the cap " << a.cap << " (raise it with --cap)\n";
        return kParse;
    }
    const SweepReport rep = sweep(a.max, c.engine(false));
    if (a.out) {
        std::ofstream out(*a.out);
        for (const auto& e : rep.entries)
            out << format_poset(e.poset) << "# k = " << (e.result.poly ? e.result.poly->to_string() : "?") << " ["
                << to_string(e.result.status) << "]\n\n";
    }
    std::size_t failed = 0;
    for (const auto& e : rep.entries) failed += !e.pass;
    if (c.json) {
        Json counts = Json::array(), failures = Json::array();
        for (const auto& [k, n] : rep.counts) counts.push_back({{"size", k}, {"posets", n}});
        for (const auto& e : rep.entries)
            if (!e.pass) failures.push_back({{"poset", to_json(e.poset)}, {"reason", e.detail}});
        print({{"ok", rep.ok()}, {"counts", counts}, {"fallbacks", rep.fallbacks}, {"failures", failures}});
    } else {
        for (const auto& [k, n] : rep.counts) std::cout << "size " << k << ": " << n << " posets\n";
        for (const auto& e : rep.entries)
            if (!e.pass) std::cout << "FAIL " << to_json(e.poset).dump() << ": " << e.detail << '\n';
        std::cout << rep.entries.size() - failed << "/" << rep.entries.size() << " pass, " << rep.fallbacks
                  << " fallbacks\n";
    }
    return rep.ok() ? kOk : kVerify;
}

// ---------------------------------------------------------------------------

struct EmbedArgs {
    std::string spec;
    std::optional<std::string> certificate;
    std::optional<std::string> out;
    bool verify = false;
    bool numeric = false;
};

int cmd_embed(const EmbedArgs& a, const Common& c) {
    EmbeddingCertificate cert;
    if (a.certificate) {
        std::ifstream in(*a.certificate);
        if (!in) throw ParseError(0, "cannot open " + *a.certificate);
        try {
            cert = certificate_from_json(Json::parse(in));
        } catch (const Json::exception& e) {
            throw ParseError(0, e.what());
        }
    } else if (a.spec == "p-diamond") {
        cert = p_diamond_c59_cert();
    } else {
        cert = chain_univ_cert(resolve(a.spec));
    }
    if (a.out) {
        std::ofstream out(*a.out);
        out << to_json(cert).dump(1) << '\n';
    }
    std::optional<VerifyReport> rep;
    if (a.verify || a.numeric || a.certificate) {
        VerifyOptions vo;
        vo.numeric = a.numeric;
        vo.oracle = c.oracle();
        rep = verify(cert, vo);
    }
    if (c.json) {
        Json j{{"source", to_json(cert.source)},
               {"target_size", cert.target.size()},
               {"target_is_chain", is_chain(cert.target)},
               {"length", cert.length()},
               {"kind", to_string(cert.kind)},
               {"certificate_file", a.out ? Json(*a.out) : Json()}};
        j["verification"] = rep ? to_json(*rep) : Json();
        if (!a.out) j["certificate"] = to_json(cert);
        print(j);
    } else {
        std::cout << to_string(cert.kind) << " embedding of a " << cert.source.size() << "-element poset into "
                  << (is_chain(cert.target) ? "C" : "a poset of size ") << cert.target.size() << " in "
                  << cert.length() << " steps\n";
        if (a.out) std::cout << "certificate: " << *a.out << '\n';
        if (rep) {
            if (rep->ok) std::cout << "verified (" << rep->numeric_checks << " numeric checks)\n";
            else std::cout << "verification failed at step " << *rep->failed_step << ": " << rep->reason << '\n';
        }
    }
    return rep && !rep->ok ? kVerify : kOk;
}

// ---------------------------------------------------------------------------

int cmd_selftest(const Common& c) {
    struct Item {
        std::string name;
        bool pass;
    };
    std::vector<Item> items;
    const auto eopt = c.engine(false);
    for (std::size_t n = 1; n <= 6; ++n) {
        const KResult r = compute_k(Poset::chain(n), eopt);
        items.push_back({"chain " + std::to_string(n) + " polynomial",
                         r.proven() && *r.poly == fixtures::chain_polynomial(n)});
    }
    items.push_back({"oracle chain 5 at q=2", count_k(Poset::chain(5), 2, c.oracle()) == 61});
    items.push_back({"oracle chain 4 at q=3", count_k(Poset::chain(4), 3, c.oracle()) == 57});
    items.push_back({"poset counts up to 5", posets_of_size(5).size() == 63});
    items.push_back({"p-diamond certificate", verify(p_diamond_c59_cert()).ok});
    items.push_back({"two chains numeric", verify(two_chains_cert(2, 2), {.numeric = true}).ok});
    bool ok = true;
    Json arr = Json::array();
    for (const auto& it : items) {
        ok = ok && it.pass;
        if (c.json) arr.push_back({{"check", it.name}, {"pass", it.pass}});
        else std::cout << (it.pass ? "pass " : "FAIL ") << it.name << '\n';
    }
    if (c.json) print({{"ok", ok}, {"checks", arr}});
    return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conjugacy class polynomials of pattern groups"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--cache", common.cache, "Result cache directory (overrides " + std::string(kCacheEnv) + ")");

    ComputeArgs ca;
    auto* compute = app.add_subcommand("compute", "k(P) as a polynomial in t = q - 1");
    compute->add_option("poset", ca.spec, "chain N | antichain N | file PATH | p-diamond | PATH")->required();
    compute->add_flag("--trace", ca.trace, "Include the reduction tree");
    compute->add_option("--trace-out", ca.trace_out, "Write the reduction tree to a file");
    add_common(compute, common);
    compute->add_option("--cache", common.cache, "Result cache directory");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "Exact class count at a prime q by the Burnside sum");
    oracle->add_option("poset", oa.spec, "Poset spec")->required();
    oracle->add_option("-q,--q", oa.q, "Field order (prime)")->check([](const std::string& s) {
        try {
            return is_prime(std::stoull(s)) ? std::string() : s + " is not prime";
        } catch (const std::exception&) {
            return s + " is not a number";
        }
    });
    oracle->add_flag("--fiber", oa.fiber, "Count k of the poset system (P, m, A)");
    oracle->add_option("--m", oa.m, "System top (1-based)");
    oracle->add_option("--antichain", oa.antichain, "System antichain (1-based)")->delimiter(',');
    add_common(oracle, common);

    TablesOptions ta;
    auto* tables = app.add_subcommand("verify-tables", "Check chains against the reference tables");
    tables->add_option("--max-chain", ta.max_chain, "Largest chain for the polynomial checks");
    tables->add_option("--max-q2", ta.max_q2, "Largest chain for the oracle at q = 2");
    tables->add_option("--max-q3", ta.max_q3, "Largest chain for the oracle at q = 3");
    add_common(tables, common);

    SweepArgs sa;
    auto* sweep_cmd = app.add_subcommand("sweep", "All posets up to a size against the oracle");
    sweep_cmd->add_option("--max", sa.max, "Largest poset size");
    sweep_cmd->add_option("--cap", sa.cap, "Refuse sizes above this");
    sweep_cmd->add_option("--out", sa.out, "Results file");
    add_common(sweep_cmd, common);

    EmbedArgs ea;
    auto* embed = app.add_subcommand("embed", "Embedding certificate into a chain");
    auto* spec_opt = embed->add_option("poset", ea.spec, "Poset spec or p-diamond");
    embed->add_option("--certificate", ea.certificate, "Verify an existing certificate file")->excludes(spec_opt);
    embed->add_option("--out", ea.out, "Write the certificate JSON");
    embed->add_flag("--verify", ea.verify, "Re-check every step");
    embed->add_flag("--numeric", ea.numeric, "Add k-conservation checks within the budget");
    add_common(embed, common);

    auto* selftest = app.add_subcommand("selftest", "Quick end-to-end checks");
    add_common(selftest, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    try {
        if (*compute) return cmd_compute(ca, common);
        if (*oracle) return cmd_oracle(oa, common);
        if (*tables) return cmd_verify_tables(ta, common);
        if (*sweep_cmd) return cmd_sweep(sa, common);
        if (*embed) {
            if (ea.spec.empty() && !ea.certificate) throw ParseError(0, "embed needs a poset or --certificate");
            return cmd_embed(ea, common);
        }
        if (*selftest) return cmd_selftest(common);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const SchemaError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const BudgetExceeded& e) {
        std::cerr << e.what() << '\n';
        return kBudget;
    }
    return kOk;
}
