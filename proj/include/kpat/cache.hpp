#ifndef KPAT_CACHE_HPP
#define KPAT_CACHE_HPP

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "serialize.hpp"

namespace kpat {

inline constexpr const char* kEngineVersion = "kpat-engine-1";
inline constexpr const char* kCacheEnv = "KPAT_CACHE_DIR";

struct CacheEntry {
    CanonicalKey key;
    KResult result;
    std::string engine_version;
    std::string timestamp;
};

/// Content-addressed store of KResult JSON files, one file per canonical
/// key. Entries written by another engine version are ignored.
class ResultCache {
   public:
    explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    /// The directory from the flag if given, else from KPAT_CACHE_DIR.
    static std::optional<ResultCache> open(const std::optional<std::string>& flag) {
        if (flag && !flag->empty()) return ResultCache(*flag);
        if (const char* env = std::getenv(kCacheEnv); env && *env) return ResultCache(env);
        return std::nullopt;
    }

    [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

    [[nodiscard]] std::filesystem::path path_for(const CanonicalKey& key) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : key.bytes()) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        std::ostringstream name;
        name << std::hex;
        name.width(16);
        name.fill('0');
        name << h;
        return dir_ / (name.str() + ".json");
    }

    [[nodiscard]] std::optional<CacheEntry> load(const CanonicalKey& key) const {
        std::ifstream in(path_for(key));
        if (!in) return std::nullopt;
        try {
            const Json j = Json::parse(in);
            if (j.at("engine_version") != kEngineVersion || j.at("key") != key.hex()) return std::nullopt;
            CacheEntry e{key, kresult_from_json(j.at("result")), j.at("engine_version"), j.at("timestamp")};
            if (e.result.status == Status::unresolved) return std::nullopt;
            return e;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    /// Stores proven and interpolated results; unresolved ones are skipped.
    bool store(const CanonicalKey& key, const KResult& r) const {
        if (r.status == Status::unresolved) return false;
        std::filesystem::create_directories(dir_);
        Json j;
        j["engine_version"] = kEngineVersion;
        j["key"] = key.hex();
        j["timestamp"] = now_utc();
        j["result"] = to_json(r);
        const auto target = path_for(key);
        std::random_device rd;
        auto tmp = target;
        tmp += ".tmp" + std::to_string(rd());
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) return false;
            out << j.dump(1) << '\n';
            if (!out.flush()) return false;
        }
        std::filesystem::rename(tmp, target);
        return true;
    }

   private:
    static std::string now_utc() {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    std::filesystem::path dir_;
};

}  // namespace kpat

#endif  // KPAT_CACHE_HPP
