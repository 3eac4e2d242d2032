#ifndef KPAT_IO_HPP
#define KPAT_IO_HPP

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poset.hpp"

namespace kpat {

/// Malformed poset text; line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

   private:
    std::size_t line_;
};

/// Reads the text format: the first non-comment line is n, every further
/// line "i j" (1-based) means i < j. Lines starting with '#' and blank
/// lines are skipped; the relation is closed transitively.
inline Poset parse_poset(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> n;
    std::vector<Relation> pairs;
    auto fields = [](const std::string& s) {
        std::istringstream ss(s);
        std::vector<std::string> out;
        for (std::string w; ss >> w;) out.push_back(w);
        return out;
    };
    auto number = [&](const std::string& w) -> long long {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(w, &used);
        } catch (const std::exception&) {
            throw ParseError(lineno, "expected an integer, got '" + w + "'");
        }
        if (used != w.size()) throw ParseError(lineno, "expected an integer, got '" + w + "'");
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto w = fields(line);
        if (!n) {
            if (w.size() != 1) throw ParseError(lineno, "first line must hold the element count");
            const long long v = number(w[0]);
            if (v < 0 || v > static_cast<long long>(kMaxElements))
                throw ParseError(lineno, "element count must be between 0 and " + std::to_string(kMaxElements));
            n = static_cast<std::size_t>(v);
            continue;
        }
        if (w.size() != 2) throw ParseError(lineno, "expected a pair \"i j\"");
        const long long i = number(w[0]), j = number(w[1]);
        if (i < 1 || j < 1 || i > static_cast<long long>(*n) || j > static_cast<long long>(*n))
            throw ParseError(lineno, "element out of range 1.." + std::to_string(*n));
        if (i >= j) throw ParseError(lineno, "pair " + w[0] + " " + w[1] + " must have i < j");
        pairs.emplace_back(static_cast<Element>(i - 1), static_cast<Element>(j - 1));
    }
    if (!n) throw ParseError(lineno ? lineno : 1, "missing element count");
    return transitive_closure(*n, pairs);
}

inline Poset parse_poset(const std::string& text) {
    std::istringstream in(text);
    return parse_poset(in);
}

inline Poset read_poset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path);
    return parse_poset(in);
}

/// Text form listing the cover pairs.
inline std::string format_poset(const Poset& p) {
    std::ostringstream os;
    os << p.size() << '\n';
    for (const auto& [i, j] : p.covers()) os << i + 1 << ' ' << j + 1 << '\n';
    return os.str();
}

/// Inline specs "chain N", "antichain N", "file PATH", or a bare path.
inline Poset poset_from_spec(const std::string& spec) {
    std::istringstream ss(spec);
    std::string kind, arg, extra;
    ss >> kind >> arg;
    if (ss >> extra) throw ParseError(0, "unrecognised poset spec '" + spec + "'");
    if (kind == "chain" || kind == "antichain") {
        std::size_t used = 0;
        long long n = -1;
        try {
            n = std::stoll(arg, &used);
        } catch (const std::exception&) {
        }
        if (used != arg.size() || n < 0 || n > static_cast<long long>(kMaxElements))
            throw ParseError(0, "bad size in poset spec '" + spec + "'");
        return kind == "chain" ? Poset::chain(static_cast<std::size_t>(n))
                               : Poset::antichain(static_cast<std::size_t>(n));
    }
    if (kind == "file" && !arg.empty()) return read_poset_file(arg);
    if (!kind.empty() && arg.empty()) return read_poset_file(kind);
    throw ParseError(0, "unrecognised poset spec '" + spec + "'");
}

}  // namespace kpat

#endif  // KPAT_IO_HPP
