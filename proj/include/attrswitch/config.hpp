#pragma once

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "attrswitch/errors.hpp"
#include "attrswitch/vec2.hpp"

namespace attrswitch {

/// Config syntax error with a 1-based source location.
class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, int line, int col)
        : ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + what),
          line(line), col(col) {}
    int line;
    int col;
};

/// Line-oriented key-value configuration with [section] headers and
/// # comments. Duplicate keys within a section are rejected.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };

    [[nodiscard]] static Config parse(const std::string& text) {
        Config cfg;
        std::string section;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string::npos) eol = text.size();
            std::string line = text.substr(pos, eol - pos);
            ++line_no;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto [trimmed, indent] = trim(line);
            if (!trimmed.empty()) {
                if (trimmed.front() == '[') {
                    if (trimmed.back() != ']')
                        throw ParseError("unterminated section header", line_no,
                                         static_cast<int>(indent) + 1);
                    section = trimmed.substr(1, trimmed.size() - 2);
                    if (section.empty())
                        throw ParseError("empty section name", line_no,
                                         static_cast<int>(indent) + 2);
                    cfg.sections_[section];  // existence marks the section as seen
                } else {
                    const std::size_t eq = trimmed.find('=');
                    if (eq == std::string::npos)
                        throw ParseError("expected 'key = value'", line_no,
                                         static_cast<int>(indent) + 1);
                    auto key = trim(trimmed.substr(0, eq)).first;
                    auto value = trim(trimmed.substr(eq + 1)).first;
                    if (key.empty())
                        throw ParseError("missing key before '='", line_no,
                                         static_cast<int>(indent) + 1);
                    if (section.empty())
                        throw ParseError("key outside any [section]", line_no,
                                         static_cast<int>(indent) + 1);
                    auto& sec = cfg.sections_[section];
                    if (sec.count(key))
                        throw ParseError("duplicate key '" + key + "'", line_no,
                                         static_cast<int>(indent) + 1);
                    sec[key] = Entry{value, line_no, false};
                }
            }
            pos = eol + 1;
            if (eol == text.size()) break;
        }
        return cfg;
    }

    [[nodiscard]] bool has_section(const std::string& s) const { return sections_.count(s); }

    [[nodiscard]] bool has(const std::string& sec, const std::string& key) const {
        auto it = sections_.find(sec);
        return it != sections_.end() && it->second.count(key);
    }

    [[nodiscard]] const std::string& require(const std::string& sec,
                                             const std::string& key) const {
        auto it = sections_.find(sec);
        if (it == sections_.end())
            throw ConfigError("missing required section [" + sec + "]");
        auto kt = it->second.find(key);
        if (kt == it->second.end())
            throw ConfigError("[" + sec + "] missing required key: " + key);
        kt->second.consumed = true;
        return kt->second.value;
    }

    [[nodiscard]] std::string get_or(const std::string& sec, const std::string& key,
                                     const std::string& fallback) const {
        if (!has(sec, key)) return fallback;
        return require(sec, key);
    }

    [[nodiscard]] double require_double(const std::string& sec, const std::string& key) const {
        return to_double(require(sec, key), sec, key);
    }

    [[nodiscard]] double double_or(const std::string& sec, const std::string& key,
                                   double fallback) const {
        if (!has(sec, key)) return fallback;
        return to_double(require(sec, key), sec, key);
    }

    [[nodiscard]] int int_or(const std::string& sec, const std::string& key,
                             int fallback) const {
        const double v = double_or(sec, key, fallback);
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError("[" + sec + "] " + key + ": expected an integer");
        return i;
    }

    [[nodiscard]] Vec2 require_vec2(const std::string& sec, const std::string& key) const {
        return to_vec2(require(sec, key), sec, key);
    }

    /// Unknown keys are configuration drift; every key must be consumed.
    void reject_unconsumed() const {
        for (const auto& [sec, entries] : sections_)
            for (const auto& [key, entry] : entries)
                if (!entry.consumed)
                    throw ConfigError("unknown key '" + key + "' in [" + sec + "] (line " +
                                      std::to_string(entry.line) + ")");
    }

    [[nodiscard]] static double to_double(const std::string& s, const std::string& sec,
                                          const std::string& key) {
        const char* begin = s.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0')
            throw ConfigError("[" + sec + "] " + key + ": not a number: '" + s + "'");
        return v;
    }

    [[nodiscard]] static Vec2 to_vec2(const std::string& s, const std::string& sec,
                                      const std::string& key) {
        const std::size_t comma = s.find(',');
        if (comma == std::string::npos)
            throw ConfigError("[" + sec + "] " + key + ": expected 'x, v'");
        return {to_double(trim(s.substr(0, comma)).first, sec, key),
                to_double(trim(s.substr(comma + 1)).first, sec, key)};
    }

private:
    static std::pair<std::string, std::size_t> trim(const std::string& s) {
        std::size_t b = 0, e = s.size();
        while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
        return {s.substr(b, e - b), b};
    }

    std::map<std::string, std::map<std::string, Entry>> sections_;
};

}  // namespace attrswitch
