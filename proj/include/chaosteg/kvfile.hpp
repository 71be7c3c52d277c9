#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "chaosteg/errors.hpp"

// Line-based `name=value` text format shared by key files and stego
// manifests. `#` starts a comment, blank lines are ignored, duplicate
// and unknown keys are rejected by the typed readers.

namespace chaosteg {

// Lowercase hexadecimal floating-point literal, bit-exact round-trip.
inline std::string format_hex_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

inline double parse_hex_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError("not a valid real literal: '" + text + "'");
    return v;
}

inline long long parse_integer(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ParseError("not a valid integer: '" + text + "'");
    return v;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace detail

class KvReader {
public:
    static KvReader from_stream(std::istream& in) {
        KvReader r;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            line = detail::trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError("line " + std::to_string(lineno) + ": expected name=value");
            const std::string name = detail::trim(line.substr(0, eq));
            const std::string value = detail::trim(line.substr(eq + 1));
            if (name.empty())
                throw ParseError("line " + std::to_string(lineno) + ": empty key name");
            if (!r.values_.emplace(name, value).second)
                throw ParseError("duplicate key: " + name);
        }
        return r;
    }

    static KvReader from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw IoError("cannot open file: " + path);
        return from_stream(in);
    }

    double real(const std::string& name) { return parse_hex_double(take(name)); }

    long long integer(const std::string& name) { return parse_integer(take(name)); }

    // Every key must have been consumed by a typed accessor.
    void finish() const {
        for (const auto& [name, value] : values_)
            if (!consumed_.count(name))
                throw ParseError("unknown key: " + name);
    }

private:
    std::string take(const std::string& name) {
        const auto it = values_.find(name);
        if (it == values_.end())
            throw ParseError("missing key: " + name);
        consumed_.insert(name);
        return it->second;
    }

    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

class KvWriter {
public:
    void comment(const std::string& text) { out_ += "# " + text + "\n"; }
    void real(const std::string& name, double v) {
        out_ += name + "=" + format_hex_double(v) + "\n";
    }
    void integer(const std::string& name, long long v) {
        out_ += name + "=" + std::to_string(v) + "\n";
    }
    const std::string& text() const noexcept { return out_; }

    void write_file(const std::string& path) const {
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw IoError("cannot open file for writing: " + path);
        out << out_;
        if (!out.flush())
            throw IoError("write failed: " + path);
    }

private:
    std::string out_;
};

} // namespace chaosteg
