#include "liegan/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace liegan {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw UsageError("config: " + key + " expects a number, got '" + v + "'");
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long l = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return l;
    } catch (const std::exception&) {
        throw UsageError("config: " + key + " expects an integer, got '" + v + "'");
    }
}

} // namespace

KeyValueConfig KeyValueConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open " + path.string());
    KeyValueConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config: missing '=' at " + path.string() + ":" + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw UsageError("config: empty key at " + path.string() + ":" + std::to_string(lineno));
        cfg.values_[key] = trim(t.substr(eq + 1));
    }
    return cfg;
}

void KeyValueConfig::set_double(const std::string& key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    values_[key] = buf;
}

void KeyValueConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("override must look like key=value, got '" + assignment + "'");
    values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string KeyValueConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string KeyValueConfig::require(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("config: missing required key '" + key + "'");
    return it->second;
}

std::string KeyValueConfig::resolve(const std::string& key, const std::string& fallback) {
    const auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    values_[key] = fallback;
    return fallback;
}

double KeyValueConfig::resolve_double(const std::string& key, double fallback) {
    const auto it = values_.find(key);
    if (it != values_.end()) return parse_double(key, it->second);
    set_double(key, fallback);
    return fallback;
}

long KeyValueConfig::resolve_long(const std::string& key, long fallback) {
    const auto it = values_.find(key);
    if (it != values_.end()) return parse_long(key, it->second);
    values_[key] = std::to_string(fallback);
    return fallback;
}

int KeyValueConfig::resolve_int(const std::string& key, int fallback) {
    return static_cast<int>(resolve_long(key, fallback));
}

bool KeyValueConfig::resolve_bool(const std::string& key, bool fallback) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        values_[key] = fallback ? "true" : "false";
        return fallback;
    }
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw UsageError("config: " + key + " expects true/false");
}

std::uint64_t KeyValueConfig::resolve_u64(const std::string& key, std::uint64_t fallback) {
    const auto it = values_.find(key);
    if (it != values_.end()) {
        try {
            return std::stoull(it->second);
        } catch (const std::exception&) {
            throw UsageError("config: " + key + " expects a non-negative integer");
        }
    }
    values_[key] = std::to_string(fallback);
    return fallback;
}

double KeyValueConfig::require_double(const std::string& key) const {
    return parse_double(key, require(key));
}

long KeyValueConfig::require_long(const std::string& key) const { return parse_long(key, require(key)); }

std::string KeyValueConfig::serialize() const {
    std::ostringstream out;
    for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
    return out.str();
}

std::string checksum_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checksum: cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char out[32];
    std::snprintf(out, sizeof out, "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace liegan
