#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace liegan {

/// Config error that should surface as CLI exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat "key = value" configuration with dotted section names, '#' comments
/// and last-one-wins overrides. Serializes sorted, so manifests diff cleanly.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    void set_double(const std::string& key, double value);
    /// "key=value" as passed on the command line.
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;

    /// Typed getters record the resolved value back into the config so the
    /// run manifest carries every default that was actually used.
    std::string resolve(const std::string& key, const std::string& fallback);
    double resolve_double(const std::string& key, double fallback);
    long resolve_long(const std::string& key, long fallback);
    int resolve_int(const std::string& key, int fallback);
    bool resolve_bool(const std::string& key, bool fallback);
    std::uint64_t resolve_u64(const std::string& key, std::uint64_t fallback);

    double require_double(const std::string& key) const;
    long require_long(const std::string& key) const;

    /// Sorted "key = value" lines.
    std::string serialize() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// FNV-1a 64-bit digest of a file, as "fnv1a:<hex>"; used in run manifests.
std::string checksum_file(const std::filesystem::path& path);

} // namespace liegan
