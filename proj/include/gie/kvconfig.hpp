#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gie {

/// Flat `key = value` configuration text. Lines starting with '#' or ';'
/// are comments; a `[section]` header prefixes following keys with
/// "section.". Every lookup is recorded, including defaults, so the
/// effective configuration can be echoed into result records.
class KvConfig {
public:
    KvConfig() = default;

    static KvConfig parse(std::string_view text, const std::string& source = "<string>");
    static KvConfig load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }

    double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const;
    long get_int(const std::string& key, std::optional<long> fallback = std::nullopt) const;
    bool get_bool(const std::string& key, std::optional<bool> fallback = std::nullopt) const;
    std::string get_string(const std::string& key,
                           std::optional<std::string> fallback = std::nullopt) const;
    /// Comma-separated list of doubles.
    std::vector<double> get_doubles(const std::string& key,
                                    std::optional<std::vector<double>> fallback = std::nullopt) const;

    /// Throws ValidationError naming the first key not in `allowed`.
    void require_known(const std::vector<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    /// Effective values of every key read so far, defaults included.
    const std::map<std::string, std::string>& echo() const { return echo_; }

private:
    std::optional<std::string> lookup(const std::string& key) const;

    std::map<std::string, std::string> entries_;
    mutable std::map<std::string, std::string> echo_;
    std::string source_;
};

} // namespace gie
