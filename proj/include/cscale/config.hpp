#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cscale {

// Minimal INI-style reader: `[section]` headers, `key = value` lines, `#`
// comments. Keys are addressed as "section.key" (bare "key" before the first
// section). Lists are comma separated.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::optional<int> get_optional_int(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
    std::vector<int> get_ints(const std::string& key, std::vector<int> fallback) const;
    std::vector<std::uint64_t> get_u64s(const std::string& key, std::vector<std::uint64_t> fallback) const;

    // Throws ValidationError naming the first key outside `allowed`. Keys in
    // the `meta` section are always accepted.
    void require_known(const std::vector<std::string>& allowed) const;

    // Canonical text: bare keys first, then sections in sorted order.
    std::string dump() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace cscale
