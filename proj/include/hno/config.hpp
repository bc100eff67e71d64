#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hno {

// Line-based `key = value` experiment configuration. `#` starts a comment,
// blank lines are ignored, keys may not repeat. Commands validate parsed
// files against an explicit allowed-key set, so typos are hard errors.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& source = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Throws ConfigError naming the first key not in the allowed set.
    void restrict_keys(const std::vector<std::string>& allowed) const;

    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
    std::size_t get_size(const std::string& key) const;
    std::size_t get_size_or(const std::string& key, std::size_t fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    // Comma-separated positive integers, e.g. "16" or "12,12".
    std::vector<std::size_t> get_size_list_or(const std::string& key,
                                              const std::vector<std::size_t>& fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace hno
