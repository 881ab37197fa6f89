#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gradnorm {

// Flat key = value configuration (a TOML-compatible subset: bare keys,
// scalar values, '#' comments, optional double quotes around strings).
// Duplicate keys are resolved last-wins, which is how CLI overrides are
// applied: appended lines simply shadow earlier ones.
class Config {
public:
    static Config parse_text(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Getters without a default throw unknown_name when the key is absent;
    // all typed getters throw invalid_argument when the value does not parse.
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double dflt) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long dflt) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t dflt) const;
    bool get_bool(const std::string& key, bool dflt) const;
    std::optional<double> maybe_double(const std::string& key) const;

    // Comma-separated list of doubles ("0.1, 0.2, 1e-3").
    std::vector<double> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    // Canonical "key = value" lines, keys sorted.
    std::string serialize() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace gradnorm
