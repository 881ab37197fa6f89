#include "gradnorm/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gradnorm/error.hpp"

namespace gradnorm {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    }
    return true;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& what,
                            const std::string& raw) {
    throw Error(ErrorCode::invalid_argument,
                "config key '" + key + "': expected " + what + ", got '" + raw + "'");
}

double parse_double(const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) bad_value(key, "a number", raw);
    return x;
}

}  // namespace

Config Config::parse_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::invalid_argument,
                        "config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        if (!valid_key(key)) {
            throw Error(ErrorCode::invalid_argument,
                        "config line " + std::to_string(lineno) + ": bad key '" + key + "'");
        }
        std::string value = trim(stripped.substr(eq + 1));
        if (!value.empty() && value.front() == '"') {
            const std::size_t close = value.find('"', 1);
            if (close == std::string::npos) {
                throw Error(ErrorCode::invalid_argument,
                            "config line " + std::to_string(lineno) + ": unterminated string");
            }
            value = value.substr(1, close - 1);
        } else {
            // Trailing comment on an unquoted value.
            const std::size_t hash = value.find('#');
            if (hash != std::string::npos) value = trim(value.substr(0, hash));
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

std::string Config::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw Error(ErrorCode::unknown_name, "config is missing key '" + key + "'");
    }
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& dflt) const {
    const auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
}

double Config::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double dflt) const {
    const auto it = values_.find(key);
    return it == values_.end() ? dflt : parse_double(key, it->second);
}

long long Config::get_int(const std::string& key) const {
    const std::string raw = get_string(key);
    const std::string v = trim(raw);
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) bad_value(key, "an integer", raw);
    return x;
}

long long Config::get_int(const std::string& key, long long dflt) const {
    return has(key) ? get_int(key) : dflt;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t dflt) const {
    if (!has(key)) return dflt;
    const std::string raw = get_string(key);
    const std::string v = trim(raw);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || v[0] == '-' || end != v.c_str() + v.size()) {
        bad_value(key, "a nonnegative integer", raw);
    }
    return x;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    const std::string v = get_string(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, "true or false", v);
}

std::optional<double> Config::maybe_double(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key);
}

std::vector<double> Config::get_list(const std::string& key) const {
    const std::string raw = get_string(key);
    std::vector<double> out;
    std::size_t begin = 0;
    while (begin <= raw.size()) {
        std::size_t comma = raw.find(',', begin);
        if (comma == std::string::npos) comma = raw.size();
        const std::string item = trim(raw.substr(begin, comma - begin));
        if (item.empty()) bad_value(key, "a comma-separated list of numbers", raw);
        out.push_back(parse_double(key, item));
        begin = comma + 1;
    }
    return out;
}

std::string Config::serialize() const {
    std::ostringstream out;
    for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
    return out.str();
}

}  // namespace gradnorm
