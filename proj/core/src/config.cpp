#include "entlab/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "entlab/errors.hpp"

namespace entlab {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

double parse_double(const std::string& s)
{
    std::string t = trim(s);
    if (t.empty()) throw ConfigError("empty numeric value");
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw ConfigError("not a number: '" + t + "'");
    return v;
}

KeyValues parse_key_values(const std::string& text)
{
    KeyValues kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!kv.has(key)) kv.order.push_back(key);
        kv.values[key] = value;
    }
    return kv;
}

KeyValues read_key_values_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

const std::string& KeyValues::require(const std::string& key) const
{
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

std::string KeyValues::get(const std::string& key, const std::string& fallback) const
{
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key) const
{
    try {
        return parse_double(require(key));
    } catch (const ConfigError& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

double KeyValues::get_double(const std::string& key, double fallback) const
{
    return has(key) ? get_double(key) : fallback;
}

int KeyValues::get_int(const std::string& key) const
{
    double v = get_double(key);
    if (v != std::floor(v) || std::abs(v) > 2e9)
        throw ConfigError("key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

int KeyValues::get_int(const std::string& key, int fallback) const
{
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t KeyValues::get_uint64(const std::string& key) const
{
    const std::string& s = require(key);
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError("key '" + key + "' must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const
{
    if (!has(key)) return fallback;
    std::string v = require(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "' must be a boolean");
}

std::vector<double> KeyValues::get_doubles(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& item : split(require(key), ',')) out.push_back(parse_double(item));
    return out;
}

std::vector<std::string> KeyValues::get_list(const std::string& key) const
{
    return split(require(key), ',');
}

}  // namespace entlab
