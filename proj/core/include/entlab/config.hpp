#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace entlab {

// Plain "key = value" text with '#' comments. Later keys override earlier ones.
struct KeyValues {
    std::map<std::string, std::string> values;
    std::vector<std::string> order;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    const std::string& require(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_uint64(const std::string& key) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<std::string> get_list(const std::string& key) const;
};

KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values_file(const std::string& path);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
double parse_double(const std::string& s);

}  // namespace entlab
