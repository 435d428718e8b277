#pragma once

// Small helpers for strict JSON config parsing.

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace swingsim::jsonu {

using nlohmann::json;

inline json load_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, got);
    std::fclose(f);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

inline void save_file(const json& j, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const std::string text = j.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), f);
    if (std::fclose(f) != 0) throw std::runtime_error("write to " + path + " failed");
}

inline double get_num(const json& j, const std::string& key) {
    if (!j.contains(key)) throw std::invalid_argument("missing field '" + key + "'");
    if (!j[key].is_number()) throw std::invalid_argument("field '" + key + "' must be a number");
    return j[key].get<double>();
}

inline double get_num_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw std::invalid_argument("field '" + key + "' must be a number");
    return j[key].get<double>();
}

inline bool get_bool_or(const json& j, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) throw std::invalid_argument("field '" + key + "' must be a bool");
    return j[key].get<bool>();
}

inline std::string get_str(const json& j, const std::string& key) {
    if (!j.contains(key)) throw std::invalid_argument("missing field '" + key + "'");
    if (!j[key].is_string()) throw std::invalid_argument("field '" + key + "' must be a string");
    return j[key].get<std::string>();
}

inline std::string get_str_or(const json& j, const std::string& key,
                              const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw std::invalid_argument("field '" + key + "' must be a string");
    return j[key].get<std::string>();
}

}  // namespace swingsim::jsonu
