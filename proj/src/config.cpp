#include "lognls/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lognls/errors.hpp"

namespace lognls {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    if (t.empty()) throw config_error(where + ": empty value, expected a number");
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (errno == ERANGE) throw config_error(where + ": number out of range: '" + t + "'");
    if (end == t.c_str() || *end != '\0')
        throw config_error(where + ": not a number: '" + t + "'");
    return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(where + ": malformed section header: '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw config_error(where + ": empty section name");
            cfg.data_[section];  // a section may legitimately hold zero keys
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(where + ": expected 'key = value': '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error(where + ": empty key");
        if (section.empty())
            throw config_error(where + ": key '" + key + "' appears before any [section]");
        auto& sec = cfg.data_[section];
        if (sec.count(key))
            throw config_error(where + ": duplicate key '" + key + "' in [" + section + "]");
        sec[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = data_.find(section);
    return it != data_.end() && it->second.count(key) != 0;
}

bool Config::has_section(const std::string& section) const {
    return data_.count(section) != 0;
}

const std::string& Config::raw(const std::string& section, const std::string& key) const {
    auto it = data_.find(section);
    if (it == data_.end())
        throw config_error(origin_ + ": missing section [" + section + "]");
    auto kt = it->second.find(key);
    if (kt == it->second.end())
        throw config_error(origin_ + ": missing key '" + key + "' in [" + section + "]");
    return kt->second;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    return raw(section, key);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? raw(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    return parse_double(raw(section, key), origin_ + ": [" + section + "] " + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const std::string where = origin_ + ": [" + section + "] " + key;
    const std::string t = trim(raw(section, key));
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (errno == ERANGE) throw config_error(where + ": integer out of range: '" + t + "'");
    if (t.empty() || end == t.c_str() || *end != '\0')
        throw config_error(where + ": not an integer: '" + t + "'");
    return v;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    const std::string where = origin_ + ": [" + section + "] " + key;
    const std::string t = trim(raw(section, key));
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (errno == ERANGE) throw config_error(where + ": integer out of range: '" + t + "'");
    if (t.empty() || end == t.c_str() || *end != '\0' || t.front() == '-')
        throw config_error(where + ": not an unsigned integer: '" + t + "'");
    return static_cast<std::uint64_t>(v);
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
    const std::string where = origin_ + ": [" + section + "] " + key;
    std::string t = raw(section, key);
    for (char& c : t)
        if (c == ',') c = ' ';
    std::istringstream in(t);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_double(tok, where));
    return out;
}

void Config::require_known(const std::map<std::string, std::set<std::string>>& allowed) const {
    for (const auto& [section, keys] : data_) {
        auto it = allowed.find(section);
        if (it == allowed.end())
            throw config_error(origin_ + ": unknown section [" + section + "]");
        for (const auto& [key, value] : keys) {
            (void)value;
            if (!it->second.count(key))
                throw config_error(origin_ + ": unknown key '" + key + "' in [" + section + "]");
        }
    }
}

}  // namespace lognls
