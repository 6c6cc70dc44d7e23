#pragma once
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lognls {

// Sectioned key = value files. '#' starts a comment. Unknown sections or keys
// are errors, not warnings: each command declares what it accepts and calls
// require_known before reading anything.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key, long fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    // Throws config_error naming the first section or key outside `allowed`.
    void require_known(const std::map<std::string, std::set<std::string>>& allowed) const;

  private:
    std::map<std::string, std::map<std::string, std::string>> data_;
    std::string origin_;
    const std::string& raw(const std::string& section, const std::string& key) const;
};

}  // namespace lognls
