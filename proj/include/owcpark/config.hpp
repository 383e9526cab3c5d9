#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace owc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` configuration file; '#' starts a comment, blank lines
// ignored. Lookups are strict: missing required keys and malformed numbers
// throw ConfigError. Relative paths resolve against the file's directory.
class Config {
public:
    Config() = default;
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;

    std::filesystem::path get_path(const std::string& key) const;

    // comma-separated doubles, or lo:step:hi ranges
    std::vector<double> get_grid(const std::string& key) const;
    // comma/semicolon separated "x y" pairs
    std::vector<std::pair<double, double>> get_points(const std::string& key) const;

    const std::filesystem::path& directory() const { return dir_; }
    std::uint64_t content_hash() const { return hash_; } // FNV-1a of the raw file

private:
    std::map<std::string, std::string> values_;
    std::filesystem::path dir_;
    std::uint64_t hash_ = 0;
};

} // namespace owc
