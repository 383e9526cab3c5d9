#include "owcpark/config.hpp"

#include <fstream>
#include <sstream>

namespace owc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
    if (pos != v.size())
        throw ConfigError("config key '" + key + "': trailing characters in '" + v + "'");
    return d;
}

} // namespace

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    Config cfg;
    cfg.dir_ = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    std::uint64_t hash = 1469598103934665603ull;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (unsigned char c : line) hash = (hash ^ c) * 1099511628211ull;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": empty key");
        if (!cfg.values_.emplace(key, value).second)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
    }
    cfg.hash_ = hash;
    return cfg;
}

std::string Config::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
    const double d = get_double(key);
    const int i = static_cast<int>(d);
    if (d != i) throw ConfigError("config key '" + key + "': expected an integer");
    return i;
}

int Config::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::filesystem::path Config::get_path(const std::string& key) const {
    const std::filesystem::path p = get_string(key);
    return p.is_absolute() ? p : dir_ / p;
}

std::vector<double> Config::get_grid(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<double> out;
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        const auto c1 = item.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_double(key, item));
            continue;
        }
        const auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw ConfigError("config key '" + key + "': range needs lo:step:hi");
        const double lo = parse_double(key, trim(item.substr(0, c1)));
        const double step = parse_double(key, trim(item.substr(c1 + 1, c2 - c1 - 1)));
        const double hi = parse_double(key, trim(item.substr(c2 + 1)));
        if (step <= 0 || hi < lo)
            throw ConfigError("config key '" + key + "': bad range bounds");
        for (double x = lo; x <= hi + 1e-12 * step; x += step) out.push_back(x);
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty grid");
    return out;
}

std::vector<std::pair<double, double>> Config::get_points(const std::string& key) const {
    const std::string v = get_string(key);
    std::vector<std::pair<double, double>> out;
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        std::istringstream ps(item);
        double x, y;
        char comma;
        if (!(ps >> x >> comma >> y) || comma != ',')
            throw ConfigError("config key '" + key + "': expected 'x,y' pairs");
        out.emplace_back(x, y);
    }
    return out;
}

} // namespace owc
