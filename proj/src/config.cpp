#include "fracpar/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fracpar {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError("unterminated section header", lineno,
                                  static_cast<int>(line.find('[')) + 1);
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty())
                throw ConfigError("empty section name", lineno,
                                  static_cast<int>(line.find('[')) + 1);
            cfg.data_[section];  // record even if empty
            continue;
        }
        const size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", lineno, 1);
        const std::string key = trim(body.substr(0, eq));
        const std::string val = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError("empty key before '='", lineno, 1);
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any [section]", lineno, 1);
        if (cfg.data_[section].count(key))
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]",
                              lineno, 1);
        cfg.data_[section][key] = val;
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto it = data_.find(section);
    return it != data_.end() && it->second.count(key) > 0;
}

const std::string& Config::get(const std::string& section,
                               const std::string& key) const {
    auto it = data_.find(section);
    if (it == data_.end())
        throw std::invalid_argument("config " + origin_ + ": missing section [" +
                                    section + "]");
    auto jt = it->second.find(key);
    if (jt == it->second.end())
        throw std::invalid_argument("config " + origin_ + ": missing key '" + key +
                                    "' in [" + section + "]");
    return jt->second;
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_num(const std::string& section, const std::string& key) const {
    const std::string& v = get(section, key);
    size_t used = 0;
    double x;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config " + origin_ + ": key '" + key + "' in [" +
                                    section + "] is not a number: '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config " + origin_ + ": trailing characters in '" +
                                    key + "' value '" + v + "'");
    return x;
}

double Config::get_num_or(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_num(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
    const std::string& v = get(section, key);
    size_t used = 0;
    long x;
    try {
        x = std::stol(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config " + origin_ + ": key '" + key + "' in [" +
                                    section + "] is not an integer: '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config " + origin_ + ": trailing characters in '" +
                                    key + "' value '" + v + "'");
    return x;
}

long Config::get_int_or(const std::string& section, const std::string& key,
                        long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
    std::istringstream in(get(section, key));
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        size_t used = 0;
        double x;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size())
            throw std::invalid_argument("config " + origin_ + ": list entry '" + tok +
                                        "' in key '" + key + "' is not a number");
        out.push_back(x);
    }
    return out;
}

}  // namespace fracpar
