#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracpar {

// Parse error with position information.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line, int column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

// Sectioned key-value configuration:
//   [section]
//   key = value        # comment
// Values are free text; list values are whitespace-separated.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text,
                               const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_num(const std::string& section, const std::string& key) const;
    double get_num_or(const std::string& section, const std::string& key,
                      double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int_or(const std::string& section, const std::string& key,
                    long fallback) const;
    std::vector<double> get_list(const std::string& section,
                                 const std::string& key) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return data_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> data_;
    std::string origin_;
};

}  // namespace fracpar
