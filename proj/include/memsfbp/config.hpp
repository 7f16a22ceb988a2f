#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace memsfbp {

/// Flat key-value configuration with [section] headers, '#' or ';' comments
/// and key = value lines. Numeric values are decimal, booleans true/false.
/// Precedence: file < environment (MEMSFBP_<SECTION>_<KEY>) < explicit sets.
class Config {
public:
    Config() = default;

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    /// Applies MEMSFBP_<SECTION>_<KEY> environment overrides for known keys.
    void apply_env_overrides();

    /// "section.key=value" (used by the CLI --set flag).
    void set_override(const std::string& dotted_assignment);
    void set(const std::string& section, const std::string& key, const std::string& value);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    /// Comma-separated list of decimals.
    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const;

    /// Deterministic flat view (section.key -> value), for the manifest echo.
    std::map<std::string, std::string> flattened() const;

private:
    std::optional<std::string> lookup(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, std::string>> sections_;
};

} // namespace memsfbp
