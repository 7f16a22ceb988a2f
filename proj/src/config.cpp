#include "memsfbp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "memsfbp/errors.hpp"

namespace memsfbp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

Config parse_lines(std::istream& in, const std::string& origin) {
    Config cfg;
    std::string line;
    std::string section = "global";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header '" + t + "'");
            }
            section = lower(trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value, got '" + t + "'");
        }
        const std::string key = lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        }
        cfg.set(section, key, value);
    }
    return cfg;
}

// Keys eligible for MEMSFBP_<SECTION>_<KEY> environment overrides.
const std::pair<const char*, const char*> kKnownKeys[] = {
    {"params", "eps"},        {"params", "lambda"},      {"params", "mu"},
    {"params", "kappa"},      {"params", "touchdown_gap"},
    {"grid", "nx"},           {"grid", "nz"},
    {"time", "dt"},           {"time", "t_end"},         {"time", "record_every"},
    {"time", "inner_iterations"},
    {"newton", "tol"},        {"newton", "max_iterations"}, {"newton", "fd_scale"},
    {"newton", "lambda_step"}, {"newton", "min_step"},    {"newton", "max_lambda"},
    {"newton", "arclength_step"}, {"newton", "points_past_fold"},
    {"newton", "compute_spectrum"}, {"newton", "ratio"},
    {"output", "dir"},        {"output", "write_snapshots"}, {"output", "write_matrix"},
    {"output", "write_raster"},
    {"sweep", "lambda_min"},  {"sweep", "lambda_max"},    {"sweep", "count"},
    {"sweep", "ratio"},
    {"thresholds", "eps_list"},
    {"convergence", "eps_list"}, {"convergence", "mms_nx_list"},
};

} // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    return parse_lines(in, path);
}

Config Config::from_string(const std::string& text) {
    std::istringstream in(text);
    return parse_lines(in, "<string>");
}

void Config::apply_env_overrides() {
    for (const auto& [section, key] : kKnownKeys) {
        const std::string var = "MEMSFBP_" + upper(section) + "_" + upper(key);
        if (const char* val = std::getenv(var.c_str())) {
            set(section, key, val);
        }
    }
}

void Config::set_override(const std::string& dotted_assignment) {
    const std::size_t eq = dotted_assignment.find('=');
    const std::size_t dot = dotted_assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw ConfigError("override must look like section.key=value, got '" +
                          dotted_assignment + "'");
    }
    set(lower(trim(dotted_assignment.substr(0, dot))),
        lower(trim(dotted_assignment.substr(dot + 1, eq - dot - 1))),
        trim(dotted_assignment.substr(eq + 1)));
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    sections_[lower(section)][lower(key)] = value;
}

bool Config::has(const std::string& section, const std::string& key) const {
    return lookup(section, key).has_value();
}

std::optional<std::string> Config::lookup(const std::string& section,
                                          const std::string& key) const {
    const auto sit = sections_.find(lower(section));
    if (sit == sections_.end()) return std::nullopt;
    const auto kit = sit->second.find(lower(key));
    if (kit == sit->second.end()) return std::nullopt;
    return kit->second;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return lookup(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const auto raw = lookup(section, key);
    if (!raw) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(*raw, &pos);
        if (pos != raw->size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key " + section + "." + key + ": '" + *raw +
                          "' is not a decimal number");
    }
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
    const auto raw = lookup(section, key);
    if (!raw) return fallback;
    try {
        std::size_t pos = 0;
        const int v = std::stoi(*raw, &pos);
        if (pos != raw->size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key " + section + "." + key + ": '" + *raw +
                          "' is not an integer");
    }
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
    const auto raw = lookup(section, key);
    if (!raw) return fallback;
    const std::string v = lower(*raw);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key " + section + "." + key + ": expected true/false, got '" +
                      *raw + "'");
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key,
                                            const std::vector<double>& fallback) const {
    const auto raw = lookup(section, key);
    if (!raw) return fallback;
    std::vector<double> out;
    std::stringstream ss(*raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("key " + section + "." + key + ": '" + item +
                              "' is not a decimal number");
        }
    }
    if (out.empty()) {
        throw ConfigError("key " + section + "." + key + ": empty list");
    }
    return out;
}

std::map<std::string, std::string> Config::flattened() const {
    std::map<std::string, std::string> flat;
    for (const auto& [section, keys] : sections_) {
        for (const auto& [key, value] : keys) {
            flat[section + "." + key] = value;
        }
    }
    return flat;
}

} // namespace memsfbp
