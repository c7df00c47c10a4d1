#include "nv2d/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nv2d/errors.hpp"

namespace nv2d {

void RunConfig::validate() const {
    if (preset != "gaussian-bump" && preset != "two-bump" && preset != "vacuum-wave" &&
        preset != "zero")
        throw ConfigError("config: unknown preset '" + preset + "'");
    if (!(box_half_width > 0.0)) throw ConfigError("config: L must be positive");
    if (nx < 8) throw ConfigError("config: nx must be >= 8");
    if (np < 8) throw ConfigError("config: np must be >= 8");
    if (!(dt > 0.0)) throw ConfigError("config: dt must be positive");
    if (!(t_final >= 0.0)) throw ConfigError("config: t_final must be >= 0");
    if (snapshot_stride < 0) throw ConfigError("config: snapshot_stride must be >= 0");
    if (history_stride < 1) throw ConfigError("config: history_stride must be >= 1");
    if (dt > 0.45 * h_x() + 1e-15) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "config: CFL violated, dt=%.6g > 0.45 h_x=%.6g", dt,
                      0.45 * h_x());
        throw ConfigError(buf);
    }
    const InitialData data = make_initial_data();
    const double required = data.data_radius + t_final + 1.0;
    if (box_half_width < required) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "config: causality margin violated, need L >= data radius + t_final + 1 "
                      "= %.6g, got L = %.6g",
                      required, box_half_width);
        throw ConfigError(buf);
    }
    if (data.p_support_radius <= 0.0 && preset != "vacuum-wave" && preset != "zero")
        throw ConfigError("config: preset has empty momentum support");
}

namespace {

std::map<std::string, std::string> tokenize(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-integer value '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "0") return false;
    if (v == "1") return true;
    throw ConfigError("config: key '" + key + "' must be 0 or 1, got '" + v + "'");
}

void assign(RunConfig& cfg, const std::string& key, const std::string& val) {
    if (key == "preset")
        cfg.preset = val;
    else if (key == "L")
        cfg.box_half_width = to_double(key, val);
    else if (key == "nx")
        cfg.nx = static_cast<int>(to_long(key, val));
    else if (key == "np")
        cfg.np = static_cast<int>(to_long(key, val));
    else if (key == "dt")
        cfg.dt = to_double(key, val);
    else if (key == "t_final")
        cfg.t_final = to_double(key, val);
    else if (key == "amplitude")
        cfg.amplitude = to_double(key, val);
    else if (key == "width")
        cfg.width = to_double(key, val);
    else if (key == "p_radius")
        cfg.p_radius = to_double(key, val);
    else if (key == "offset")
        cfg.offset = to_double(key, val);
    else if (key == "out_dir")
        cfg.out_dir = val;
    else if (key == "snapshot_stride")
        cfg.snapshot_stride = static_cast<int>(to_long(key, val));
    else if (key == "history_stride")
        cfg.history_stride = static_cast<int>(to_long(key, val));
    else if (key == "history_keep_f")
        cfg.history_keep_f = to_bool(key, val);
    else if (key == "verify_heavy")
        cfg.verify_heavy = to_bool(key, val);
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(to_long(key, val));
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

const char* kAllKeys[] = {"preset",          "L",
                          "nx",              "np",
                          "dt",              "t_final",
                          "amplitude",       "width",
                          "p_radius",        "offset",
                          "out_dir",         "snapshot_stride",
                          "history_stride",  "history_keep_f",
                          "verify_heavy",    "seed"};

} // namespace

RunConfig parse_config_text(const std::string& text) {
    const auto kv = tokenize(text);
    RunConfig cfg;
    for (const char* key : kAllKeys)
        if (kv.find(key) == kv.end())
            throw ConfigError(std::string("config: missing mandatory key '") + key + "'");
    for (const auto& [key, val] : kv) assign(cfg, key, val);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == assignment.size())
        throw ConfigError("override must be key=value, got '" + assignment + "'");
    assign(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

} // namespace nv2d
