#include "catlift/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace catlift::io {

namespace {

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

using SectionMap = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const Entry& e, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        fail(e.line, "invalid number for '" + key + "': " + e.value);
    }
}

std::vector<double> parse_double_list(const Entry& e, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) fail(e.line, "empty element in list '" + key + "'");
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("trailing");
        } catch (...) {
            fail(e.line, "invalid number in list '" + key + "': " + tok);
        }
    }
    if (out.empty()) fail(e.line, "empty list for '" + key + "'");
    return out;
}

const std::set<std::string> kSetupKeys{"mass_kg", "omega_rads", "delta_x",
                                       "distance_m", "theta_rad", "radius_m"};
const std::set<std::string> kProtocolKeys{"t_minus", "t0", "force_n"};
const std::set<std::string> kNoiseKeys{"gamma_x", "gamma_q_hz", "sigma_f_n",
                                       "sigma_eps", "gas_pressure_pa",
                                       "gas_temperature_k", "gas_m_air_kg"};
const std::set<std::string> kRunKeys{
    "seed", "samples", "format", "out", "t_minus_min", "t_minus_max",
    "t_minus_points", "trajectory_points", "wigner_times", "wigner_min",
    "wigner_max", "wigner_points", "gie_t_lo", "gie_t_hi", "gie_grid_step",
    "sigma_eps_values"};

void check_keys(const std::string& section, const std::map<std::string, Entry>& kv,
                const std::set<std::string>& allowed) {
    for (const auto& [key, entry] : kv)
        if (!allowed.count(key))
            fail(entry.line, "unknown key '" + key + "' in section [" + section + "]");
}

itf::TrapSetup parse_setup(const std::string& name, std::map<std::string, Entry>& kv) {
    check_keys(name, kv, kSetupKeys);
    auto need = [&](const char* key) -> const Entry& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ConfigError("config section [" + name + "]: missing key '" + key + "'");
        return it->second;
    };
    itf::TrapSetup s;
    s.mass_kg = parse_double(need("mass_kg"), "mass_kg");
    s.omega_rads = parse_double(need("omega_rads"), "omega_rads");
    s.delta_x = parse_double(need("delta_x"), "delta_x");
    if (auto it = kv.find("distance_m"); it != kv.end())
        s.distance_m = parse_double(it->second, "distance_m");
    if (auto it = kv.find("theta_rad"); it != kv.end())
        s.theta_rad = parse_double(it->second, "theta_rad");
    if (auto it = kv.find("radius_m"); it != kv.end())
        s.radius_m = parse_double(it->second, "radius_m");
    s.validate();
    return s;
}

}  // namespace

const itf::TrapSetup& ScenarioConfig::single_setup() const {
    if (setups.size() != 1)
        throw ConfigError("this command requires exactly one [setup] section, found " +
                          std::to_string(setups.size()));
    return setups.front().second;
}

ScenarioConfig parse_config(const std::string& text) {
    SectionMap sections;
    std::map<std::string, Entry> top;
    std::string current;
    bool in_section = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) fail(line_no, "empty section name");
            in_section = true;
            sections[current];  // record even if empty
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value for '" + key + "'");
        auto& dst = in_section ? sections[current] : top;
        if (dst.count(key)) fail(line_no, "duplicate key '" + key + "'");
        dst[key] = {value, line_no};
    }

    for (const auto& [key, entry] : top)
        if (key != "schema_version")
            fail(entry.line, "unknown top-level key '" + key + "'");
    auto sv = top.find("schema_version");
    if (sv == top.end()) throw ConfigError("config: missing schema_version");
    ScenarioConfig cfg;
    cfg.schema_version = static_cast<int>(parse_double(sv->second, "schema_version"));
    if (cfg.schema_version != 1)
        fail(sv->second.line, "unsupported schema_version (expected 1)");

    for (auto& [name, kv] : sections) {
        if (name == "setup" || name.rfind("setup.", 0) == 0) {
            cfg.setups.emplace_back(name == "setup" ? "setup" : name.substr(6),
                                    parse_setup(name, kv));
        } else if (name == "protocol") {
            check_keys(name, kv, kProtocolKeys);
            if (auto it = kv.find("t_minus"); it != kv.end())
                cfg.t_minus = parse_double(it->second, "t_minus");
            if (auto it = kv.find("t0"); it != kv.end())
                cfg.t0 = parse_double(it->second, "t0");
            if (auto it = kv.find("force_n"); it != kv.end())
                cfg.force_n = parse_double(it->second, "force_n");
        } else if (name == "noise") {
            check_keys(name, kv, kNoiseKeys);
            if (auto it = kv.find("gamma_x"); it != kv.end())
                cfg.noise.gamma_x = parse_double(it->second, "gamma_x");
            if (auto it = kv.find("gamma_q_hz"); it != kv.end())
                cfg.noise.gamma_q_hz = parse_double(it->second, "gamma_q_hz");
            if (auto it = kv.find("sigma_f_n"); it != kv.end())
                cfg.noise.sigma_f_n = parse_double(it->second, "sigma_f_n");
            if (auto it = kv.find("sigma_eps"); it != kv.end())
                cfg.noise.sigma_eps = parse_double(it->second, "sigma_eps");
            if (auto it = kv.find("gas_pressure_pa"); it != kv.end())
                cfg.noise.gas.pressure_pa = parse_double(it->second, "gas_pressure_pa");
            if (auto it = kv.find("gas_temperature_k"); it != kv.end())
                cfg.noise.gas.temperature_k = parse_double(it->second, "gas_temperature_k");
            if (auto it = kv.find("gas_m_air_kg"); it != kv.end())
                cfg.noise.gas.m_air_kg = parse_double(it->second, "gas_m_air_kg");
            cfg.noise.validate();
        } else if (name == "run") {
            check_keys(name, kv, kRunKeys);
            auto getd = [&](const char* key, double& dst) {
                if (auto it = kv.find(key); it != kv.end())
                    dst = parse_double(it->second, key);
            };
            auto geti = [&](const char* key, auto& dst) {
                if (auto it = kv.find(key); it != kv.end()) {
                    double v = parse_double(it->second, key);
                    if (v < 0 || v != std::floor(v))
                        fail(it->second.line, std::string("'") + key +
                                                  "' must be a non-negative integer");
                    dst = static_cast<std::decay_t<decltype(dst)>>(v);
                }
            };
            if (auto it = kv.find("seed"); it != kv.end()) {
                try {
                    std::size_t pos = 0;
                    cfg.run.seed = std::stoull(it->second.value, &pos);
                    if (pos != it->second.value.size()) throw std::invalid_argument("");
                } catch (...) {
                    fail(it->second.line, "seed must be an unsigned integer");
                }
            }
            geti("samples", cfg.run.samples);
            if (auto it = kv.find("format"); it != kv.end()) {
                cfg.run.format = it->second.value;
                if (cfg.run.format != "csv" && cfg.run.format != "json")
                    fail(it->second.line, "format must be csv or json");
            }
            if (auto it = kv.find("out"); it != kv.end()) cfg.run.out = it->second.value;
            getd("t_minus_min", cfg.run.t_minus_min);
            getd("t_minus_max", cfg.run.t_minus_max);
            geti("t_minus_points", cfg.run.t_minus_points);
            geti("trajectory_points", cfg.run.trajectory_points);
            if (auto it = kv.find("wigner_times"); it != kv.end())
                cfg.run.wigner_times = parse_double_list(it->second, "wigner_times");
            getd("wigner_min", cfg.run.wigner_min);
            getd("wigner_max", cfg.run.wigner_max);
            geti("wigner_points", cfg.run.wigner_points);
            getd("gie_t_lo", cfg.run.gie_t_lo);
            getd("gie_t_hi", cfg.run.gie_t_hi);
            getd("gie_grid_step", cfg.run.gie_grid_step);
            if (auto it = kv.find("sigma_eps_values"); it != kv.end())
                cfg.run.sigma_eps_values = parse_double_list(it->second, "sigma_eps_values");
        } else {
            throw ConfigError("config: unknown section [" + name + "]");
        }
    }
    if (cfg.setups.empty()) throw ConfigError("config: no [setup] section");
    std::sort(cfg.setups.begin(), cfg.setups.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace catlift::io
