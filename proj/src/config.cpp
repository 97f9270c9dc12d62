#include "hgsim/config.hpp"

#include "hgsim/types.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hgsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

long long to_int(std::string_view key, std::string_view v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    return out;
}

double to_double(std::string_view key, std::string_view v) {
    std::string s(v);
    char* end = nullptr;
    double out = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + s + "'");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("'" + std::string(key) + "' expects a boolean, got '" + std::string(v) + "'");
}

// Shortest text that reads back to the same double.
std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "map",  "n_h",   "n_g",  "n_baseline", "rc_h",   "ru_h",    "rc_g",    "ru_g",
        "mu",   "rho_h", "rho_g", "m_p",       "tau_max", "K",      "r_s",     "seed",
        "perpetual", "speed_h", "speed_g", "gatherer_full_observation", "metric", "trace", "starts"};
    return keys;
}

void apply_setting(MissionConfig& cfg, std::string_view key, std::string_view raw) {
    std::string_view v = trim(raw);
    if (key == "map") cfg.map = std::string(v);
    else if (key == "n_h") cfg.n_hunters = static_cast<int>(to_int(key, v));
    else if (key == "n_g") cfg.n_gatherers = static_cast<int>(to_int(key, v));
    else if (key == "n_baseline") cfg.n_baseline = static_cast<int>(to_int(key, v));
    else if (key == "rc_h") cfg.hunter_margins.r_c = static_cast<int>(to_int(key, v));
    else if (key == "ru_h") cfg.hunter_margins.r_u = static_cast<int>(to_int(key, v));
    else if (key == "rc_g") cfg.gatherer_margins.r_c = static_cast<int>(to_int(key, v));
    else if (key == "ru_g") cfg.gatherer_margins.r_u = static_cast<int>(to_int(key, v));
    else if (key == "mu") cfg.mu = to_double(key, v);
    else if (key == "rho_h") cfg.rho_h = to_double(key, v);
    else if (key == "rho_g") cfg.rho_g = to_double(key, v);
    else if (key == "m_p") cfg.tasks = static_cast<int>(to_int(key, v));
    else if (key == "tau_max") cfg.tau_max = static_cast<int>(to_int(key, v));
    else if (key == "K") cfg.decay_period = (v == "inf" || v == "off") ? 0 : static_cast<int>(to_int(key, v));
    else if (key == "r_s") cfg.sensing_radius = static_cast<int>(to_int(key, v));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, v));
    else if (key == "perpetual") cfg.perpetual = to_bool(key, v);
    else if (key == "speed_h") cfg.hunter_speed = static_cast<int>(to_int(key, v));
    else if (key == "speed_g") cfg.gatherer_speed = static_cast<int>(to_int(key, v));
    else if (key == "gatherer_full_observation") cfg.gatherer_full_observation = to_bool(key, v);
    else if (key == "metric") {
        if (v == "path") cfg.metric = Metric::Path;
        else if (v == "euclidean") cfg.metric = Metric::Euclidean;
        else throw ConfigError("'metric' must be path or euclidean, got '" + std::string(v) + "'");
    }
    else if (key == "trace") cfg.trace = to_bool(key, v);
    else if (key == "starts") cfg.starts = std::string(v);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string get_setting(const MissionConfig& cfg, std::string_view key) {
    if (key == "map") return cfg.map;
    if (key == "n_h") return std::to_string(cfg.n_hunters);
    if (key == "n_g") return std::to_string(cfg.n_gatherers);
    if (key == "n_baseline") return std::to_string(cfg.n_baseline);
    if (key == "rc_h") return std::to_string(cfg.hunter_margins.r_c);
    if (key == "ru_h") return std::to_string(cfg.hunter_margins.r_u);
    if (key == "rc_g") return std::to_string(cfg.gatherer_margins.r_c);
    if (key == "ru_g") return std::to_string(cfg.gatherer_margins.r_u);
    if (key == "mu") return fmt_double(cfg.mu);
    if (key == "rho_h") return fmt_double(cfg.rho_h);
    if (key == "rho_g") return fmt_double(cfg.rho_g);
    if (key == "m_p") return std::to_string(cfg.tasks);
    if (key == "tau_max") return std::to_string(cfg.tau_max);
    if (key == "K") return cfg.decay_period <= 0 ? "inf" : std::to_string(cfg.decay_period);
    if (key == "r_s") return std::to_string(cfg.sensing_radius);
    if (key == "seed") return std::to_string(cfg.seed);
    if (key == "perpetual") return cfg.perpetual ? "true" : "false";
    if (key == "speed_h") return std::to_string(cfg.hunter_speed);
    if (key == "speed_g") return std::to_string(cfg.gatherer_speed);
    if (key == "gatherer_full_observation") return cfg.gatherer_full_observation ? "true" : "false";
    if (key == "metric") return cfg.metric == Metric::Path ? "path" : "euclidean";
    if (key == "trace") return cfg.trace ? "true" : "false";
    if (key == "starts") return cfg.starts;
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

MissionConfig parse_config(std::string_view text, MissionConfig base) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
        if (end == text.size()) break;
    }
    return base;
}

std::string config_snapshot(const MissionConfig& cfg) {
    std::string out;
    for (const auto& key : config_keys()) out += key + " = " + get_setting(cfg, key) + "\n";
    return out;
}

void validate(const MissionConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (cfg.n_hunters < 0 || cfg.n_gatherers < 0 || cfg.n_baseline < 0) fail("agent counts must be >= 0");
    if (cfg.n_baseline > 0 && (cfg.n_hunters > 0 || cfg.n_gatherers > 0))
        fail("baseline agents cannot be mixed with hunters and gatherers");
    if (cfg.n_hunters > 0 && !cfg.hunter_margins.valid()) fail("hunter margins need 0 < rc_h < ru_h");
    if ((cfg.n_gatherers > 0 || cfg.n_baseline > 0) && !cfg.gatherer_margins.valid())
        fail("gatherer margins need 0 < rc_g < ru_g");
    if (!(cfg.rho_h > 0.0) || !(cfg.rho_g > 0.0)) fail("rho_h and rho_g must be > 0");
    if (!(cfg.mu >= 0.0)) fail("mu must be >= 0");
    if (cfg.tasks < 0) fail("m_p must be >= 0");
    if (cfg.tau_max < 1) fail("tau_max must be >= 1");
    if (cfg.sensing_radius < 0) fail("r_s must be >= 0");
    if (cfg.hunter_speed < 1 || cfg.gatherer_speed < 1) fail("speeds must be >= 1");
}

std::string resolve_map_path(const std::string& map) {
    namespace fs = std::filesystem;
    if (map.rfind("open:", 0) == 0) return "";
    if (fs::exists(map)) return map;
    bool looks_like_path = map.find('/') != std::string::npos || map.find('.') != std::string::npos;
    if (!looks_like_path) {
        const char* env = std::getenv("HGSIM_MAP_DIR");
        std::string dir = env ? env : HGSIM_MAP_DIR;
        fs::path candidate = fs::path(dir) / (map + ".map");
        if (fs::exists(candidate)) return candidate.string();
    }
    throw ConfigError("map file not found: " + map);
}

MissionConfig default_config() { return MissionConfig{}; }

MissionConfig desk_config() {
    MissionConfig cfg;
    cfg.map = "simple50";
    cfg.tasks = 6;
    cfg.tau_max = 500;
    cfg.decay_period = 100;
    cfg.hunter_margins = {7, 20};
    cfg.gatherer_margins = {20, 40};
    return cfg;
}

MissionConfig load_config(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    if (name_or_path == "default") return default_config();
    if (name_or_path == "desk") return desk_config();
    fs::path path = name_or_path;
    if (!fs::exists(path)) {
        const char* env = std::getenv("HGSIM_CONFIG_DIR");
        fs::path alt = fs::path(env ? env : HGSIM_CONFIG_DIR) / (name_or_path + ".cfg");
        if (!fs::exists(alt)) throw ConfigError("config file not found: " + name_or_path);
        path = alt;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace hgsim
