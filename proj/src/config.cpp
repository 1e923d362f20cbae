#include "laplax/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace laplax {

namespace {

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(s, &pos);
        require(pos == s.size(), where + ": trailing characters in integer");
        return v;
    } catch (const std::exception&) {
        throw input_error(where + ": not an unsigned integer: " + s);
    }
}

double parse_f64(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        require(pos == s.size(), where + ": trailing characters in number");
        return v;
    } catch (const std::exception&) {
        throw input_error(where + ": not a number: " + s);
    }
}

int parse_int(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        require(pos == s.size(), where + ": trailing characters in integer");
        return v;
    } catch (const std::exception&) {
        throw input_error(where + ": not an integer: " + s);
    }
}

void apply_kv(ConfigOverrides& o, const std::string& key, const std::string& value,
              const std::string& where) {
    if (key == "seed")
        o.seed = parse_u64(value, where);
    else if (key == "eps")
        o.eps = parse_f64(value, where);
    else if (key == "cs")
        o.c_s = parse_f64(value, where);
    else if (key == "kappa_c")
        o.kappa_c = parse_f64(value, where);
    else if (key == "c_stop")
        o.c_stop = parse_int(value, where);
    else if (key == "c1")
        o.c1 = parse_f64(value, where);
    else if (key == "cr")
        o.c_r = parse_f64(value, where);
    else if (key == "retries")
        o.retries = parse_int(value, where);
    else
        throw input_error(where + ": unknown configuration key `" + key + "`");
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// shortest decimal form that parses back exactly
std::string format_double_cfg(double x) {
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::stod(buf) == x) return buf;
    }
    return std::to_string(x);
}

} // namespace

ConfigOverrides parse_config_text(const std::string& text, const std::string& name) {
    ConfigOverrides o;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = name + ":" + std::to_string(lineno);
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        require(eq != std::string::npos, where + ": expected key=value");
        apply_kv(o, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
    return o;
}

ConfigOverrides parse_config_file(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string config_text(const RunConfig& c) {
    std::ostringstream out;
    out << "seed=" << c.seed << "\n";
    out << "eps=" << format_double_cfg(c.eps) << "\n";
    out << "cs=" << format_double_cfg(c.c_s) << "\n";
    out << "kappa_c=" << format_double_cfg(c.kappa_c) << "\n";
    out << "c_stop=" << c.c_stop << "\n";
    out << "c1=" << format_double_cfg(c.c1) << "\n";
    out << "cr=" << format_double_cfg(c.c_r) << "\n";
    out << "retries=" << c.retries << "\n";
    return out.str();
}

ConfigOverrides env_overrides(const EnvGetter& getenv_fn) {
    auto get = [&](const char* k) -> const char* {
        return getenv_fn ? getenv_fn(k) : std::getenv(k);
    };
    ConfigOverrides o;
    if (const char* v = get("LAPLAX_SEED")) o.seed = parse_u64(v, "LAPLAX_SEED");
    if (const char* v = get("LAPLAX_EPS")) o.eps = parse_f64(v, "LAPLAX_EPS");
    if (const char* v = get("LAPLAX_CS")) o.c_s = parse_f64(v, "LAPLAX_CS");
    if (const char* v = get("LAPLAX_KAPPA_C")) o.kappa_c = parse_f64(v, "LAPLAX_KAPPA_C");
    if (const char* v = get("LAPLAX_C_STOP")) o.c_stop = parse_int(v, "LAPLAX_C_STOP");
    if (const char* v = get("LAPLAX_C1")) o.c1 = parse_f64(v, "LAPLAX_C1");
    if (const char* v = get("LAPLAX_CR")) o.c_r = parse_f64(v, "LAPLAX_CR");
    if (const char* v = get("LAPLAX_RETRIES")) o.retries = parse_int(v, "LAPLAX_RETRIES");
    return o;
}

RunConfig resolve_config(const ConfigOverrides& flags, const ConfigOverrides& env,
                         const ConfigOverrides& file) {
    RunConfig c;
    for (const ConfigOverrides* layer : {&file, &env, &flags}) {
        if (layer->seed) c.seed = *layer->seed;
        if (layer->eps) c.eps = *layer->eps;
        if (layer->c_s) c.c_s = *layer->c_s;
        if (layer->kappa_c) c.kappa_c = *layer->kappa_c;
        if (layer->c_stop) c.c_stop = *layer->c_stop;
        if (layer->c1) c.c1 = *layer->c1;
        if (layer->c_r) c.c_r = *layer->c_r;
        if (layer->retries) c.retries = *layer->retries;
    }
    require(c.eps > 0.0 && c.eps < 1.0, "eps must lie in (0,1)");
    require(c.c_s >= 2.0, "cs must be at least 2");
    require(c.kappa_c > 1.0, "kappa_c must exceed 1");
    require(c.c_stop >= 1, "c_stop must be positive");
    require(c.retries >= 1, "retries must be positive");
    return c;
}

} // namespace laplax
