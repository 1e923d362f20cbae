#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "laplax/chain.hpp"
#include "laplax/solver.hpp"

namespace laplax {

// Run-wide knobs resolved from four layers, strongest first:
// command-line flags, LAPLAX_* environment variables, a key=value config
// file, built-in defaults.
struct RunConfig {
    std::uint64_t seed = 1;
    double eps = 1e-8;
    double c_s = 4.0;
    double kappa_c = 200.0;
    int c_stop = 100;
    double c1 = 27.0;
    double c_r = 3.0;
    int retries = 5;

    ChainConfig chain_config() const {
        ChainConfig c;
        c.c1 = c1;
        c.kappa_c = kappa_c;
        c.c_s = c_s;
        c.c_stop = c_stop;
        c.retries = retries;
        c.c_r = c_r;
        c.seed = seed;
        return c;
    }

    SolveOptions solve_options() const {
        SolveOptions o;
        o.eps = eps;
        o.c_r = c_r;
        o.seed = seed;
        return o;
    }
};

// Overrides carry only the values a layer actually sets.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> eps;
    std::optional<double> c_s;
    std::optional<double> kappa_c;
    std::optional<int> c_stop;
    std::optional<double> c1;
    std::optional<double> c_r;
    std::optional<int> retries;
};

// Recognized keys: seed, eps, cs, kappa_c, c_stop, c1, cr, retries.
// Unknown keys are rejected. `#` starts a comment.
ConfigOverrides parse_config_text(const std::string& text, const std::string& name = "<config>");
ConfigOverrides parse_config_file(const std::string& path);

// Full key=value rendering; parse_config_text(config_text(c)) restores `c`.
std::string config_text(const RunConfig& c);

// Environment variables LAPLAX_SEED, LAPLAX_EPS, LAPLAX_CS, LAPLAX_KAPPA_C,
// LAPLAX_C_STOP, LAPLAX_C1, LAPLAX_CR, LAPLAX_RETRIES. The getter is
// injectable for tests; nullptr means use the process environment.
using EnvGetter = std::function<const char*(const char*)>;
ConfigOverrides env_overrides(const EnvGetter& getenv_fn = nullptr);

// defaults <- file <- env <- flags
RunConfig resolve_config(const ConfigOverrides& flags, const ConfigOverrides& env,
                         const ConfigOverrides& file);

} // namespace laplax
