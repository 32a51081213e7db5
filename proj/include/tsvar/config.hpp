#pragma once

// Plain-text problem descriptions. Sections in square brackets, `key = value`
// pairs, `#`/`;` comments. `[timescale]` collects interval/points segments in
// order; `[problem]` holds lambda and the coefficient expressions; each
// `[impulse]` section adds one impulse (`t` plus either an expression `I` or a
// constant jump `d`); `[solver]` and `[growth]` tune the algorithms.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsvar/error.hpp"
#include "tsvar/expr.hpp"
#include "tsvar/functional.hpp"
#include "tsvar/mountainpass.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

struct ConfigError : Error {
    int line = 0;
    explicit ConfigError(const std::string& msg, int line_no = 0)
        : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                            : msg),
          line(line_no) {}
};

struct ImpulseConfig {
    double t = 0.0;
    bool has_t = false;
    Expr I;             // empty when the jump is the constant d
    double d = 0.0;
    bool has_d = false;
    int line = 0;       // where the section started (diagnostics)
};

struct SolverConfig {
    std::optional<double> tol;
    std::optional<int> max_iters;
    bool newton = false;
    std::optional<int> path_points;
    std::uint64_t seed = 0;
    double target_drop = 1.0;
};

struct Config {
    TimeScaleSpec timescale;
    double lambda = 0.0;
    Expr f;                              // nonlinear right-hand side f(t, u)
    Expr h;                              // linear right-hand side h(t)
    std::optional<Expr> g;               // drift generator g(t)
    std::optional<JumpSign> jump_sign;   // explicit override
    std::vector<ImpulseConfig> impulses;
    SolverConfig solver;
    std::optional<GrowthConditions> growth;
};

/// Parse a configuration from text. Throws ConfigError with a line number.
Config parse_config(const std::string& text);

/// Read and parse a configuration file.
Config load_config_file(const std::string& path);

/// The sign convention in effect: the explicit setting if present, otherwise
/// minus when a drift g is configured and plus when not.
JumpSign effective_jump_sign(const Config& cfg);

enum class RunMode { Eigen, SolveLinear, Minimize, MountainPass, CheckConditions };

/// Check mode requirements: the linear solve wants `h` and constant jumps,
/// the variational modes want `f` (constant jumps double as constant
/// impulse expressions), and check-conditions additionally wants [growth].
/// Throws ConfigError.
void validate_for_mode(const Config& cfg, RunMode mode);

/// Map every impulse time to a strictly interior mesh node (within 1e-12).
/// Throws ConfigError naming the offending time.
std::vector<std::size_t> resolve_impulse_nodes(const Config& cfg,
                                               const TimeScaleMesh& mesh);

}  // namespace tsvar
