#pragma once

// Command-line driver: one entry point per run, dispatching on the mode.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "tsvar/config.hpp"

namespace tsvar {

struct RunOptions {
    RunMode mode = RunMode::Eigen;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<double> tol;            // overrides [solver] tol
    std::optional<int> max_iters;         // overrides [solver] max_iters
    std::optional<std::uint64_t> seed;    // overrides [solver] seed
    bool allow_noncoercive = false;
    bool newton = false;                  // force Newton directions on
};

/// Load and validate the configuration, build the mesh, run the requested
/// mode, and write solution/trace/path/report files into out_dir. The report
/// rows are echoed to `out`. Returns 0 on success, 2 on configuration or
/// validation errors, 3 on solver failures.
int run_cli(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace tsvar
