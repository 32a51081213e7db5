#pragma once

#include <string>
#include <vector>

#include "tsvar/timescale.hpp"

namespace tsvar {

struct TraceRow {
    int iter = 0;
    double energy = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;
};

/// Common result record for the direct and iterative solvers.
struct SolveReport {
    GridFunction solution;
    double energy = 0.0;
    double weak_residual = 0.0;       // sup over basis directions of the residual
    double classical_residual = 0.0;  // strong-form residual off impulse nodes
    std::vector<double> jump_errors;  // one per impulse
    int iterations = 0;
    bool converged = false;
    std::vector<TraceRow> trace;
    std::vector<std::string> warnings;
};

}  // namespace tsvar
