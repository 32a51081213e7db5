#pragma once

// Second critical point search: superquadratic growth checks, a far point
// with low energy, and a path-deformation mountain-pass algorithm between the
// local minimizer and the far point (repeatedly relax the maximum-energy
// point of the path, then re-even the path by arc length; finish with a
// Newton polish of the gradient).

#include <cstdint>
#include <string>
#include <vector>

#include "tsvar/functional.hpp"

namespace tsvar {

struct NoDescentDirection : Error {
    using Error::Error;
};
struct DegeneratePath : Error {
    using Error::Error;
};
struct EstimationFailed : Error {
    using Error::Error;
};

/// Growth hypothesis parameters: superquadraticity exponent eta (> 2),
/// threshold gamma (> 0) and the pointwise growth exponent s (> 1).
struct GrowthConditions {
    double eta = 0.0;
    double gamma = 0.0;
    double s = 0.0;
};

struct GrowthCheck {
    std::string name;
    bool passed = false;
    bool heuristic = false;  // trend checks, not proofs
    double value = 0.0;      // worst margin or final ratio
    std::string note;
};

struct GrowthReport {
    std::vector<GrowthCheck> checks;
    double h1_margin_f = 0.0;   // min of u f(t,u) - eta F(t,u) over |u| >= gamma
    double h1_min_etaF = 0.0;   // min of eta F(t,u) over the same samples
    double h1_scale = 1.0;      // max |u f| over the samples; margins are
                                // judged against 1e-12 * this
    bool all_passed() const;
};

/// Evaluate the superquadraticity margins for f and every impulse at the
/// sample grid, plus heuristic decay-ratio checks of the growth and
/// small-u conditions.
GrowthReport check_growth(const EnergyModel& m, const ImpulsiveProblem& p,
                          const GrowthConditions& gc,
                          const std::vector<double>& t_samples,
                          const std::vector<double>& u_samples);

/// Scale the normalized direction by doubling until the energy drops below
/// -target_drop; at most 60 doublings. Throws NoDescentDirection.
GridFunction find_far_point(const EnergyModel& m, const ImpulsiveProblem& p,
                            const GridFunction& direction, double target_drop = 1.0);

struct PassOptions {
    double tol = 1e-6;       // gradient sup-norm target at the pass point
    int max_iters = 5000;
    int path_points = 41;
    double rho0 = 0.0;       // barrier radius for the sphere check; 0 = auto
    int sphere_samples = 64;
    std::uint64_t seed = 0;
    double armijo_c = 1e-4;
    double shrink = 0.5;
    double init_step = 1.0;
};

struct PassResult {
    GridFunction u_star;
    double energy_star = 0.0;
    double grad_norm = 0.0;
    std::vector<double> path_energies;   // final path profile
    std::vector<double> path_arclength;  // cumulative arc length of the path
    double rho0 = 0.0;                   // radius used for the barrier check
    int iterations = 0;
    std::vector<TraceRow> trace;
    std::vector<std::string> warnings;
};

/// Path deformation between u0 (low point) and u1 (far point). The path
/// maximum energy is non-increasing across iterations; the returned point is
/// Newton-polished to tol/100 when the tangent system permits. Throws
/// NoDescentDirection, DegeneratePath, NoConvergence.
PassResult mountain_pass(const EnergyModel& m, const ImpulsiveProblem& p,
                         const GridFunction& u0, const GridFunction& u1,
                         const PassOptions& opts = {});

/// Constants of the sphere barrier estimate (sampled, not certified).
struct BarrierEstimate {
    double rho0 = 0.0;
    double epsilon = 0.0;
    double C1 = 0.0;                // growth constant for f
    double C2 = 0.0;                // C1 / (s+1)
    std::vector<double> C1j, C2j;   // per impulse
};

/// Estimate the barrier radius rho0 from the norm-equivalence constant alpha,
/// the sup-norm embedding delta and sampled growth constants; +infinity when
/// all growth constants vanish. Throws EstimationFailed.
BarrierEstimate barrier_estimate(const EnergyModel& m, const ImpulsiveProblem& p,
                                 const GrowthConditions& gc);

/// Just the radius from barrier_estimate.
double barrier_radius(const EnergyModel& m, const ImpulsiveProblem& p,
                      const GrowthConditions& gc);

}  // namespace tsvar
