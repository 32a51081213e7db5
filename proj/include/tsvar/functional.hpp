#pragma once

// Energy functional machinery for the nonlinear impulsive problem
//
//   -u^DeltaDelta - g(t) u^Delta(sigma(t)) + lambda u^sigma = f(t, u^sigma)
//   jump of u^Delta at t_j prescribed by I_j(u(t_j))   (sign convention below)
//   u(a) = u(b) = 0.
//
// Multiplying by the exponential weight w = e_g(., a) puts the equation in
// divergence form -(w u^Delta)^Delta + lambda w u^sigma = w f; with g absent
// the weight is identically 1. The associated energy on the weighted space is
//
//   E(u) = 1/2 u·K_w·u + lambda/2 u·S_w·u
//          + sign · sum_j w_j \int_0^{u_j} I_j(s) ds
//          - sum_i w_i mu_i F(t_i, u_{i+1}),     F(t,v) = \int_0^v f(t,x) dx
//
// where sign = +1 when the jump convention is  u^D(t+) - u^D(t-) = I_j and
// -1 when it is  -(u^D(t+) - u^D(t-)) = I_j. Critical points of E are weak
// solutions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsvar/expr.hpp"
#include "tsvar/report.hpp"
#include "tsvar/space.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

struct LineSearchStall : Error {
    using Error::Error;
};

enum class JumpSign {
    Plus,   // u^Delta(t_j^+) - u^Delta(t_j^-) = I_j(u(t_j))
    Minus,  // -(u^Delta(t_j^+) - u^Delta(t_j^-)) = I_j(u(t_j))
};

struct NonlinearImpulse {
    std::size_t node = 0;
    Expr I;  // impulse size as a function of u
};

struct ImpulsiveProblem {
    TimeScaleMesh mesh;
    double lambda = 0.0;
    Expr f;                        // right-hand side f(t, u)
    std::vector<NonlinearImpulse> impulses;
    std::optional<Expr> g;         // drift generator (t only); empty = none
    JumpSign jump_sign = JumpSign::Plus;
};

/// Weighted variational model of the problem.
struct EnergyModel {
    DirichletSpace space;          // weighted by e_g (all-ones when g absent)
    GridFunction weight;           // e_g at the nodes
    double weight_min = 1.0;       // m
    double weight_max = 1.0;       // M
    double lambda1 = 0.0;          // smallest unweighted eigenvalue
    double lambda_bound = 0.0;     // admissibility threshold -m lambda_1 / M
    bool lambda_bound_ok = true;
    double bound_alpha = 1.0;      // alpha ||u||^2 <= A(u,u) <= beta ||u||^2
    double bound_beta = 1.0;
    int quadrature_order = 8;
    std::vector<std::string> warnings;
};

/// Build the weighted model: weight from exp_fn(g), equivalence constants
/// alpha/beta from lambda_1, m, M. Violating lambda > -m lambda_1 / M is a
/// warning, not an error. Throws NotRegressive / NonPositiveWeight.
EnergyModel transform_np_to_npe(const ImpulsiveProblem& p, int quadrature_order = 8);

/// Signed primitive \int_0^u e(t, x) dx by Gauss-Legendre quadrature with
/// `order` points (exact for polynomial integrands of degree <= 2*order-1).
double antiderivative(const Expr& e, double t, double u, int order = 8);

/// Energy E(u); requires u_0 = u_N = 0.
double energy(const EnergyModel& m, const ImpulsiveProblem& p, const GridFunction& u);

/// Gradient of E w.r.t. the node values (boundary entries 0). Its sup-norm is
/// the weak-form residual over the coordinate basis.
GridFunction gradient(const EnergyModel& m, const ImpulsiveProblem& p,
                      const GridFunction& u);

struct MinimizeOptions {
    double tol = 1e-8;        // stop when the gradient sup-norm drops below
    int max_iters = 20000;
    bool newton = false;      // Newton direction with fallback to steepest descent
    double armijo_c = 1e-4;
    double shrink = 0.5;
    double init_step = 1.0;
    std::uint64_t seed = 0;   // reserved for randomized options
};

/// Armijo-backtracking descent (optionally Newton). Deterministic for a fixed
/// start. Throws NoConvergence or LineSearchStall.
SolveReport minimize(const EnergyModel& m, const ImpulsiveProblem& p,
                     GridFunction u_init, const MinimizeOptions& opts = {});

/// Strong-form residual of the drift equation at non-impulse interior
/// equations (exactly the expansion of the divergence form).
double np_residual(const ImpulsiveProblem& p, const GridFunction& u);

/// Per-impulse mismatch |observed jump - I_j(u_j)| under the configured sign
/// convention (the minus convention compares the weighted-derivative jump).
std::vector<double> jump_residuals(const EnergyModel& m, const ImpulsiveProblem& p,
                                   const GridFunction& u);

}  // namespace tsvar
