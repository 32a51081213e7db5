#pragma once

// Linear impulsive Dirichlet problem on a time-scale mesh:
//
//   -u^DeltaDelta(t) + lambda u^sigma(t) = h(t)        off impulse nodes
//    u^Delta(t_j^+) - u^Delta(t_j^-)    = d_j          at impulse nodes
//    u(a) = u(b) = 0
//
// solved in weak form: (K + lambda S) u = rhs with rhs_k = mu_{k-1} h_{k-1},
// minus d_j at impulse nodes. The associated quadratic energy is
//   phi(v) = 1/2 v·K·v + lambda/2 v·S·v - sum_i mu_i h_i v_{i+1} + sum_j d_j v_j,
// whose unique minimizer (for lambda > -lambda_1) is the weak solution.

#include <cstddef>
#include <vector>

#include "tsvar/report.hpp"
#include "tsvar/space.hpp"
#include "tsvar/timescale.hpp"

namespace tsvar {

struct NonCoercive : Error {
    double lambda, lambda1;
    NonCoercive(const std::string& what, double l, double l1)
        : Error(what), lambda(l), lambda1(l1) {}
};
struct SingularSystem : Error {
    using Error::Error;
};

struct LpImpulse {
    std::size_t node = 0;  // interior node index
    double d = 0.0;        // prescribed jump of u^Delta
};

struct LinearProblem {
    TimeScaleMesh mesh;
    double lambda = 0.0;
    GridFunction h;  // node values of the right-hand side
    std::vector<LpImpulse> impulses;
};

struct ClassicalCheck {
    double classical_residual = 0.0;
    std::vector<double> jump_errors;
};

/// Solve the weak problem on the (unweighted) space. For lambda < 0 the
/// coercivity bound lambda > -lambda_1 is enforced unless allow_noncoercive
/// (then a warning is recorded). Throws NonCoercive, SingularSystem,
/// MeshMismatch.
SolveReport solve_lp(const LinearProblem& p, const DirichletSpace& space,
                     bool allow_noncoercive = false, double tol = 1e-8);

/// Quadratic energy phi(u).
double energy_lp(const LinearProblem& p, const DirichletSpace& space,
                 const GridFunction& u);

/// Strong-form residual over non-impulse interior equations, and the jump
/// error |(u^Delta_j - u^Delta_{j-1}) - d_j| at each impulse node.
ClassicalCheck verify_classical(const LinearProblem& p, const GridFunction& u);

}  // namespace tsvar
