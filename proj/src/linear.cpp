#include "tsvar/linear.hpp"

#include <cmath>
#include <stdexcept>

#include "tsvar/kernels.hpp"
#include "tsvar/tridiag.hpp"

namespace tsvar {

namespace {

void validate(const LinearProblem& p, const DirichletSpace& space) {
    if (!(space.mesh() == p.mesh))
        throw MeshMismatch("problem mesh and space mesh differ");
    if (space.weighted())
        throw std::invalid_argument("the linear problem uses the unweighted space");
    if (p.h.size() != p.mesh.node_count())
        throw MeshMismatch("right-hand side size does not match mesh");
    for (const LpImpulse& imp : p.impulses)
        if (imp.node == 0 || imp.node >= p.mesh.node_count() - 1)
            throw IndexOutOfRange("impulse node must be interior");
}

std::vector<double> interior_rhs(const LinearProblem& p) {
    const std::size_t m = p.mesh.node_count() - 2;
    std::vector<double> rhs(m, 0.0);
    const auto& mu = p.mesh.graininess();
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = j + 1;
        rhs[j] = mu[k - 1] * p.h[k - 1];
    }
    for (const LpImpulse& imp : p.impulses) rhs[imp.node - 1] -= imp.d;
    return rhs;
}

}  // namespace

SolveReport solve_lp(const LinearProblem& p, const DirichletSpace& space,
                     bool allow_noncoercive, double tol) {
    validate(p, space);
    SolveReport rep;

    if (p.lambda < 0.0) {
        const SpectralInfo sp = smallest_eigenvalue(space);
        if (p.lambda <= -sp.lambda1) {
            if (!allow_noncoercive)
                throw NonCoercive("lambda <= -lambda_1: the form is not coercive",
                                  p.lambda, sp.lambda1);
            rep.warnings.push_back("coercivity bound violated: lambda <= -lambda_1");
        }
    }
    for (const LpImpulse& imp : p.impulses) {
        if (p.mesh.origin(imp.node) == GapOrigin::Scattered)
            rep.warnings.push_back("impulse node " + std::to_string(imp.node) +
                                   " is not right-dense");
    }

    std::vector<double> lower, diag, upper;
    space.interior_system(p.lambda, lower, diag, upper);
    const TridiagFactor fac = tridiag_factor(lower, diag, upper);
    if (fac.singular) throw SingularSystem("interior system is singular");

    std::vector<double> x = interior_rhs(p);
    tridiag_solve(fac, x);

    const std::size_t n = p.mesh.node_count();
    rep.solution = GridFunction(n, 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) rep.solution[j + 1] = x[j];

    // weak residual: sup over interior basis directions of |a(u, e_k) - l(e_k)|
    GridFunction au(n, 0.0);
    space.apply(p.lambda, rep.solution, au);
    const std::vector<double> rhs = interior_rhs(p);
    double wres = 0.0;
    for (std::size_t j = 0; j < rhs.size(); ++j)
        wres = std::max(wres, std::fabs(au[j + 1] - rhs[j]));
    rep.weak_residual = wres;

    const ClassicalCheck cc = verify_classical(p, rep.solution);
    rep.classical_residual = cc.classical_residual;
    rep.jump_errors = cc.jump_errors;
    rep.energy = energy_lp(p, space, rep.solution);
    rep.iterations = 1;
    rep.converged = rep.weak_residual <= tol;
    return rep;
}

double energy_lp(const LinearProblem& p, const DirichletSpace& space,
                 const GridFunction& u) {
    validate(p, space);
    const double quad = 0.5 * space.stiffness_form(u) +
                        0.5 * p.lambda * space.sigma_mass_form(u);
    // load: sum_i mu_i h_i u_{i+1} — the mass coefficients are exactly mu_i here
    const double load = kernels::dot3(space.mass_coeff().data(), p.h.data(),
                                      u.data() + 1, space.mass_coeff().size());
    double impulse_term = 0.0;
    for (const LpImpulse& imp : p.impulses) impulse_term += imp.d * u[imp.node];
    return quad - load + impulse_term;
}

ClassicalCheck verify_classical(const LinearProblem& p, const GridFunction& u) {
    if (u.size() != p.mesh.node_count())
        throw MeshMismatch("grid function size does not match mesh");
    ClassicalCheck out;
    const std::size_t N = p.mesh.gap_count();
    const auto& mu = p.mesh.graininess();

    std::vector<double> ud(N);
    for (std::size_t i = 0; i < N; ++i) ud[i] = (u[i + 1] - u[i]) / mu[i];

    std::vector<bool> impulse_node(p.mesh.node_count(), false);
    for (const LpImpulse& imp : p.impulses) impulse_node[imp.node] = true;

    // equation centered at node i+1, using u at nodes i, i+1, i+2
    for (std::size_t i = 0; i + 1 < N; ++i) {
        if (impulse_node[i + 1]) continue;
        const double uddelta = (ud[i + 1] - ud[i]) / mu[i];
        const double res = -uddelta + p.lambda * u[i + 1] - p.h[i];
        out.classical_residual = std::max(out.classical_residual, std::fabs(res));
    }
    for (const LpImpulse& imp : p.impulses) {
        const std::size_t j = imp.node;
        out.jump_errors.push_back(std::fabs((ud[j] - ud[j - 1]) - imp.d));
    }
    return out;
}

}  // namespace tsvar
