#include "tsvar/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "tsvar/kernels.hpp"
#include "tsvar/tridiag.hpp"

namespace tsvar {

namespace {

double impulse_sign(JumpSign js) { return js == JumpSign::Plus ? +1.0 : -1.0; }

void require_dirichlet(const GridFunction& u) {
    if (u.values.front() != 0.0 || u.values.back() != 0.0)
        throw BoundaryViolation("grid function must vanish at both boundary nodes");
}

void validate(const EnergyModel& m, const ImpulsiveProblem& p, const GridFunction& u) {
    if (!(m.space.mesh() == p.mesh))
        throw MeshMismatch("model mesh and problem mesh differ");
    if (u.size() != p.mesh.node_count())
        throw MeshMismatch("grid function size does not match mesh");
    if (p.f.empty()) throw Error("problem has no right-hand side f");
    for (const auto& imp : p.impulses)
        if (imp.node == 0 || imp.node >= p.mesh.node_count() - 1)
            throw IndexOutOfRange("impulse node must be interior");
    require_dirichlet(u);
}

// Gauss-Legendre nodes/weights on [-1, 1], cached per order. Roots of the
// Legendre polynomial by Newton iteration on the three-term recurrence.
struct GaussRule {
    std::vector<double> x, w;
};

const GaussRule& gauss_rule(int order) {
    if (order < 1 || order > 64) throw Error("quadrature order must be in [1, 64]");
    static std::map<int, GaussRule> cache;
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    const int n = order;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

}  // namespace

double antiderivative(const Expr& e, double t, double u, int order) {
    if (e.empty()) throw Error("antiderivative of an empty expression");
    if (u == 0.0) return 0.0;
    const GaussRule& rule = gauss_rule(order);
    const double half = 0.5 * u;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
        s += rule.w[i] * e.eval(t, half * (rule.x[i] + 1.0));
    return half * s;
}

EnergyModel transform_np_to_npe(const ImpulsiveProblem& p, int quadrature_order) {
    EnergyModel m;
    m.quadrature_order = quadrature_order;

    if (p.g.has_value()) {
        GridFunction gv(p.mesh.node_count(), 0.0);
        for (std::size_t i = 0; i < gv.size(); ++i)
            gv[i] = p.g->eval(p.mesh.node(i), 0.0);
        ExpFnResult er = exp_fn(p.mesh, gv);
        m.weight = er.values;
        m.weight_min = er.min_value;
        m.weight_max = er.max_value;
        for (auto& w : er.warnings) m.warnings.push_back(std::move(w));
        m.space = assemble(p.mesh, &m.weight);
    } else {
        m.weight = GridFunction(p.mesh.node_count(), 1.0);
        m.space = assemble(p.mesh, &m.weight);
    }

    // admissibility and norm-equivalence constants use the unweighted pencil
    const DirichletSpace plain = assemble(p.mesh);
    m.lambda1 = smallest_eigenvalue(plain).lambda1;
    m.lambda_bound = -m.weight_min * m.lambda1 / m.weight_max;
    m.lambda_bound_ok = p.lambda > m.lambda_bound;
    if (!m.lambda_bound_ok)
        m.warnings.push_back("lambda <= -m*lambda_1/M: energy may be unbounded below "
                             "or degenerate; proceeding anyway");

    const double shift = p.lambda * m.weight_max / (m.lambda1 * m.weight_min);
    if (p.lambda >= 0.0) {
        m.bound_alpha = 1.0;
        m.bound_beta = 1.0 + shift;
    } else {
        m.bound_alpha = 1.0 + shift;
        m.bound_beta = 1.0;
    }

    for (const auto& imp : p.impulses) {
        if (imp.node == 0 || imp.node >= p.mesh.node_count() - 1)
            throw IndexOutOfRange("impulse node must be interior");
        if (p.mesh.origin(imp.node) == GapOrigin::Scattered)
            m.warnings.push_back("impulse node " + std::to_string(imp.node) +
                                 " is not right-dense");
    }
    return m;
}

double energy(const EnergyModel& m, const ImpulsiveProblem& p, const GridFunction& u) {
    validate(m, p, u);
    double e = 0.5 * m.space.stiffness_form(u) +
               0.5 * p.lambda * m.space.sigma_mass_form(u);

    const double sign = impulse_sign(p.jump_sign);
    for (const auto& imp : p.impulses)
        e += sign * m.weight[imp.node] *
             antiderivative(imp.I, p.mesh.node(imp.node), u[imp.node],
                            m.quadrature_order);

    const auto& mass = m.space.mass_coeff();  // w_i * mu_i
    for (std::size_t i = 0; i < mass.size(); ++i)
        e -= mass[i] * antiderivative(p.f, p.mesh.node(i), u[i + 1],
                                      m.quadrature_order);
    return e;
}

GridFunction gradient(const EnergyModel& m, const ImpulsiveProblem& p,
                      const GridFunction& u) {
    validate(m, p, u);
    GridFunction grad(u.size(), 0.0);
    m.space.apply(p.lambda, u, grad);

    const auto& mass = m.space.mass_coeff();
    for (std::size_t k = 1; k + 1 < u.size(); ++k)
        grad[k] -= mass[k - 1] * p.f.eval(p.mesh.node(k - 1), u[k]);

    const double sign = impulse_sign(p.jump_sign);
    for (const auto& imp : p.impulses)
        grad[imp.node] += sign * m.weight[imp.node] *
                          imp.I.eval(p.mesh.node(imp.node), u[imp.node]);
    return grad;
}

namespace {

// Tangent (second derivative) of the energy restricted to the interior nodes.
// Returns false when f or some impulse is not differentiable.
bool tangent_system(const EnergyModel& m, const ImpulsiveProblem& p,
                    const GridFunction& u, const Expr& fu,
                    const std::vector<Expr>& Iu, std::vector<double>& lower,
                    std::vector<double>& diag, std::vector<double>& upper) {
    m.space.interior_system(p.lambda, lower, diag, upper);
    const auto& mass = m.space.mass_coeff();
    for (std::size_t j = 0; j < diag.size(); ++j) {
        const std::size_t k = j + 1;
        diag[j] -= mass[k - 1] * fu.eval(p.mesh.node(k - 1), u[k]);
    }
    const double sign = impulse_sign(p.jump_sign);
    for (std::size_t a = 0; a < p.impulses.size(); ++a) {
        const auto& imp = p.impulses[a];
        diag[imp.node - 1] += sign * m.weight[imp.node] *
                              Iu[a].eval(p.mesh.node(imp.node), u[imp.node]);
    }
    return true;
}

double energy_or_inf(const EnergyModel& m, const ImpulsiveProblem& p,
                     const GridFunction& u) {
    try {
        return energy(m, p, u);
    } catch (const EvalError&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

SolveReport minimize(const EnergyModel& m, const ImpulsiveProblem& p,
                     GridFunction u_init, const MinimizeOptions& opts) {
    validate(m, p, u_init);
    SolveReport rep;

    bool use_newton = opts.newton;
    Expr fu;
    std::vector<Expr> Iu;
    if (use_newton) {
        try {
            fu = p.f.diff_u();
            for (const auto& imp : p.impulses) Iu.push_back(imp.I.diff_u());
        } catch (const NotDifferentiable&) {
            use_newton = false;
            rep.warnings.push_back(
                "f or an impulse is not differentiable; Newton disabled");
        }
    }

    const std::size_t n = u_init.size();
    const std::size_t mdof = n - 2;
    GridFunction u = std::move(u_init);
    double phi = energy(m, p, u);
    double last_step = 0.0;
    std::vector<double> lower, diag, upper;

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        const GridFunction g = gradient(m, p, u);
        const double gn = kernels::sup_norm(g.data(), n);
        rep.trace.push_back({iter, phi, gn, last_step});

        if (gn < opts.tol) {
            rep.converged = true;
            rep.iterations = iter;
            break;
        }

        // direction
        GridFunction d(n, 0.0);
        bool have_newton_dir = false;
        if (use_newton) {
            tangent_system(m, p, u, fu, Iu, lower, diag, upper);
            if (tridiag_positive_definite(diag, upper)) {
                const TridiagFactor fac = tridiag_factor(lower, diag, upper);
                if (!fac.singular) {
                    std::vector<double> rhs(mdof);
                    for (std::size_t j = 0; j < mdof; ++j) rhs[j] = -g[j + 1];
                    tridiag_solve(fac, rhs);
                    for (std::size_t j = 0; j < mdof; ++j) d[j + 1] = rhs[j];
                    have_newton_dir = true;
                }
            }
        }
        if (!have_newton_dir)
            for (std::size_t k = 1; k + 1 < n; ++k) d[k] = -g[k];

        double gtd = kernels::dot(g.data(), d.data(), n);
        if (!(gtd < 0.0)) {  // not a descent direction; fall back
            for (std::size_t k = 1; k + 1 < n; ++k) d[k] = -g[k];
            gtd = kernels::dot(g.data(), d.data(), n);
        }

        // Armijo backtracking with a small absolute allowance for rounding in
        // the energy near convergence
        double step = opts.init_step;
        const double allowance = 1e-15 * (1.0 + std::fabs(phi));
        GridFunction trial(n, 0.0);
        bool accepted = false;
        while (step > 1e-20) {
            trial = u;
            kernels::axpy(step, d.data(), trial.data(), n);
            trial[0] = 0.0;
            trial[n - 1] = 0.0;
            const double phi_trial = energy_or_inf(m, p, trial);
            if (phi_trial <= phi + opts.armijo_c * step * gtd + allowance) {
                u = trial;
                phi = phi_trial;
                last_step = step;
                accepted = true;
                break;
            }
            step *= opts.shrink;
        }
        if (!accepted)
            throw LineSearchStall("line search failed to make progress at iteration " +
                                  std::to_string(iter));
        if (iter == opts.max_iters)
            throw NoConvergence("descent did not reach tolerance", opts.max_iters);
    }

    rep.solution = u;
    rep.energy = phi;
    const GridFunction g = gradient(m, p, u);
    rep.weak_residual = kernels::sup_norm(g.data(), n);
    rep.iterations = static_cast<int>(rep.trace.size());

    // diagnostics: strong residual and impulse jump mismatches
    rep.classical_residual = np_residual(p, u);
    rep.jump_errors = jump_residuals(m, p, u);
    return rep;
}

double np_residual(const ImpulsiveProblem& p, const GridFunction& u) {
    if (u.size() != p.mesh.node_count())
        throw MeshMismatch("grid function size does not match mesh");
    if (p.f.empty()) throw Error("problem has no right-hand side f");

    const std::size_t N = p.mesh.gap_count();
    const auto& mu = p.mesh.graininess();
    std::vector<double> ud(N);
    for (std::size_t i = 0; i < N; ++i) ud[i] = (u[i + 1] - u[i]) / mu[i];

    std::vector<bool> impulse_node(p.mesh.node_count(), false);
    for (const auto& imp : p.impulses) impulse_node[imp.node] = true;

    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        if (impulse_node[i + 1]) continue;
        const double t = p.mesh.node(i);
        const double uddelta = (ud[i + 1] - ud[i]) / mu[i];
        const double gi = p.g.has_value() ? p.g->eval(t, 0.0) : 0.0;
        const double res =
            -uddelta - gi * ud[i + 1] + p.lambda * u[i + 1] - p.f.eval(t, u[i + 1]);
        worst = std::max(worst, std::fabs(res));
    }
    return worst;
}

std::vector<double> jump_residuals(const EnergyModel& m, const ImpulsiveProblem& p,
                                   const GridFunction& u) {
    validate(m, p, u);
    const auto& mu = p.mesh.graininess();
    std::vector<double> errs;
    for (const auto& imp : p.impulses) {
        const std::size_t j = imp.node;
        const double ud_left = (u[j] - u[j - 1]) / mu[j - 1];
        const double ud_right = (u[j + 1] - u[j]) / mu[j];
        double jump;
        if (p.jump_sign == JumpSign::Plus) {
            jump = ud_right - ud_left;
        } else {
            jump = -(m.weight[j] * ud_right - m.weight[j - 1] * ud_left) / m.weight[j];
        }
        errs.push_back(std::fabs(jump - imp.I.eval(p.mesh.node(j), u[j])));
    }
    return errs;
}

}  // namespace tsvar
