#include "tsvar/cli.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "tsvar/io.hpp"
#include "tsvar/linear.hpp"

namespace tsvar {

namespace {

std::string join(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

ImpulsiveProblem make_problem(const Config& cfg, const TimeScaleMesh& mesh,
                              const std::vector<std::size_t>& nodes) {
    ImpulsiveProblem p;
    p.mesh = mesh;
    p.lambda = cfg.lambda;
    p.f = cfg.f;
    p.g = cfg.g;
    p.jump_sign = effective_jump_sign(cfg);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        NonlinearImpulse imp;
        imp.node = nodes[i];
        imp.I = cfg.impulses[i].I.empty() ? Expr::literal(cfg.impulses[i].d)
                                          : cfg.impulses[i].I;
        p.impulses.push_back(std::move(imp));
    }
    return p;
}

void add_mesh_rows(ReportWriter& rw, const TimeScaleMesh& mesh) {
    rw.add("nodes", mesh.node_count());
    rw.add("gaps", mesh.gap_count());
    rw.add("t_start", mesh.a());
    rw.add("t_end", mesh.b());
}

void add_warning_rows(ReportWriter& rw, const std::vector<std::string>& warnings) {
    std::size_t i = 0;
    for (const auto& w : warnings) rw.add("warning." + std::to_string(i++), w);
}

void add_model_rows(ReportWriter& rw, const EnergyModel& m) {
    rw.add("lambda1", m.lambda1);
    rw.add("weight_min", m.weight_min);
    rw.add("weight_max", m.weight_max);
    rw.add("alpha", m.bound_alpha);
    rw.add("beta", m.bound_beta);
    rw.add("lambda_threshold", m.lambda_bound);
    rw.add("lambda_admissible", m.lambda_bound_ok);
    rw.add("delta_embedding",
           std::sqrt(m.space.mesh().length() / m.weight_min));
}

void add_jump_rows(ReportWriter& rw, const std::vector<double>& errs) {
    for (std::size_t j = 0; j < errs.size(); ++j)
        rw.add("jump_residual." + std::to_string(j), errs[j]);
}

void emit(const ReportWriter& rw, const std::string& out_dir, std::ostream& out) {
    for (const auto& [k, v] : rw.rows()) out << k << " = " << v << '\n';
    rw.save(join(out_dir, "report.txt"));
}

struct Tuning {
    double tol;
    int max_iters;
    bool newton;
    std::uint64_t seed;
    int path_points;
    double target_drop;
};

Tuning tuning(const RunOptions& opts, const Config& cfg, double default_tol,
              int default_iters) {
    Tuning t;
    t.tol = opts.tol.value_or(cfg.solver.tol.value_or(default_tol));
    t.max_iters = opts.max_iters.value_or(cfg.solver.max_iters.value_or(default_iters));
    t.newton = opts.newton || cfg.solver.newton;
    t.seed = opts.seed.value_or(cfg.solver.seed);
    t.path_points = cfg.solver.path_points.value_or(41);
    t.target_drop = cfg.solver.target_drop;
    return t;
}

void run_eigen(const RunOptions& opts, const Config& cfg,
               const TimeScaleMesh& mesh, std::ostream& out) {
    const Tuning t = tuning(opts, cfg, 1e-10, 10000);
    ReportWriter rw;
    rw.add("mode", std::string("eigen"));
    add_mesh_rows(rw, mesh);

    GridFunction weight;
    std::vector<std::string> warnings;
    if (cfg.g) {
        GridFunction gv(mesh.node_count(), 0.0);
        for (std::size_t i = 0; i < mesh.node_count(); ++i)
            gv[i] = cfg.g->eval(mesh.node(i), 0.0);
        ExpFnResult er = exp_fn(mesh, gv);
        weight = std::move(er.values);
        warnings = std::move(er.warnings);
        rw.add("weighted", true);
    } else {
        rw.add("weighted", false);
    }

    const DirichletSpace space = assemble(mesh, cfg.g ? &weight : nullptr);
    const SpectralInfo spec = smallest_eigenvalue(space, t.tol, t.max_iters);
    rw.add("lambda1", spec.lambda1);
    rw.add("iterations", spec.iterations);
    rw.add("residual", spec.residual);
    if (cfg.g) {
        rw.add("weight_min", space.weight_min());
        rw.add("weight_max", space.weight_max());
    }
    add_warning_rows(rw, warnings);

    write_solution_csv(join(opts.out_dir, "solution.csv"), mesh, spec.eigvec);
    write_plot_script(join(opts.out_dir, "plot.gp"), false, false);
    emit(rw, opts.out_dir, out);
}

void run_solve_linear(const RunOptions& opts, const Config& cfg,
                      const TimeScaleMesh& mesh,
                      const std::vector<std::size_t>& nodes, std::ostream& out) {
    const Tuning t = tuning(opts, cfg, 1e-8, 10000);

    LinearProblem p;
    p.mesh = mesh;
    p.lambda = cfg.lambda;
    p.h = GridFunction(mesh.node_count(), 0.0);
    for (std::size_t i = 0; i < mesh.node_count(); ++i)
        p.h[i] = cfg.h.eval(mesh.node(i), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        p.impulses.push_back({nodes[i], cfg.impulses[i].d});

    const DirichletSpace space = assemble(mesh);
    const SpectralInfo spec = smallest_eigenvalue(space);
    const SolveReport rep = solve_lp(p, space, opts.allow_noncoercive, t.tol);

    ReportWriter rw;
    rw.add("mode", std::string("solve-linear"));
    add_mesh_rows(rw, mesh);
    rw.add("lambda", cfg.lambda);
    rw.add("lambda1", spec.lambda1);
    rw.add("energy", rep.energy);
    rw.add("weak_residual", rep.weak_residual);
    rw.add("classical_residual", rep.classical_residual);
    add_jump_rows(rw, rep.jump_errors);
    rw.add("converged", rep.converged);
    add_warning_rows(rw, rep.warnings);

    write_solution_csv(join(opts.out_dir, "solution.csv"), mesh, rep.solution);
    write_plot_script(join(opts.out_dir, "plot.gp"), false, false);
    emit(rw, opts.out_dir, out);
}

void run_minimize(const RunOptions& opts, const Config& cfg,
                  const TimeScaleMesh& mesh,
                  const std::vector<std::size_t>& nodes, std::ostream& out) {
    const Tuning t = tuning(opts, cfg, 1e-8, 20000);
    const ImpulsiveProblem p = make_problem(cfg, mesh, nodes);
    const EnergyModel m = transform_np_to_npe(p);

    MinimizeOptions mo;
    mo.tol = t.tol;
    mo.max_iters = t.max_iters;
    mo.newton = t.newton;
    mo.seed = t.seed;
    const SolveReport rep = minimize(m, p, GridFunction(mesh.node_count(), 0.0), mo);

    ReportWriter rw;
    rw.add("mode", std::string("minimize"));
    add_mesh_rows(rw, mesh);
    rw.add("lambda", cfg.lambda);
    add_model_rows(rw, m);
    rw.add("jump_sign",
           std::string(p.jump_sign == JumpSign::Plus ? "plus" : "minus"));
    rw.add("newton", mo.newton);
    rw.add("energy", rep.energy);
    rw.add("grad_sup", rep.weak_residual);
    rw.add("equation_residual", rep.classical_residual);
    add_jump_rows(rw, rep.jump_errors);
    rw.add("iterations", rep.iterations);
    rw.add("converged", rep.converged);
    add_warning_rows(rw, m.warnings);
    add_warning_rows(rw, rep.warnings);

    write_solution_csv(join(opts.out_dir, "solution.csv"), mesh, rep.solution);
    write_trace_csv(join(opts.out_dir, "trace.csv"), rep.trace);
    write_plot_script(join(opts.out_dir, "plot.gp"), false, true);
    emit(rw, opts.out_dir, out);
}

void run_mountain_pass(const RunOptions& opts, const Config& cfg,
                       const TimeScaleMesh& mesh,
                       const std::vector<std::size_t>& nodes, std::ostream& out) {
    const Tuning t = tuning(opts, cfg, 1e-6, 5000);
    const ImpulsiveProblem p = make_problem(cfg, mesh, nodes);
    const EnergyModel m = transform_np_to_npe(p);
    const std::size_t n = mesh.node_count();

    ReportWriter rw;
    rw.add("mode", std::string("mountain-pass"));
    add_mesh_rows(rw, mesh);
    rw.add("lambda", cfg.lambda);
    add_model_rows(rw, m);
    rw.add("jump_sign",
           std::string(p.jump_sign == JumpSign::Plus ? "plus" : "minus"));

    // local minimizer near the origin
    MinimizeOptions mo;
    mo.tol = t.tol / 100.0;
    mo.max_iters = t.max_iters;
    mo.newton = t.newton;
    mo.seed = t.seed;
    const SolveReport min_rep = minimize(m, p, GridFunction(n, 0.0), mo);
    const GridFunction& u0 = min_rep.solution;

    // descent direction: the first impulse node's hat function engages the
    // impulse nonlinearity; otherwise the ground eigenvector
    GridFunction direction(n, 0.0);
    if (!nodes.empty())
        direction[nodes[0]] = 1.0;
    else
        direction = smallest_eigenvalue(m.space).eigvec;
    const GridFunction u1 = find_far_point(m, p, direction, t.target_drop);

    PassOptions po;
    po.tol = t.tol;
    po.max_iters = t.max_iters;
    po.path_points = t.path_points;
    po.seed = t.seed;
    std::vector<std::string> warnings;
    if (cfg.growth) {
        try {
            const BarrierEstimate est = barrier_estimate(m, p, *cfg.growth);
            rw.add("rho0_estimate", est.rho0);
            rw.add("barrier_epsilon", est.epsilon);
            if (std::isfinite(est.rho0) && est.rho0 > 0.0) po.rho0 = est.rho0;
        } catch (const EstimationFailed& e) {
            warnings.push_back(std::string("barrier estimate failed: ") + e.what());
        }
    }

    const PassResult res = mountain_pass(m, p, u0, u1, po);

    rw.add("rho0_used", res.rho0);
    rw.add("energy_u0", min_rep.energy);
    rw.add("energy_u1", energy(m, p, u1));
    rw.add("far_point_norm", h1_norm(m.space, u1));
    rw.add("energy_star", res.energy_star);
    rw.add("grad_sup", res.grad_norm);
    rw.add("equation_residual", np_residual(p, res.u_star));
    add_jump_rows(rw, jump_residuals(m, p, res.u_star));
    rw.add("iterations", res.iterations);
    add_warning_rows(rw, m.warnings);
    add_warning_rows(rw, warnings);
    add_warning_rows(rw, res.warnings);

    write_solution_csv(join(opts.out_dir, "solution.csv"), mesh, res.u_star);
    write_solution_csv(join(opts.out_dir, "u0.csv"), mesh, u0);
    write_solution_csv(join(opts.out_dir, "u1.csv"), mesh, u1);
    write_path_csv(join(opts.out_dir, "path.csv"), res.path_arclength,
                   res.path_energies);
    write_trace_csv(join(opts.out_dir, "trace.csv"), res.trace);
    write_plot_script(join(opts.out_dir, "plot.gp"), true, true);
    emit(rw, opts.out_dir, out);
}

void run_check(const RunOptions& opts, const Config& cfg,
               const TimeScaleMesh& mesh,
               const std::vector<std::size_t>& nodes, std::ostream& out) {
    const ImpulsiveProblem p = make_problem(cfg, mesh, nodes);
    const EnergyModel m = transform_np_to_npe(p);
    const GrowthConditions gc = *cfg.growth;

    ReportWriter rw;
    rw.add("mode", std::string("check-conditions"));
    add_mesh_rows(rw, mesh);
    rw.add("lambda", cfg.lambda);
    add_model_rows(rw, m);
    rw.add("eta", gc.eta);
    rw.add("gamma", gc.gamma);
    rw.add("s", gc.s);

    // sample magnitudes gamma * 10^[-4, 4], both signs
    std::vector<double> u_samples;
    for (int k = 0; k <= 40; ++k) {
        const double mag = gc.gamma * std::pow(10.0, (k - 20) / 5.0);
        u_samples.push_back(mag);
        u_samples.push_back(-mag);
    }
    const GrowthReport rep = check_growth(m, p, gc, mesh.nodes(), u_samples);
    for (const auto& c : rep.checks) {
        std::string v = std::string(c.passed ? "pass" : "FAIL") +
                        " (value = " + format_double(c.value) + ")";
        if (!c.note.empty()) v += " [" + c.note + "]";
        rw.add(std::string("check.") + c.name, v);
    }
    rw.add("superquadratic_margin", rep.h1_margin_f);
    rw.add("min_eta_F", rep.h1_min_etaF);
    rw.add("all_passed", rep.all_passed());

    try {
        const BarrierEstimate est = barrier_estimate(m, p, gc);
        rw.add("epsilon", est.epsilon);
        rw.add("C1", est.C1);
        rw.add("C2", est.C2);
        for (std::size_t j = 0; j < est.C1j.size(); ++j)
            rw.add("C1_impulse." + std::to_string(j), est.C1j[j]);
        rw.add("rho0", est.rho0);

        // spot-check the primitive bound |F| <= eps/2 u^2 + C2 |u|^{s+1}
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 15; ++k) {
            const double mag = gc.gamma * std::pow(10.0, k / 5.0);
            for (double u : {mag, -mag}) {
                const double cap = 0.5 * est.epsilon * u * u +
                                   est.C2 * std::pow(std::fabs(u), gc.s + 1.0);
                for (double tt : mesh.nodes()) {
                    const double F =
                        antiderivative(p.f, tt, u, m.quadrature_order);
                    worst = std::max(worst, (std::fabs(F) - cap) / cap);
                }
            }
        }
        rw.add("primitive_bound_margin", worst);
        rw.add("primitive_bound",
               std::string(worst <= 1e-9 ? "pass" : "FAIL"));
    } catch (const EstimationFailed& e) {
        rw.add("barrier_estimate", std::string("failed: ") + e.what());
    }

    add_warning_rows(rw, m.warnings);
    emit(rw, opts.out_dir, out);
}

}  // namespace

int run_cli(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const Config cfg = load_config_file(opts.config_path);
        validate_for_mode(cfg, opts.mode);
        const TimeScaleMesh mesh = build_mesh(cfg.timescale);
        const std::vector<std::size_t> nodes = resolve_impulse_nodes(cfg, mesh);
        std::filesystem::create_directories(opts.out_dir);

        switch (opts.mode) {
            case RunMode::Eigen:
                run_eigen(opts, cfg, mesh, out);
                break;
            case RunMode::SolveLinear:
                run_solve_linear(opts, cfg, mesh, nodes, out);
                break;
            case RunMode::Minimize:
                run_minimize(opts, cfg, mesh, nodes, out);
                break;
            case RunMode::MountainPass:
                run_mountain_pass(opts, cfg, mesh, nodes, out);
                break;
            case RunMode::CheckConditions:
                run_check(opts, cfg, mesh, nodes, out);
                break;
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const OverlappingSegments& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const TooFewPoints& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NotRegressive& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NonPositiveWeight& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "output error: " << e.what() << '\n';
        return 2;
    } catch (const NoConvergence& e) {
        err << "solver failure: " << e.what() << " (after " << e.iterations
            << " iterations)" << '\n';
        return 3;
    } catch (const Error& e) {
        err << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace tsvar
