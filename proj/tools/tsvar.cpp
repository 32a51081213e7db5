#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tsvar/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "tsvar - variational solver for impulsive Dirichlet problems on "
        "time-scale meshes"};
    app.require_subcommand(1);

    std::string config, out_dir = ".";
    double tol = 0.0;
    int max_iters = 0;
    long long seed = -1;
    bool allow_noncoercive = false, newton = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config, "problem description file")
            ->required();
        sub->add_option("-o,--out", out_dir, "output directory (default: .)");
        sub->add_option("--tol", tol, "solver tolerance override");
        sub->add_option("--max-iters", max_iters, "iteration cap override");
        sub->add_option("--seed", seed, "randomization seed override");
        sub->add_flag("--newton", newton, "use Newton directions when possible");
        sub->add_flag("--allow-noncoercive", allow_noncoercive,
                      "proceed when lambda <= -lambda1 (linear solve)");
    };

    auto* sc_eigen = app.add_subcommand(
        "eigen", "smallest eigenvalue and ground mode of the form pencil");
    auto* sc_linear = app.add_subcommand(
        "solve-linear", "direct solve of the linear problem with constant jumps");
    auto* sc_min = app.add_subcommand(
        "minimize", "descend the energy functional to a local minimizer");
    auto* sc_pass = app.add_subcommand(
        "mountain-pass", "path deformation search for a second critical point");
    auto* sc_check = app.add_subcommand(
        "check-conditions", "test growth hypotheses and estimate the barrier");
    for (auto* sub : {sc_eigen, sc_linear, sc_min, sc_pass, sc_check})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    tsvar::RunOptions opts;
    if (sc_eigen->parsed())
        opts.mode = tsvar::RunMode::Eigen;
    else if (sc_linear->parsed())
        opts.mode = tsvar::RunMode::SolveLinear;
    else if (sc_min->parsed())
        opts.mode = tsvar::RunMode::Minimize;
    else if (sc_pass->parsed())
        opts.mode = tsvar::RunMode::MountainPass;
    else
        opts.mode = tsvar::RunMode::CheckConditions;
    opts.config_path = config;
    opts.out_dir = out_dir;
    if (tol > 0.0) opts.tol = tol;
    if (max_iters > 0) opts.max_iters = max_iters;
    if (seed >= 0) opts.seed = static_cast<std::uint64_t>(seed);
    opts.allow_noncoercive = allow_noncoercive;
    opts.newton = newton;

    return tsvar::run_cli(opts, std::cout, std::cerr);
}
