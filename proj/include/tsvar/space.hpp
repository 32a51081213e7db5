#pragma once

// Discrete H^1_0 space on a time-scale mesh with homogeneous Dirichlet
// conditions, optionally weighted by a positive node function w:
//
//   stiffness form   u·K_w·u = sum_i w_i * mu_i * ((u_{i+1}-u_i)/mu_i)^2
//   sigma-mass form  u·S_w·u = sum_i w_i * mu_i * u_{i+1}^2
//
// (weights taken at the left endpoint of each gap). K is tridiagonal on the
// interior nodes, S is diagonal in the shifted values. The smallest
// eigenvalue lambda_1 of K v = lambda S v gives the sharp Wirtinger-type
// inequality (1/lambda_1) u·K·u >= u·S·u.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tsvar/timescale.hpp"

namespace tsvar {

struct NonPositiveWeight : Error {
    using Error::Error;
};
struct BoundaryViolation : Error {
    using Error::Error;
};

class DirichletSpace {
public:
    const TimeScaleMesh& mesh() const { return mesh_; }
    bool weighted() const { return weighted_; }

    /// Node values of the weight (all 1 for the unweighted space).
    const GridFunction& weight() const { return weight_; }
    double weight_min() const { return wmin_; }
    double weight_max() const { return wmax_; }

    /// u·K_w·u (throws BoundaryViolation unless u_0 = u_N = 0).
    double stiffness_form(const GridFunction& u) const;
    /// u·S_w·u.
    double sigma_mass_form(const GridFunction& u) const;
    /// Bilinear a(u,v) = v·(K_w + lambda S_w)·u for the same boundary class.
    double bilinear(double lambda, const GridFunction& u, const GridFunction& v) const;

    /// out = (K_w + lambda S_w) u over all nodes; boundary rows are 0.
    void apply(double lambda, const GridFunction& u, GridFunction& out) const;

    /// Interior tridiagonal rows of K_w + lambda S_w (size node_count()-2).
    void interior_system(double lambda, std::vector<double>& lower,
                         std::vector<double>& diag, std::vector<double>& upper) const;
    /// Interior diagonal of S_w.
    void interior_mass(std::vector<double>& diag) const;

    /// Per-gap coefficients w_i/mu_i and w_i*mu_i.
    const std::vector<double>& stiff_coeff() const { return stiff_coeff_; }
    const std::vector<double>& mass_coeff() const { return mass_coeff_; }

private:
    friend DirichletSpace assemble(const TimeScaleMesh&, const GridFunction*);
    TimeScaleMesh mesh_;
    GridFunction weight_;
    std::vector<double> stiff_coeff_;  // w_i / mu_i
    std::vector<double> mass_coeff_;   // w_i * mu_i
    double wmin_ = 1.0, wmax_ = 1.0;
    bool weighted_ = false;
};

/// Assemble the space; `weight` (node values, all > 0) may be null for the
/// unweighted space. Throws NonPositiveWeight or MeshMismatch.
DirichletSpace assemble(const TimeScaleMesh& mesh, const GridFunction* weight = nullptr);

/// sqrt(u·K_w·u); the norm of the space.
double h1_norm(const DirichletSpace& space, const GridFunction& u);

struct SpectralInfo {
    double lambda1 = 0.0;
    GridFunction eigvec;       // normalized so eigvec·S_w·eigvec = 1
    int iterations = 0;
    double residual = 0.0;     // relative eigen-residual at exit
};

/// Smallest eigenvalue of the pencil K_w v = lambda S_w v by inverse power
/// iteration (deterministic all-ones start, Rayleigh quotient estimate).
/// Converged when ||K v - lambda S v|| <= tol * |lambda| * ||S v||.
SpectralInfo smallest_eigenvalue(const DirichletSpace& space, double tol = 1e-10,
                                 int max_iters = 10000);

/// (1/lambda_1) u·K_w·u - u·S_w·u; nonnegative for Dirichlet u.
double wirtinger_gap(const DirichletSpace& space, const SpectralInfo& spectral,
                     const GridFunction& u);

struct EmbeddingConstants {
    double delta = 0.0;  // certified: ||u||_inf <= delta * h1_norm(u)
    double k_emp = 0.0;  // empirical max of ||u||_inf / h1_norm(u) over samples
};

/// delta = sqrt(length / min weight) and an empirical check of the sup-norm
/// embedding over `samples` random Dirichlet functions.
EmbeddingConstants embedding_constants(const DirichletSpace& space,
                                       int samples = 1000, std::uint64_t seed = 1);

}  // namespace tsvar
