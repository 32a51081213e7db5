#include "tsvar/space.hpp"

#include <cmath>
#include <random>

#include "tsvar/kernels.hpp"
#include "tsvar/tridiag.hpp"

namespace tsvar {

namespace {

void require_dirichlet(const GridFunction& u) {
    if (u.values.front() != 0.0 || u.values.back() != 0.0)
        throw BoundaryViolation("grid function must vanish at both boundary nodes");
}

void require_size(const DirichletSpace& s, const GridFunction& u) {
    if (u.size() != s.mesh().node_count())
        throw MeshMismatch("grid function size does not match mesh");
}

}  // namespace

DirichletSpace assemble(const TimeScaleMesh& mesh, const GridFunction* weight) {
    DirichletSpace s;
    s.mesh_ = mesh;
    const std::size_t n = mesh.gap_count();
    if (weight) {
        if (weight->size() != mesh.node_count())
            throw MeshMismatch("weight size does not match mesh");
        for (std::size_t i = 0; i < weight->size(); ++i)
            if (!((*weight)[i] > 0.0))
                throw NonPositiveWeight("weight must be positive at every node");
        s.weight_ = *weight;
        s.weighted_ = true;
        s.wmin_ = s.wmax_ = s.weight_[0];
        for (std::size_t i = 1; i < s.weight_.size(); ++i) {
            s.wmin_ = std::min(s.wmin_, s.weight_[i]);
            s.wmax_ = std::max(s.wmax_, s.weight_[i]);
        }
    } else {
        s.weight_ = GridFunction(mesh.node_count(), 1.0);
    }
    s.stiff_coeff_.resize(n);
    s.mass_coeff_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = mesh.graininess(i);
        s.stiff_coeff_[i] = s.weight_[i] / mu;
        s.mass_coeff_[i] = s.weight_[i] * mu;
    }
    return s;
}

double DirichletSpace::stiffness_form(const GridFunction& u) const {
    require_size(*this, u);
    require_dirichlet(u);
    return kernels::diff_quad_form(u.data(), stiff_coeff_.data(), stiff_coeff_.size());
}

double DirichletSpace::sigma_mass_form(const GridFunction& u) const {
    require_size(*this, u);
    require_dirichlet(u);
    return kernels::shift_quad_form(u.data(), mass_coeff_.data(), mass_coeff_.size());
}

double DirichletSpace::bilinear(double lambda, const GridFunction& u,
                                const GridFunction& v) const {
    require_size(*this, u);
    require_size(*this, v);
    GridFunction au(u.size(), 0.0);
    apply(lambda, u, au);
    return kernels::dot(au.data(), v.data(), v.size());
}

void DirichletSpace::apply(double lambda, const GridFunction& u, GridFunction& out) const {
    require_size(*this, u);
    out.values.assign(u.size(), 0.0);
    const std::size_t N = mesh_.gap_count();
    for (std::size_t k = 1; k < N; ++k) {
        out[k] = -stiff_coeff_[k - 1] * u[k - 1] +
                 (stiff_coeff_[k - 1] + stiff_coeff_[k] + lambda * mass_coeff_[k - 1]) * u[k] -
                 stiff_coeff_[k] * u[k + 1];
    }
}

void DirichletSpace::interior_system(double lambda, std::vector<double>& lower,
                                     std::vector<double>& diag,
                                     std::vector<double>& upper) const {
    const std::size_t m = mesh_.node_count() - 2;  // interior dof count
    lower.assign(m > 0 ? m - 1 : 0, 0.0);
    diag.assign(m, 0.0);
    upper.assign(m > 0 ? m - 1 : 0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = j + 1;  // node index
        diag[j] = stiff_coeff_[k - 1] + stiff_coeff_[k] + lambda * mass_coeff_[k - 1];
        if (j + 1 < m) {
            upper[j] = -stiff_coeff_[k];
            lower[j] = -stiff_coeff_[k];
        }
    }
}

void DirichletSpace::interior_mass(std::vector<double>& diag) const {
    const std::size_t m = mesh_.node_count() - 2;
    diag.assign(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) diag[j] = mass_coeff_[j];
}

double h1_norm(const DirichletSpace& space, const GridFunction& u) {
    return std::sqrt(space.stiffness_form(u));
}

SpectralInfo smallest_eigenvalue(const DirichletSpace& space, double tol, int max_iters) {
    const std::size_t m = space.mesh().node_count() - 2;
    std::vector<double> lower, diag, upper, smass;
    space.interior_system(0.0, lower, diag, upper);
    space.interior_mass(smass);
    const TridiagFactor fac = tridiag_factor(lower, diag, upper);
    if (fac.singular)
        throw Error("stiffness matrix unexpectedly singular in eigenvalue solve");

    std::vector<double> v(m, 1.0), kv(m), sv(m);
    // the matvec kernel wants row-aligned off-diagonals: lo[i] = K(i, i-1)
    std::vector<double> lo_pad(m, 0.0), up_pad(m, 0.0);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        lo_pad[j + 1] = lower[j];
        up_pad[j] = upper[j];
    }
    auto apply_K = [&](const std::vector<double>& x, std::vector<double>& y) {
        kernels::tridiag_apply(lo_pad.data(), diag.data(), up_pad.data(), x.data(),
                               y.data(), m);
    };

    SpectralInfo info;
    double lambda = 0.0;
    for (int it = 1; it <= max_iters; ++it) {
        // v <- K^{-1} S v, then normalize in the S-inner product
        for (std::size_t j = 0; j < m; ++j) sv[j] = smass[j] * v[j];
        std::vector<double> y = sv;
        tridiag_solve(fac, y);
        double s_norm2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) s_norm2 += smass[j] * y[j] * y[j];
        const double s_norm = std::sqrt(s_norm2);
        for (std::size_t j = 0; j < m; ++j) v[j] = y[j] / s_norm;

        // Rayleigh quotient and relative eigen-residual
        apply_K(v, kv);
        double vkv = 0.0, vsv = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            sv[j] = smass[j] * v[j];
            vkv += v[j] * kv[j];
            vsv += v[j] * sv[j];
        }
        lambda = vkv / vsv;
        double res2 = 0.0, ssv2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double r = kv[j] - lambda * sv[j];
            res2 += r * r;
            ssv2 += sv[j] * sv[j];
        }
        info.iterations = it;
        info.residual = std::sqrt(res2) / (std::fabs(lambda) * std::sqrt(ssv2));
        if (info.residual <= tol) break;
        if (it == max_iters)
            throw NoConvergence("inverse power iteration did not reach tolerance", it);
    }

    info.lambda1 = lambda;
    info.eigvec = GridFunction(space.mesh().node_count(), 0.0);
    // deterministic orientation: first nonzero interior entry positive
    double sign = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
        if (v[j] != 0.0) {
            sign = v[j] > 0.0 ? 1.0 : -1.0;
            break;
        }
    }
    for (std::size_t j = 0; j < m; ++j) info.eigvec[j + 1] = sign * v[j];
    return info;
}

double wirtinger_gap(const DirichletSpace& space, const SpectralInfo& spectral,
                     const GridFunction& u) {
    return space.stiffness_form(u) / spectral.lambda1 - space.sigma_mass_form(u);
}

EmbeddingConstants embedding_constants(const DirichletSpace& space, int samples,
                                       std::uint64_t seed) {
    EmbeddingConstants out;
    out.delta = std::sqrt(space.mesh().length() / space.weight_min());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const std::size_t n = space.mesh().node_count();
    GridFunction u(n, 0.0);
    for (int s = 0; s < samples; ++s) {
        for (std::size_t i = 1; i + 1 < n; ++i) u[i] = dist(rng);
        const double norm = h1_norm(space, u);
        if (norm == 0.0) continue;
        const double sup = kernels::sup_norm(u.data(), n);
        out.k_emp = std::max(out.k_emp, sup / norm);
    }
    return out;
}

}  // namespace tsvar
