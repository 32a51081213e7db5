#pragma once

// Pivoted LU factorization and solve for tridiagonal systems (gttrf/gtts2
// style: partial pivoting introduces one extra superdiagonal of fill-in).
// Used for the linear solves, inverse power iteration and Newton steps; the
// pivoting makes it safe for the indefinite tangent systems that appear near
// saddle points.

#include <cstddef>
#include <span>
#include <vector>

namespace tsvar {

struct TridiagFactor {
    std::size_t n = 0;
    std::vector<double> dl;   // multipliers (n-1)
    std::vector<double> d;    // diagonal of U (n)
    std::vector<double> du;   // first superdiagonal of U (n-1)
    std::vector<double> du2;  // second superdiagonal fill-in (n-2)
    std::vector<int> piv;     // piv[i] == 1 if rows i, i+1 were swapped
    bool singular = false;
};

/// Factor the tridiagonal matrix with subdiagonal `lower` (size n-1),
/// diagonal `diag` (size n) and superdiagonal `upper` (size n-1).
TridiagFactor tridiag_factor(std::span<const double> lower,
                             std::span<const double> diag,
                             std::span<const double> upper);

/// Solve in place. Requires !f.singular and b.size() == f.n.
void tridiag_solve(const TridiagFactor& f, std::span<double> b);

/// True if the symmetric tridiagonal matrix (diag, off) is positive definite,
/// decided by the pivots of the unpivoted LDL^T factorization.
bool tridiag_positive_definite(std::span<const double> diag,
                               std::span<const double> off);

}  // namespace tsvar
