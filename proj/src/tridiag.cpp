#include "tsvar/tridiag.hpp"

#include <cassert>
#include <cmath>

namespace tsvar {

TridiagFactor tridiag_factor(std::span<const double> lower,
                             std::span<const double> diag,
                             std::span<const double> upper) {
    const std::size_t n = diag.size();
    assert(n == 0 || (lower.size() == n - 1 && upper.size() == n - 1));

    TridiagFactor f;
    f.n = n;
    f.d.assign(diag.begin(), diag.end());
    f.dl.assign(lower.begin(), lower.end());
    f.du.assign(upper.begin(), upper.end());
    f.du2.assign(n >= 2 ? n - 2 : 0, 0.0);
    f.piv.assign(n >= 1 ? n - 1 : 0, 0);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::fabs(f.d[i]) >= std::fabs(f.dl[i])) {
            // no interchange
            if (f.d[i] != 0.0) {
                const double fact = f.dl[i] / f.d[i];
                f.dl[i] = fact;
                f.d[i + 1] -= fact * f.du[i];
            } else {
                f.dl[i] = 0.0;
            }
            if (i + 2 < n) f.du2[i] = 0.0;
        } else {
            // swap rows i and i+1
            const double fact = f.d[i] / f.dl[i];
            f.d[i] = f.dl[i];
            f.dl[i] = fact;
            const double tmp = f.du[i];
            f.du[i] = f.d[i + 1];
            f.d[i + 1] = tmp - fact * f.d[i + 1];
            if (i + 2 < n) {
                f.du2[i] = f.du[i + 1];
                f.du[i + 1] = -fact * f.du[i + 1];
            }
            f.piv[i] = 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (f.d[i] == 0.0) f.singular = true;
    return f;
}

void tridiag_solve(const TridiagFactor& f, std::span<double> b) {
    const std::size_t n = f.n;
    assert(b.size() == n && !f.singular);
    if (n == 0) return;

    // forward elimination with the recorded interchanges
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (f.piv[i] == 0) {
            b[i + 1] -= f.dl[i] * b[i];
        } else {
            const double tmp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tmp - f.dl[i] * b[i];
        }
    }
    // back substitution
    b[n - 1] /= f.d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - f.du[n - 2] * b[n - 1]) / f.d[n - 2];
    for (std::size_t k = n; k-- > 2;) {
        const std::size_t i = k - 2;
        b[i] = (b[i] - f.du[i] * b[i + 1] - f.du2[i] * b[i + 2]) / f.d[i];
    }
}

bool tridiag_positive_definite(std::span<const double> diag,
                               std::span<const double> off) {
    const std::size_t n = diag.size();
    assert(n == 0 || off.size() == n - 1);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(diag[i]));
    const double tiny = 1e-14 * std::max(scale, 1.0);
    double pivot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = diag[i];
        if (i > 0) v -= off[i - 1] * off[i - 1] / pivot;
        if (!(v > tiny)) return false;
        pivot = v;
    }
    return true;
}

}  // namespace tsvar
