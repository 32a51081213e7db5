#pragma once

// Data-parallel inner-loop kernels on contiguous double arrays.
//
// Every operation has a scalar reference implementation and may have SIMD
// variants; the active variant is chosen once at runtime from CPU features.
// Reductions in different backends may associate differently, so results are
// equal only up to rounding (the equivalence tests pin the tolerance).

#include <cstddef>
#include <string>

namespace tsvar::kernels {

enum class Backend { Scalar, Avx2 };

/// Backend selected for this process (auto-detected on first use).
Backend active_backend();
std::string backend_name(Backend b);

/// True if the given backend can run on this machine.
bool backend_available(Backend b);

/// Test hook: pin the active backend. Throws tsvar::Error if unavailable.
void force_backend(Backend b);

/// Sum of a[i] * b[i].
double dot(const double* a, const double* b, std::size_t n);

/// Sum of a[i] * b[i] * c[i].
double dot3(const double* a, const double* b, const double* c, std::size_t n);

/// Sum of c[i] * (u[i+1] - u[i])^2.  u has n+1 entries, c has n.
double diff_quad_form(const double* u, const double* c, std::size_t n);

/// Sum of c[i] * u[i+1]^2.  u has n+1 entries, c has n.
double shift_quad_form(const double* u, const double* c, std::size_t n);

/// out[i] = (u[i+1] - u[i]) * s[i].  u has n+1 entries, s and out have n.
void diff_scaled(const double* u, const double* s, double* out, std::size_t n);

/// y[i] += a * x[i].
void axpy(double a, const double* x, double* y, std::size_t n);

/// max |x[i]|; 0 for n == 0.
double sup_norm(const double* x, std::size_t n);

/// y = T x for tridiagonal T. lower[0] and upper[n-1] are ignored:
/// y[i] = lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1].
void tridiag_apply(const double* lower, const double* diag, const double* upper,
                   const double* x, double* y, std::size_t n);

}  // namespace tsvar::kernels
