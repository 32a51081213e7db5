#include "tsvar/kernels.hpp"

#include <cmath>

#include "kernels_table.hpp"
#include "tsvar/error.hpp"

namespace tsvar::kernels {
namespace detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

double diff_quad_form_scalar(const double* u, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = u[i + 1] - u[i];
        s += c[i] * d * d;
    }
    return s;
}

double shift_quad_form_scalar(const double* u, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c[i] * u[i + 1] * u[i + 1];
    return s;
}

void diff_scaled_scalar(const double* u, const double* s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (u[i + 1] - u[i]) * s[i];
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sup_norm_scalar(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void tridiag_apply_scalar(const double* lower, const double* diag, const double* upper,
                          const double* x, double* y, std::size_t n) {
    if (n == 0) return;
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i)
        y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

}  // namespace

const Table& scalar_table() {
    static const Table t{dot_scalar,       dot3_scalar,  diff_quad_form_scalar,
                         shift_quad_form_scalar, diff_scaled_scalar, axpy_scalar,
                         sup_norm_scalar,  tridiag_apply_scalar};
    return t;
}

}  // namespace detail

namespace {

bool avx2_runtime_ok() {
#if defined(TSVAR_KERNELS_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const detail::Table* select_default() {
#if defined(TSVAR_KERNELS_AVX2)
    if (avx2_runtime_ok()) return &detail::avx2_table();
#endif
    return &detail::scalar_table();
}

struct State {
    const detail::Table* table;
    Backend backend;
};

State& state() {
    static State s = [] {
        State init;
        init.table = select_default();
        init.backend = (init.table == &detail::scalar_table()) ? Backend::Scalar
                                                               : Backend::Avx2;
        return init;
    }();
    return s;
}

}  // namespace

Backend active_backend() { return state().backend; }

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "?";
}

bool backend_available(Backend b) {
    if (b == Backend::Scalar) return true;
    return avx2_runtime_ok();
}

void force_backend(Backend b) {
    if (!backend_available(b))
        throw Error("kernel backend not available on this machine: " + backend_name(b));
    if (b == Backend::Scalar) {
        state() = {&detail::scalar_table(), Backend::Scalar};
        return;
    }
#if defined(TSVAR_KERNELS_AVX2)
    state() = {&detail::avx2_table(), Backend::Avx2};
#endif
}

double dot(const double* a, const double* b, std::size_t n) {
    return state().table->dot(a, b, n);
}
double dot3(const double* a, const double* b, const double* c, std::size_t n) {
    return state().table->dot3(a, b, c, n);
}
double diff_quad_form(const double* u, const double* c, std::size_t n) {
    return state().table->diff_quad_form(u, c, n);
}
double shift_quad_form(const double* u, const double* c, std::size_t n) {
    return state().table->shift_quad_form(u, c, n);
}
void diff_scaled(const double* u, const double* s, double* out, std::size_t n) {
    state().table->diff_scaled(u, s, out, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
    state().table->axpy(a, x, y, n);
}
double sup_norm(const double* x, std::size_t n) {
    return state().table->sup_norm(x, n);
}
void tridiag_apply(const double* lower, const double* diag, const double* upper,
                   const double* x, double* y, std::size_t n) {
    state().table->tridiag_apply(lower, diag, upper, x, y, n);
}

}  // namespace tsvar::kernels
