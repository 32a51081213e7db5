#pragma once

#include <cstddef>

namespace tsvar::kernels::detail {

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    double (*dot3)(const double*, const double*, const double*, std::size_t);
    double (*diff_quad_form)(const double*, const double*, std::size_t);
    double (*shift_quad_form)(const double*, const double*, std::size_t);
    void (*diff_scaled)(const double*, const double*, double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*sup_norm)(const double*, std::size_t);
    void (*tridiag_apply)(const double*, const double*, const double*,
                          const double*, double*, std::size_t);
};

const Table& scalar_table();

#if defined(TSVAR_KERNELS_AVX2)
const Table& avx2_table();
#endif

}  // namespace tsvar::kernels::detail
