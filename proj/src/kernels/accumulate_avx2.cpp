// Built with -mavx2 (no -mfma): multiply and add stay separate roundings.

#include "nvcap/kernels.hpp"

#include <immintrin.h>

#include <cstddef>

namespace nvcap::kernels {

void accumulate_rows_avx2(std::span<const double> row_weights, std::span<const double> matrix,
                          std::span<double> out) {
    const std::size_t cols = out.size();
    const std::size_t vec_end = cols - cols % 8;

    // Blocks of 8 columns held in two registers across the whole row loop.
    for (std::size_t j = 0; j < vec_end; j += 8) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (std::size_t i = 0; i < row_weights.size(); ++i) {
            const double w = row_weights[i];
            if (w == 0.0) continue;
            const __m256d wv = _mm256_set1_pd(w);
            const double* row = matrix.data() + i * cols + j;
            acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(wv, _mm256_loadu_pd(row)));
            acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(wv, _mm256_loadu_pd(row + 4)));
        }
        _mm256_storeu_pd(out.data() + j, acc0);
        _mm256_storeu_pd(out.data() + j + 4, acc1);
    }

    for (std::size_t j = vec_end; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < row_weights.size(); ++i) {
            const double w = row_weights[i];
            if (w == 0.0) continue;
            acc = acc + w * matrix[i * cols + j];
        }
        out[j] = acc;
    }
}

} // namespace nvcap::kernels
