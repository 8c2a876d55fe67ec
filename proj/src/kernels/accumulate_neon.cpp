#include "nvcap/kernels.hpp"

#include <arm_neon.h>

#include <cstddef>

namespace nvcap::kernels {

// vmulq/vaddq rather than vfmaq, to keep two roundings per term.
void accumulate_rows_neon(std::span<const double> row_weights, std::span<const double> matrix,
                          std::span<double> out) {
    const std::size_t cols = out.size();
    const std::size_t vec_end = cols - cols % 4;

    for (std::size_t j = 0; j < vec_end; j += 4) {
        float64x2_t acc0 = vdupq_n_f64(0.0);
        float64x2_t acc1 = vdupq_n_f64(0.0);
        for (std::size_t i = 0; i < row_weights.size(); ++i) {
            const double w = row_weights[i];
            if (w == 0.0) continue;
            const float64x2_t wv = vdupq_n_f64(w);
            const double* row = matrix.data() + i * cols + j;
            acc0 = vaddq_f64(acc0, vmulq_f64(wv, vld1q_f64(row)));
            acc1 = vaddq_f64(acc1, vmulq_f64(wv, vld1q_f64(row + 2)));
        }
        vst1q_f64(out.data() + j, acc0);
        vst1q_f64(out.data() + j + 2, acc1);
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
