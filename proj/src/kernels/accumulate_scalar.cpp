#include "nvcap/kernels.hpp"

#include <algorithm>
#include <cstddef>

namespace nvcap::kernels {

void accumulate_rows_scalar(std::span<const double> row_weights, std::span<const double> matrix,
                            std::span<double> out) {
    const std::size_t cols = out.size();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < row_weights.size(); ++i) {
        const double w = row_weights[i];
        if (w == 0.0) continue;
        const double* row = matrix.data() + i * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            out[j] = out[j] + w * row[j];
        }
    }
}

} // namespace nvcap::kernels
