#pragma once

// Column-accumulation kernel behind the charging phase:
//
//   out[j] = sum_i row_weights[i] * matrix[i * cols + j]
//
// summed in ascending row order with rows of zero weight skipped. The SIMD
// variants vectorize across columns only, so every column sees exactly the
// scalar sequence of multiplies and adds and results are bit-identical to the
// scalar reference on every backend.

#include <span>
#include <string_view>

namespace nvcap::kernels {

enum class Backend { scalar, avx2, neon };

const char* to_string(Backend b);
Backend parse_backend(std::string_view name); // "scalar", "avx2", "neon"

// Compiled in and supported by the running CPU.
bool backend_available(Backend b);

// Best available backend, unless overridden by set_backend() or the
// NVCAP_KERNEL environment variable ("scalar", "avx2", "neon", "auto").
Backend active_backend();

// Throws DomainError if the backend is unavailable.
void set_backend(Backend b);
void reset_backend();

void accumulate_rows_scalar(std::span<const double> row_weights, std::span<const double> matrix,
                            std::span<double> out);
#if defined(NVCAP_HAVE_AVX2)
void accumulate_rows_avx2(std::span<const double> row_weights, std::span<const double> matrix,
                          std::span<double> out);
#endif
#if defined(NVCAP_HAVE_NEON)
void accumulate_rows_neon(std::span<const double> row_weights, std::span<const double> matrix,
                          std::span<double> out);
#endif

void accumulate_rows(Backend backend, std::span<const double> row_weights, std::span<const double> matrix,
                     std::span<double> out);

inline void accumulate_rows(std::span<const double> row_weights, std::span<const double> matrix,
                            std::span<double> out) {
    accumulate_rows(active_backend(), row_weights, matrix, out);
}

} // namespace nvcap::kernels
