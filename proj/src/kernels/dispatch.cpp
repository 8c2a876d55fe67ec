#include <atomic>
#include <cstdlib>
#include <string>

#include "nvcap/errors.hpp"
#include "nvcap/kernels.hpp"

namespace nvcap::kernels {

namespace {

// -1 = not yet resolved.
std::atomic<int> g_backend{-1};

Backend best_available() {
    if (backend_available(Backend::avx2)) return Backend::avx2;
    if (backend_available(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

Backend resolve() {
    if (const char* env = std::getenv("NVCAP_KERNEL"); env != nullptr && std::string_view(env) != "auto" &&
                                                       *env != '\0') {
        const Backend requested = parse_backend(env);
        if (!backend_available(requested)) {
            throw DomainError(std::string("NVCAP_KERNEL requests unavailable backend ") + env);
        }
        return requested;
    }
    return best_available();
}

} // namespace

const char* to_string(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

Backend parse_backend(std::string_view name) {
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    if (name == "neon") return Backend::neon;
    throw DomainError("unknown kernel backend '" + std::string(name) + "'");
}

bool backend_available(Backend b) {
    switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2:
#if defined(NVCAP_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Backend::neon:
#if defined(NVCAP_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Backend active_backend() {
    int b = g_backend.load(std::memory_order_acquire);
    if (b < 0) {
        b = static_cast<int>(resolve());
        g_backend.store(b, std::memory_order_release);
    }
    return static_cast<Backend>(b);
}

void set_backend(Backend b) {
    if (!backend_available(b)) throw DomainError(std::string("kernel backend unavailable: ") + to_string(b));
    g_backend.store(static_cast<int>(b), std::memory_order_release);
}

void reset_backend() { g_backend.store(-1, std::memory_order_release); }

void accumulate_rows(Backend backend, std::span<const double> row_weights, std::span<const double> matrix,
                     std::span<double> out) {
    if (matrix.size() != row_weights.size() * out.size()) {
        throw DimensionError("kernel matrix size does not match rows x cols");
    }
    switch (backend) {
#if defined(NVCAP_HAVE_AVX2)
    case Backend::avx2: accumulate_rows_avx2(row_weights, matrix, out); return;
#endif
#if defined(NVCAP_HAVE_NEON)
    case Backend::neon: accumulate_rows_neon(row_weights, matrix, out); return;
#endif
    case Backend::scalar: accumulate_rows_scalar(row_weights, matrix, out); return;
    default: break;
    }
    throw DomainError(std::string("kernel backend not compiled in: ") + to_string(backend));
}

} // namespace nvcap::kernels
