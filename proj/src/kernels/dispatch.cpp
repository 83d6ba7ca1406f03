#include <atomic>
#include <stdexcept>

#include "heraldstat/kernels.hpp"

namespace heraldstat::kernels {

namespace {

Backend detect() {
#ifdef HERALDSTAT_HAVE_AVX2
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

std::atomic<const Kernels*>& table_slot() {
    static std::atomic<const Kernels*> slot{nullptr};
    return slot;
}

const Kernels* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &detail::scalar_table;
        case Backend::avx2:
#ifdef HERALDSTAT_HAVE_AVX2
            return &detail::avx2_table;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

}  // namespace

bool backend_available(Backend b) {
    if (b == Backend::scalar) return true;
#ifdef HERALDSTAT_HAVE_AVX2
    if (b == Backend::avx2) return __builtin_cpu_supports("avx2");
#endif
    return false;
}

std::string backend_name(Backend b) {
    return b == Backend::scalar ? "scalar" : "avx2";
}

const Kernels& active() {
    const Kernels* t = table_slot().load(std::memory_order_acquire);
    if (!t) {
        t = table_for(detect());
        table_slot().store(t, std::memory_order_release);
    }
    return *t;
}

Backend active_backend() {
    const Kernels* t = &active();
    return t == &detail::scalar_table ? Backend::scalar : Backend::avx2;
}

void set_backend(Backend b) {
    if (!backend_available(b))
        throw std::runtime_error("kernel backend not available on this host: " +
                                 backend_name(b));
    table_slot().store(table_for(b), std::memory_order_release);
}

}  // namespace heraldstat::kernels
