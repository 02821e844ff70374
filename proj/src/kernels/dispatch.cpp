#include "mdi/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace mdi::kernels {

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported() {
#if defined(__GNUC__) || defined(__clang__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
#endif

namespace {

const Ops& select() {
    const char* env = std::getenv("MDI_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) return avx2_ops();
#endif
    return scalar_ops();
}

} // namespace

const Ops& active() {
    static const Ops& ops = select();
    return ops;
}

const char* backend_name() { return active().name; }

} // namespace mdi::kernels
