// SPDX-License-Identifier: Apache-2.0
#include "passlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace passlab::kernels {

#if defined(PASSLAB_HAVE_AVX2)
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#if defined(PASSLAB_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return avx2_ops_impl();
#endif
    return nullptr;
}

const Ops& active() {
    static const Ops* chosen = [] {
        const char* forced = std::getenv("PASSLAB_KERNELS");
        if (forced != nullptr) {
            if (std::strcmp(forced, "scalar") == 0) return &scalar_ops();
            if (std::strcmp(forced, "avx2") == 0 && avx2_ops() != nullptr) return avx2_ops();
        }
        const Ops* v = avx2_ops();
        return v != nullptr ? v : &scalar_ops();
    }();
    return *chosen;
}

}  // namespace passlab::kernels
