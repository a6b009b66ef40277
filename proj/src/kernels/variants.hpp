#pragma once

#include "baglab/kernels/kernels.hpp"

namespace baglab::kernels {

// Tables of the SIMD translation units, or null when the target
// architecture does not match. No CPU feature check happens here.
const KernelTable* compiled_avx2_table();
const KernelTable* compiled_neon_table();

}  // namespace baglab::kernels
