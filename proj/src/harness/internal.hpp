#pragma once

#include <cstdint>
#include <string>

#include "baglab/rng.hpp"
#include "baglab/types.hpp"

namespace baglab::harness::detail {

// First m rows of a Haar-distributed n x n orthogonal matrix (QR of a
// Gaussian matrix with the signs of diag(R) folded into Q).
Matrix haar_orthogonal_rows(Index n, Index m, Rng& rng);

// Stable 64-bit hash of a label, used to key random streams by name.
std::uint64_t label_hash(const std::string& label);

}  // namespace baglab::harness::detail
