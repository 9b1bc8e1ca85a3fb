#pragma once

#include <cstdint>
#include <random>

#include "transduce/linalg.hpp"

namespace tlab {

using Rng = std::mt19937_64;

/// i.i.d. complex Gaussian entries.
Vec random_gaussian(std::size_t n, Rng& rng);
/// Uniformly random unit vector (Haar on the sphere).
Vec random_unit(std::size_t n, Rng& rng);
/// Haar-random unitary via QR with phase correction.
Mat random_unitary(std::size_t n, Rng& rng);

}  // namespace tlab
