#pragma once

// latmon: lattice sums, monotonicity certificates, attractor-dimension
// bounds, and orthonormal-family inequality fuzzing on the 2 pi torus.

#include "latmon/bounds.hpp"
#include "latmon/errors.hpp"
#include "latmon/lattice.hpp"
#include "latmon/latsum.hpp"
#include "latmon/monotone.hpp"
#include "latmon/orthofam.hpp"
#include "latmon/specfun.hpp"
#include "latmon/tolerance.hpp"

namespace latmon {
inline constexpr const char* kVersion = "0.1.0";
}
