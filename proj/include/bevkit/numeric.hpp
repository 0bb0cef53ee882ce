#pragma once

#include <cstddef>
#include <span>

namespace bevkit {

// Pairwise (cascade) summation. Fixed association order makes results
// reproducible across runs and thread counts, and the O(log n) error
// growth keeps large-raster mass sums stable.
double pairwise_sum(std::span<const double> v);

} // namespace bevkit
