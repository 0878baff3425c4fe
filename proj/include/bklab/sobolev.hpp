#pragma once

#include "bklab/grid.hpp"

namespace bklab {

/// Discrete homogeneous Sobolev norm |f|_{H^s} via the DFT of the zero-padded
/// samples (padding factor 2 per axis). Frequencies follow the grid's
/// sampling theorem, xi_k = 2 pi k / (M h); the xi = 0 bin is dropped, which
/// is harmless for compactly supported, mean-small fields in -1 < s < 3.
/// Throws for s outside (-1, 3).
double sobolev_norm(const ScalarField& f, double s);

}  // namespace bklab
