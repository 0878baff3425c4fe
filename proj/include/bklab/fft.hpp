#pragma once

#include <vector>

#include "bklab/mathx.hpp"

namespace bklab {

// Thin FFTW front end. Plans are created with FFTW_ESTIMATE so planning is
// deterministic; a fixed plan makes the transform bit-reproducible. All
// transforms run single-threaded; callers parallelize around them.

/// In-place 2D complex DFT, row-major with ny rows of nx samples.
/// sign -1 forward, +1 backward. Backward is unnormalized (like FFTW).
void fft2_inplace(std::vector<cplx>& data, int nx, int ny, int sign);

/// Convenience: backward transform scaled by 1/(nx*ny).
void ifft2_inplace(std::vector<cplx>& data, int nx, int ny);

}  // namespace bklab
