#pragma once

#include "bklab/grid.hpp"

namespace bklab {

enum class EngineKind { kNaive, kSeparable, kSpectral };
enum class Summation { kPairwise, kSequential };

/// Spectrum used by the spectral engine.
///   sampled  - DFT of the chirp kernel sampled on the padded lattice: the
///              exact linear convolution, bit-comparable with the quadrature
///              engines at any resolved frequency (default)
///   analytic - the continuum multiplier e^{-i (xi1^2 - xi2^2) / (4 lambda)};
///              exact mode-by-mode in the resolved band, but the periodized
///              chirp images it implies leak O(1/(sqrt(lambda) pad)) ghosts
///              onto discontinuous potentials
enum class SpectralKernel { kSampled, kAnalytic };

EngineKind engine_kind_from_string(const std::string& name);
std::string to_string(EngineKind kind);

struct EngineConfig {
    EngineKind engine = EngineKind::kSpectral;
    /// Bilinear upsampling factor applied to the input before quadrature.
    int refinement = 1;
    Summation summation = Summation::kPairwise;
    /// Zero-padding factor per axis for the spectral path. Factor 2 makes the
    /// forward convolution wraparound-free for outputs nested in the input.
    int pad_factor = 2;
    SpectralKernel spectral_kernel = SpectralKernel::kSampled;
};

/// Reconstruction point x and frequency lambda of the quadratic-phase kernel.
struct PhaseContext {
    Vec2 x{0.0, 0.0};
    double lambda = 1.0;

    PhaseContext() = default;
    PhaseContext(Vec2 x_, double lambda_);
};

/// psi_x(z) = ((z1 - x1) + i (z2 - x2))^2 / 2.
cplx complex_phase(const PhaseContext& ctx, Vec2 z);

/// phi_x(z) = (z1 - x1)^2 - (z2 - x2)^2 = 2 Re psi_x(z).
double real_phase(const PhaseContext& ctx, Vec2 z);

/// Oscillation resolution rule: >= 8 input samples per phase period at the
/// domain corner, i.e. spacing <= pi / (8 lambda L) with L the grid
/// half-width. Applies to the quadrature engines; the spectral multiplier is
/// exact mode-by-mode and is exempt.
double required_spacing(double lambda, double half_width);
void check_resolution(const Grid2& grid, double lambda);

/// Main reconstruction term at one point: trapezoid quadrature of
/// (lambda/pi) e^{i lambda phi_x(z)} q(z) over the (refined) input grid.
cplx main_term_point(const ScalarField& q, const PhaseContext& ctx,
                     const EngineConfig& cfg);

/// Main term on every node of `out`. All engines evaluate the same discrete
/// functional:
///   naive     - direct double loop, O(N_out * N_in)
///   separable - factors e^{i lambda phi} into per-axis chirps (out grid must
///               be nested in the input lattice)
///   spectral  - zero-padded DFT with the exact chirp Fourier multiplier
///               e^{-i (xi1^2 - xi2^2) / (4 lambda)} (out grid nested)
ScalarField main_term_grid(const ScalarField& q, double lambda, const Grid2& out,
                           const EngineConfig& cfg);

}  // namespace bklab
