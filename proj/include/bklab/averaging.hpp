#pragma once

#include <vector>

#include "bklab/engine.hpp"
#include "bklab/grid.hpp"

namespace bklab {

/// Mollifier phi_sigma(x) = sigma^-2 phi(x/sigma) with the standard bump
/// profile on the unit ball; the discrete kernel is renormalized to unit
/// mass, so the profile's normalization constant never matters.
struct MollifierSpec {
    double sigma = 0.1;

    MollifierSpec() = default;
    explicit MollifierSpec(double sigma_);
};

struct AveragingParams {
    int n_angles = 64;      // angular quadrature count (even, >= 8)
    int n_srad = 128;       // radial smoothing quadrature intervals (>= 8)
    int freq_depth = 3;     // iterations of the frequency average
    std::vector<double> sigma_grid;  // optional explicit sigma search grid

    void validate() const;
};

/// Discrete convolution with the sampled, unit-mass mollifier kernel, zero
/// extension outside the grid. Throws if sigma < grid spacing.
ScalarField mollify(const ScalarField& f, const MollifierSpec& m);

/// Rate-optimal coupling of the mollifier width to the frequency: lambda^(-1/4).
double sigma_from_lambda(double lambda);

/// Default sigma search grid: 16 log-spaced values in
/// [spacing, 4 lambda^(-1/4)], clamped to the single lower endpoint when the
/// range collapses. The lower endpoint is an exact no-op kernel, so the
/// search can always return "no improvement".
std::vector<double> default_sigma_grid(double lambda, double spacing);

enum class AngularPath { kFast, kReference };

/// Rotation-averaged main term at every output node.
///   reference - uniform-theta mean of T^lambda[rotate_field(q, x, theta)](x)
///   fast      - convolution against the radial kernel (lambda/pi)
///               J0(lambda |z-x|^2), the closed form of the theta average
/// The reference path rotates the sampled frame, so it is faithful only at
/// nodes x whose rotation keeps the support inside the frame; elsewhere the
/// zero extension clips the swept mass.
ScalarField angular_average_recon(const ScalarField& q, double lambda, const Grid2& out,
                                  const AveragingParams& p, const EngineConfig& cfg,
                                  AngularPath path = AngularPath::kFast);

/// S_rad[f](r) = int_0^1 f(r (1+s)^{-1/2}) ds by trapezoid quadrature with
/// n_srad intervals, sampling f by linear interpolation in r. The output
/// lattice keeps the cell size but extends to sqrt(2) r_max, covering the
/// dilated support.
RadialProfile radial_smooth(const RadialProfile& f, const AveragingParams& p);

/// Complex samples of a frequency-dependent quantity on a uniform lattice
/// t_i = t0 + i dt.
struct SampledFreqMap {
    double t0 = 1.0;
    double dt = 0.1;
    std::vector<cplx> values;

    double t_max() const { return t0 + dt * (values.size() - 1); }
    cplx sample(double t) const;  // linear interpolation, throws out of range
};

/// A_freq[F](lambda) = (1/lambda) int_lambda^{2 lambda} F(t) dt, trapezoid on
/// the lattice with linearly interpolated partial end cells. Throws unless
/// the lattice covers [lambda, 2 lambda] with at least 32 samples.
cplx freq_average(const SampledFreqMap& F, double lambda);

/// depth-fold application of A_freq; needs coverage of [lambda, 2^depth lambda].
cplx freq_average_iterated(const SampledFreqMap& F, double lambda, int depth);

/// V0 = angular average of q about `center` (polar resampling + theta mean),
/// then V1, V2, V3 by repeated radial smoothing.
std::vector<RadialProfile> v_pipeline(const ScalarField& q, Vec2 center,
                                      const AveragingParams& p);

/// Mollifier average applied after the angular average.
ScalarField combined_recon(const ScalarField& q, double lambda, const Grid2& out,
                           const AveragingParams& p, const MollifierSpec& m,
                           const EngineConfig& cfg);

}  // namespace bklab
