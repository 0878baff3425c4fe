#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bklab/averaging.hpp"
#include "bklab/engine.hpp"
#include "bklab/grid.hpp"

namespace bklab {

/// Decay-rate measurement: least-squares slope of log sup|T^lambda[q] - q|
/// against log lambda over a frequency ladder.
struct SlopeReport {
    std::vector<double> lambdas;
    std::vector<double> sup_errors;
    double slope = 0.0;
    double threshold = 0.0;  // (1 - s') / 2 + 0.15
    bool pass = false;
    bool vacuous = false;  // q == 0, nothing to measure
};

/// Stationary-phase decay check for a potential with finite H^{s'} norm,
/// 1 < s' < 3. `out` is the window where the sup error is taken; the ladder
/// defaults to {10, 20, 40, 80, 160}.
SlopeReport check_lemma_statphase(const ScalarField& q, double s_prime, const Grid2& out,
                                  const EngineConfig& cfg,
                                  std::vector<double> ladder = {10, 20, 40, 80, 160});

/// Closed-form derivative of the radial smoothing output:
///   g^{(k+1)}(t) = (2/t) f^{(k)}(t) - (2^{2-k/2}/t) f^{(k)}(t/sqrt 2)
///                  + ((4-2k)/t) int_{1/sqrt2}^1 f^{(k)}(t s) s^{k-3} ds
/// compared against a finite difference of the quadrature-evaluated
/// S_rad[f]. k in {0, 1}; t must stay away from 0.
struct DerivativeReport {
    double formula = 0.0;
    double finite_difference = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

DerivativeReport check_lemma_freqavg_derivative(const std::function<double(double)>& f,
                                                int k, double t, int n_srad = 512);

/// Frequency-average identity at the origin: A_freq of lambda -> T^lambda[f](0)
/// versus T^lambda[S_rad f](0), both sides by independent quadrature.
struct IdentityReport {
    struct Row {
        double lambda;
        cplx lhs;
        cplx rhs;
        double abs_diff;
    };
    std::vector<Row> rows;
    double max_diff = 0.0;
    bool pass = false;
};

/// `f` is a radial profile of a compactly supported potential; it is extended
/// to a 2D field on `frame` for the engine evaluations. The frame must cover
/// the sqrt(2)-dilated support of f or the smoothed side gets clipped.
IdentityReport check_lemma_alambda(const RadialProfile& f, const Grid2& frame,
                                   const AveragingParams& p,
                                   std::vector<double> lambdas = {10, 20, 40},
                                   double tolerance = 1e-3, int n_lattice = 256);

}  // namespace bklab
