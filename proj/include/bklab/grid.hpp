#pragma once

#include <array>
#include <string>
#include <vector>

#include "bklab/mathx.hpp"

namespace bklab {

using Vec2 = std::array<double, 2>;

/// Uniform rectangular sampling lattice with equal spacing in both axes.
/// Node (ix, iy) sits at origin + spacing * (ix, iy); samples are row-major
/// (index = iy * nx + ix).
struct Grid2 {
    Vec2 origin{0.0, 0.0};
    double spacing = 1.0;
    int nx = 2;
    int ny = 2;

    Grid2() = default;
    Grid2(Vec2 origin_, double spacing_, int nx_, int ny_);

    /// Square grid of n x n nodes spanning [-half_width, half_width]^2.
    static Grid2 centered_square(double half_width, int n);

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double extent_x() const { return spacing * (nx - 1); }
    double extent_y() const { return spacing * (ny - 1); }
    /// Largest per-axis half-extent; the L in the oscillation resolution rule.
    double half_width() const;

    double x(int ix) const { return origin[0] + spacing * ix; }
    double y(int iy) const { return origin[1] + spacing * iy; }
    Vec2 node(int ix, int iy) const { return {x(ix), y(iy)}; }

    bool operator==(const Grid2& other) const;
};

/// Complex-valued samples on a Grid2. Immutable by convention once built;
/// all operations below are pure reads.
struct ScalarField {
    Grid2 grid;
    std::vector<cplx> samples;

    ScalarField() = default;
    explicit ScalarField(const Grid2& g) : grid(g), samples(g.size(), cplx{}) {}
    ScalarField(const Grid2& g, std::vector<cplx> s);

    cplx& at(int ix, int iy) { return samples[static_cast<std::size_t>(iy) * grid.nx + ix]; }
    const cplx& at(int ix, int iy) const {
        return samples[static_cast<std::size_t>(iy) * grid.nx + ix];
    }

    /// Throws if any sample is NaN or infinite.
    void require_finite() const;
};

/// One-variable complex samples at r_k = k * r_max / (nr - 1), k = 0..nr-1.
struct RadialProfile {
    double r_max = 1.0;
    std::vector<cplx> values;

    RadialProfile() = default;
    RadialProfile(double r_max_, std::vector<cplx> v);

    int nr() const { return static_cast<int>(values.size()); }
    double dr() const { return r_max / (nr() - 1); }
    double r(int k) const { return r_max * k / (nr() - 1); }

    /// Linear interpolation; 0 beyond r_max, clamped at r = 0.
    cplx sample(double r) const;
};

/// f sampled on a polar lattice about some center: nr radii x ntheta angles,
/// radius-major (row k holds all angles at r_k).
struct PolarTable {
    double r_max = 1.0;
    int nr = 2;
    int ntheta = 2;
    std::vector<cplx> values;

    cplx& at(int k, int j) { return values[static_cast<std::size_t>(k) * ntheta + j]; }
    const cplx& at(int k, int j) const {
        return values[static_cast<std::size_t>(k) * ntheta + j];
    }

    /// Mean over the angle index at fixed radius (exact trapezoid on the
    /// periodic lattice).
    RadialProfile angular_mean() const;
};

/// Bilinear interpolation of the four surrounding samples; zero outside the
/// grid hull (fields are compactly supported inside their frame).
cplx sample_at(const ScalarField& f, Vec2 p);

/// Resample onto a polar lattice about `center`, theta uniform on [0, 2pi).
PolarTable to_polar(const ScalarField& f, Vec2 center, double r_max, int nr, int ntheta);

/// Bilinear upsample by an integer factor; same extent, spacing / factor.
ScalarField refine_field(const ScalarField& f, int factor);

/// Output grid with n x n nodes on the input lattice (integer stride,
/// remainder split between the two margins). Throws if n exceeds the lattice.
Grid2 nested_output_grid(const Grid2& input, int n);

/// True if every node of `out` lies on a node of `in` (within fp slack).
bool grid_is_nested(const Grid2& out, const Grid2& in);

// Field snapshot file: magic "BKF1", then little-endian int32 nx, int32 ny,
// float64 spacing, origin_x, origin_y, followed by re/im float64 pairs in
// row-major order.
void write_field(const ScalarField& f, const std::string& path);
ScalarField read_field(const std::string& path);

}  // namespace bklab
