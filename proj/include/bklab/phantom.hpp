#pragma once

#include <string>
#include <vector>

#include "bklab/grid.hpp"

namespace bklab {

enum class PhantomKind {
    kRectangles,
    kOvals,
    kCirclesSpiral,
    kGeometricFigures,
    kSheppLogan,
    kGaussian,
    kDisc,
};

PhantomKind phantom_kind_from_string(const std::string& name);
std::string to_string(PhantomKind kind);
bool kind_is_composite(PhantomKind kind);

enum class PrimitiveShape { kRectangle, kEllipse, kDisc };

/// One constant-intensity region. `half_axes` are the rectangle half-sides
/// or ellipse semi-axes before rotating by `angle` (radians); discs use
/// half_axes[0] as the radius. Overlapping primitives add.
struct Primitive {
    PrimitiveShape shape = PrimitiveShape::kEllipse;
    Vec2 center{0.0, 0.0};
    Vec2 half_axes{0.5, 0.5};
    double angle = 0.0;
    cplx intensity{1.0, 0.0};

    /// Conservative bounding radius about the center.
    double bounding_radius() const;
    bool contains(Vec2 p) const;
};

struct PhantomSpec {
    PhantomKind kind = PhantomKind::kGaussian;
    cplx amplitude{1.0, 0.0};
    double half_width = 1.0;
    std::vector<Primitive> primitives;  // composite kinds only

    // gaussian parameters
    Vec2 gaussian_center{0.0, 0.0};
    double gaussian_width = 1.0;

    /// Throws if a primitive exits the open square of the stated half-width,
    /// or a composite kind has no primitives, or any intensity is not finite.
    void validate() const;
};

/// Canonical ten-ellipse head phantom table on [-1, 1]^2 (standard tomography
/// parameter set), expressed as primitives.
const std::vector<Primitive>& shepp_logan_ellipses();

/// Sample the phantom at grid nodes: a pointwise sum of primitive intensities
/// scaled by the amplitude. Everything is clamped to zero outside the open
/// domain square, so rendered fields are compactly supported. Requires the
/// grid to cover the domain square.
ScalarField render_phantom(const PhantomSpec& spec, const Grid2& grid);

/// Resample f(R_{center,theta}(z)) on f's own grid via bilinear lookup.
ScalarField rotate_field(const ScalarField& f, Vec2 center, double theta);

// Versioned phantom suite (v1). Geometry and intensities are fixed here so
// benchmark results are reproducible; a few primitives carry a constant
// imaginary part since the reconstruction handles complex potentials.
PhantomSpec preset_phantom(PhantomKind kind);

}  // namespace bklab
