#include "bklab/phantom.hpp"

#include <cmath>
#include <stdexcept>

namespace bklab {

PhantomKind phantom_kind_from_string(const std::string& name) {
    if (name == "rectangles") return PhantomKind::kRectangles;
    if (name == "ovals") return PhantomKind::kOvals;
    if (name == "circles_spiral") return PhantomKind::kCirclesSpiral;
    if (name == "geometric_figures") return PhantomKind::kGeometricFigures;
    if (name == "shepp_logan") return PhantomKind::kSheppLogan;
    if (name == "gaussian") return PhantomKind::kGaussian;
    if (name == "disc") return PhantomKind::kDisc;
    throw std::invalid_argument("unknown phantom kind: " + name);
}

std::string to_string(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::kRectangles: return "rectangles";
        case PhantomKind::kOvals: return "ovals";
        case PhantomKind::kCirclesSpiral: return "circles_spiral";
        case PhantomKind::kGeometricFigures: return "geometric_figures";
        case PhantomKind::kSheppLogan: return "shepp_logan";
        case PhantomKind::kGaussian: return "gaussian";
        case PhantomKind::kDisc: return "disc";
    }
    return "unknown";
}

double Primitive::bounding_radius() const {
    switch (shape) {
        case PrimitiveShape::kRectangle:
            return std::hypot(half_axes[0], half_axes[1]);
        case PrimitiveShape::kEllipse:
            return std::max(half_axes[0], half_axes[1]);
        case PrimitiveShape::kDisc:
            return half_axes[0];
    }
    return 0.0;
}

bool Primitive::contains(Vec2 p) const {
    const double dx = p[0] - center[0];
    const double dy = p[1] - center[1];
    if (shape == PrimitiveShape::kDisc)
        return dx * dx + dy * dy < half_axes[0] * half_axes[0];
    // rotate into the primitive frame
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double u = c * dx + s * dy;
    const double v = -s * dx + c * dy;
    if (shape == PrimitiveShape::kRectangle)
        return std::fabs(u) < half_axes[0] && std::fabs(v) < half_axes[1];
    const double eu = u / half_axes[0];
    const double ev = v / half_axes[1];
    return eu * eu + ev * ev < 1.0;
}

void PhantomSpec::validate() const {
    if (!(half_width > 0.0))
        throw std::invalid_argument("PhantomSpec: half_width must be > 0");
    if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
        throw std::invalid_argument("PhantomSpec: non-finite amplitude");
    if (kind == PhantomKind::kGaussian) {
        if (!(gaussian_width > 0.0))
            throw std::invalid_argument("PhantomSpec: gaussian width must be > 0");
        return;
    }
    const std::vector<Primitive>& prims =
        (kind == PhantomKind::kSheppLogan) ? shepp_logan_ellipses() : primitives;
    if (prims.empty())
        throw std::invalid_argument("PhantomSpec: composite phantom needs >= 1 primitive");
    for (const Primitive& p : prims) {
        if (!std::isfinite(p.intensity.real()) || !std::isfinite(p.intensity.imag()))
            throw std::invalid_argument("PhantomSpec: non-finite intensity");
        const double rb = p.bounding_radius();
        if (std::fabs(p.center[0]) + rb >= half_width ||
            std::fabs(p.center[1]) + rb >= half_width)
            throw std::invalid_argument(
                "PhantomSpec: primitive exits the open domain square");
    }
}

const std::vector<Primitive>& shepp_logan_ellipses() {
    // Standard head phantom: [x0, y0, a, b, angle(rad), intensity].
    static const std::vector<Primitive> table = [] {
        struct Row {
            double x0, y0, a, b, deg, value;
        };
        const Row rows[] = {
            {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
            {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
            {0.22, 0.0, 0.11, 0.31, -18.0, -0.02},
            {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02},
            {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
            {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
            {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
            {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
            {0.0, -0.605, 0.023, 0.023, 0.0, 0.01},
            {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
        };
        std::vector<Primitive> out;
        for (const Row& r : rows) {
            Primitive p;
            p.shape = PrimitiveShape::kEllipse;
            p.center = {r.x0, r.y0};
            p.half_axes = {r.a, r.b};
            p.angle = r.deg * kPi / 180.0;
            p.intensity = cplx{r.value, 0.0};
            out.push_back(p);
        }
        return out;
    }();
    return table;
}

ScalarField render_phantom(const PhantomSpec& spec, const Grid2& grid) {
    spec.validate();
    const double hw = spec.half_width;
    const double tol = 1e-12 * std::max(1.0, hw);
    if (grid.origin[0] > -hw + tol || grid.origin[1] > -hw + tol ||
        grid.origin[0] + grid.extent_x() < hw - tol ||
        grid.origin[1] + grid.extent_y() < hw - tol)
        throw std::invalid_argument("render_phantom: grid does not cover the domain");

    const std::vector<Primitive>& prims =
        (kind_is_composite(spec.kind)) ? ((spec.kind == PhantomKind::kSheppLogan)
                                              ? shepp_logan_ellipses()
                                              : spec.primitives)
                                       : spec.primitives;

    ScalarField out(grid);
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y(iy);
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix);
            if (std::fabs(x) >= hw || std::fabs(y) >= hw) continue;  // compact support
            cplx v{};
            if (spec.kind == PhantomKind::kGaussian) {
                const double dx = x - spec.gaussian_center[0];
                const double dy = y - spec.gaussian_center[1];
                const double w2 = spec.gaussian_width * spec.gaussian_width;
                v = cplx{std::exp(-(dx * dx + dy * dy) / w2), 0.0};
            } else {
                for (const Primitive& p : prims)
                    if (p.contains({x, y})) v += p.intensity;
            }
            out.at(ix, iy) = spec.amplitude * v;
        }
    }
    return out;
}

ScalarField rotate_field(const ScalarField& f, Vec2 center, double theta) {
    if (theta == 0.0) return f;  // identity rotation, keep samples bit-exact
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    ScalarField out(f.grid);
    for (int iy = 0; iy < f.grid.ny; ++iy) {
        const double dy = f.grid.y(iy) - center[1];
        for (int ix = 0; ix < f.grid.nx; ++ix) {
            const double dx = f.grid.x(ix) - center[0];
            out.at(ix, iy) = sample_at(
                f, {center[0] + c * dx - s * dy, center[1] + s * dx + c * dy});
        }
    }
    return out;
}

namespace {

Primitive make(PrimitiveShape shape, Vec2 c, Vec2 h, double angle, cplx intensity) {
    Primitive p;
    p.shape = shape;
    p.center = c;
    p.half_axes = h;
    p.angle = angle;
    p.intensity = intensity;
    return p;
}

}  // namespace

PhantomSpec preset_phantom(PhantomKind kind) {
    PhantomSpec spec;
    spec.kind = kind;
    spec.half_width = 1.0;
    using S = PrimitiveShape;
    switch (kind) {
        case PhantomKind::kRectangles:
            spec.primitives = {
                make(S::kRectangle, {-0.25, 0.20}, {0.35, 0.25}, 0.0, {1.0, 0.0}),
                make(S::kRectangle, {0.40, -0.35}, {0.25, 0.15}, kPi / 6.0, {0.8, 0.0}),
                make(S::kRectangle, {0.30, 0.45}, {0.12, 0.18}, -kPi / 12.0, {1.2, 0.4}),
                make(S::kRectangle, {-0.45, -0.45}, {0.15, 0.10}, 0.0, {0.6, 0.0}),
            };
            break;
        case PhantomKind::kOvals:
            spec.primitives = {
                make(S::kEllipse, {0.00, 0.15}, {0.55, 0.30}, kPi / 9.0, {1.0, 0.0}),
                make(S::kEllipse, {-0.30, -0.40}, {0.30, 0.16}, -0.611, {0.9, 0.25}),
                make(S::kEllipse, {0.42, -0.30}, {0.20, 0.34}, kPi / 18.0, {0.7, 0.0}),
                make(S::kEllipse, {0.05, 0.20}, {0.10, 0.06}, 0.0, {-0.5, 0.0}),
            };
            break;
        case PhantomKind::kCirclesSpiral: {
            // nine discs on an Archimedean spiral, shrinking outward
            for (int k = 0; k < 9; ++k) {
                const double phi = k * 2.0 * kPi / 7.0;
                const double rho = 0.15 + 0.075 * k;
                const double rad = 0.18 - 0.012 * k;
                const cplx intensity = (k % 2 == 0) ? cplx{1.0, 0.0} : cplx{0.75, 0.2};
                spec.primitives.push_back(make(
                    S::kDisc, {rho * std::cos(phi), rho * std::sin(phi)},
                    {rad, rad}, 0.0, intensity));
            }
            break;
        }
        case PhantomKind::kGeometricFigures:
            spec.primitives = {
                make(S::kRectangle, {-0.35, 0.35}, {0.30, 0.22}, 0.0, {1.0, 0.0}),
                make(S::kDisc, {0.40, 0.40}, {0.26, 0.26}, 0.0, {0.8, 0.3}),
                make(S::kEllipse, {0.35, -0.35}, {0.30, 0.18}, kPi / 4.0, {1.1, 0.0}),
                make(S::kDisc, {-0.40, -0.40}, {0.28, 0.28}, 0.0, {0.9, 0.0}),
                make(S::kDisc, {-0.40, -0.40}, {0.16, 0.16}, 0.0, {-0.9, 0.0}),
                make(S::kRectangle, {0.0, 0.0}, {0.10, 0.10}, kPi / 4.0, {1.5, 0.0}),
            };
            break;
        case PhantomKind::kSheppLogan:
            break;  // table is canonical
        case PhantomKind::kGaussian:
            break;
        case PhantomKind::kDisc:
            spec.primitives = {make(S::kDisc, {0.0, 0.0}, {0.5, 0.5}, 0.0, {1.0, 0.0})};
            break;
    }
    return spec;
}

bool kind_is_composite(PhantomKind kind) {
    return kind != PhantomKind::kGaussian;
}

}  // namespace bklab
