#include "bklab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bklab {

Grid2::Grid2(Vec2 origin_, double spacing_, int nx_, int ny_)
    : origin(origin_), spacing(spacing_), nx(nx_), ny(ny_) {
    if (!(spacing > 0.0)) throw std::invalid_argument("Grid2: spacing must be > 0");
    if (nx < 2 || ny < 2) throw std::invalid_argument("Grid2: need nx, ny >= 2");
}

Grid2 Grid2::centered_square(double half_width, int n) {
    if (!(half_width > 0.0)) throw std::invalid_argument("Grid2: half_width must be > 0");
    if (n < 2) throw std::invalid_argument("Grid2: need n >= 2");
    return Grid2({-half_width, -half_width}, 2.0 * half_width / (n - 1), n, n);
}

double Grid2::half_width() const { return 0.5 * std::max(extent_x(), extent_y()); }

bool Grid2::operator==(const Grid2& other) const {
    return nx == other.nx && ny == other.ny && spacing == other.spacing &&
           origin[0] == other.origin[0] && origin[1] == other.origin[1];
}

ScalarField::ScalarField(const Grid2& g, std::vector<cplx> s) : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.size())
        throw std::invalid_argument("ScalarField: sample count != nx*ny");
}

void ScalarField::require_finite() const {
    for (const cplx& v : samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("ScalarField: non-finite sample");
}

RadialProfile::RadialProfile(double r_max_, std::vector<cplx> v)
    : r_max(r_max_), values(std::move(v)) {
    if (!(r_max > 0.0)) throw std::invalid_argument("RadialProfile: r_max must be > 0");
    if (values.size() < 2) throw std::invalid_argument("RadialProfile: need nr >= 2");
}

cplx RadialProfile::sample(double r) const {
    if (r <= 0.0) return values.front();
    if (r >= r_max) return (r > r_max) ? cplx{} : values.back();
    const double u = r / dr();
    int k = static_cast<int>(u);
    if (k > nr() - 2) k = nr() - 2;
    const double t = u - k;
    return (1.0 - t) * values[k] + t * values[k + 1];
}

RadialProfile PolarTable::angular_mean() const {
    std::vector<cplx> mean(nr);
    for (int k = 0; k < nr; ++k) {
        cplx acc{};
        for (int j = 0; j < ntheta; ++j) acc += at(k, j);
        mean[k] = acc / static_cast<double>(ntheta);
    }
    return RadialProfile(r_max, std::move(mean));
}

cplx sample_at(const ScalarField& f, Vec2 p) {
    const Grid2& g = f.grid;
    const double u = (p[0] - g.origin[0]) / g.spacing;
    const double v = (p[1] - g.origin[1]) / g.spacing;
    if (u < 0.0 || u > g.nx - 1 || v < 0.0 || v > g.ny - 1) return cplx{};
    int ix = static_cast<int>(u);
    int iy = static_cast<int>(v);
    if (ix > g.nx - 2) ix = g.nx - 2;
    if (iy > g.ny - 2) iy = g.ny - 2;
    const double fx = u - ix;
    const double fy = v - iy;
    const cplx f00 = f.at(ix, iy);
    const cplx f10 = f.at(ix + 1, iy);
    const cplx f01 = f.at(ix, iy + 1);
    const cplx f11 = f.at(ix + 1, iy + 1);
    return (1.0 - fy) * ((1.0 - fx) * f00 + fx * f10) +
           fy * ((1.0 - fx) * f01 + fx * f11);
}

PolarTable to_polar(const ScalarField& f, Vec2 center, double r_max, int nr, int ntheta) {
    if (nr < 2 || ntheta < 2) throw std::invalid_argument("to_polar: need nr, ntheta >= 2");
    if (!(r_max > 0.0)) throw std::invalid_argument("to_polar: r_max must be > 0");
    PolarTable t;
    t.r_max = r_max;
    t.nr = nr;
    t.ntheta = ntheta;
    t.values.resize(static_cast<std::size_t>(nr) * ntheta);
    for (int k = 0; k < nr; ++k) {
        const double r = r_max * k / (nr - 1);
        for (int j = 0; j < ntheta; ++j) {
            const double theta = 2.0 * kPi * j / ntheta;
            t.at(k, j) = sample_at(f, {center[0] + r * std::cos(theta),
                                       center[1] + r * std::sin(theta)});
        }
    }
    return t;
}

ScalarField refine_field(const ScalarField& f, int factor) {
    if (factor < 1) throw std::invalid_argument("refine_field: factor must be >= 1");
    if (factor == 1) return f;
    const Grid2& g = f.grid;
    Grid2 fine(g.origin, g.spacing / factor, (g.nx - 1) * factor + 1, (g.ny - 1) * factor + 1);
    ScalarField out(fine);
    for (int iy = 0; iy < fine.ny; ++iy)
        for (int ix = 0; ix < fine.nx; ++ix)
            out.at(ix, iy) = sample_at(f, fine.node(ix, iy));
    return out;
}

Grid2 nested_output_grid(const Grid2& input, int n) {
    if (n < 2) throw std::invalid_argument("nested_output_grid: need n >= 2");
    if (n > std::min(input.nx, input.ny))
        throw std::invalid_argument("nested_output_grid: output larger than input lattice");
    const int stride = std::min((input.nx - 1) / (n - 1), (input.ny - 1) / (n - 1));
    const int off_x = (input.nx - 1 - stride * (n - 1)) / 2;
    const int off_y = (input.ny - 1 - stride * (n - 1)) / 2;
    return Grid2({input.x(off_x), input.y(off_y)}, input.spacing * stride, n, n);
}

bool grid_is_nested(const Grid2& out, const Grid2& in) {
    const double tol = 1e-9 * in.spacing;
    const double ratio = out.spacing / in.spacing;
    const double stride = std::round(ratio);
    if (stride < 1.0 || std::fabs(ratio - stride) > 1e-9) return false;
    for (int axis = 0; axis < 2; ++axis) {
        const double off = (out.origin[axis] - in.origin[axis]) / in.spacing;
        if (std::fabs(off - std::round(off)) > 1e-9 || std::round(off) < 0) return false;
    }
    const double end_x = out.origin[0] + out.extent_x();
    const double end_y = out.origin[1] + out.extent_y();
    return end_x <= in.origin[0] + in.extent_x() + tol &&
           end_y <= in.origin[1] + in.extent_y() + tol;
}

namespace {

template <typename T>
void write_le(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void write_field(const ScalarField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    os.write("BKF1", 4);
    write_le<std::int32_t>(os, f.grid.nx);
    write_le<std::int32_t>(os, f.grid.ny);
    write_le<double>(os, f.grid.spacing);
    write_le<double>(os, f.grid.origin[0]);
    write_le<double>(os, f.grid.origin[1]);
    for (const cplx& v : f.samples) {
        write_le<double>(os, v.real());
        write_le<double>(os, v.imag());
    }
    if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

ScalarField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "BKF1", 4) != 0)
        throw std::runtime_error("read_field: bad magic in " + path);
    const auto nx = read_le<std::int32_t>(is);
    const auto ny = read_le<std::int32_t>(is);
    const auto spacing = read_le<double>(is);
    const auto ox = read_le<double>(is);
    const auto oy = read_le<double>(is);
    if (!is || nx < 2 || ny < 2 || !(spacing > 0.0))
        throw std::runtime_error("read_field: bad header in " + path);
    ScalarField f(Grid2({ox, oy}, spacing, nx, ny));
    for (cplx& v : f.samples) {
        const double re = read_le<double>(is);
        const double im = read_le<double>(is);
        v = cplx{re, im};
    }
    if (!is) throw std::runtime_error("read_field: truncated file " + path);
    f.require_finite();
    return f;
}

}  // namespace bklab
