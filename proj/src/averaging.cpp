#include "bklab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bklab/fft.hpp"
#include "bklab/phantom.hpp"

namespace bklab {

MollifierSpec::MollifierSpec(double sigma_) : sigma(sigma_) {
    if (!(sigma > 0.0)) throw std::invalid_argument("MollifierSpec: sigma must be > 0");
}

void AveragingParams::validate() const {
    if (n_angles < 8 || n_angles % 2 != 0)
        throw std::invalid_argument("AveragingParams: n_angles must be even and >= 8");
    if (n_srad < 8) throw std::invalid_argument("AveragingParams: n_srad must be >= 8");
    if (freq_depth < 0) throw std::invalid_argument("AveragingParams: freq_depth must be >= 0");
    for (double s : sigma_grid)
        if (!(s > 0.0)) throw std::invalid_argument("AveragingParams: sigma_grid entries must be > 0");
}

namespace {

struct MollifierKernel {
    int rc = 0;                  // tap radius in cells
    std::vector<double> taps;    // (2rc+1)^2 values, unit discrete mass * h^2
};

MollifierKernel build_kernel(double sigma, double h) {
    if (sigma < h * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "mollify: sigma " << sigma << " is below the grid spacing " << h
            << "; the discrete kernel would degenerate";
        throw std::invalid_argument(msg.str());
    }
    MollifierKernel k;
    k.rc = static_cast<int>(std::ceil(sigma / h));
    const int w = 2 * k.rc + 1;
    k.taps.assign(static_cast<std::size_t>(w) * w, 0.0);
    double mass = 0.0;
    for (int ky = -k.rc; ky <= k.rc; ++ky)
        for (int kx = -k.rc; kx <= k.rc; ++kx) {
            const double r = std::hypot(kx * h, ky * h) / sigma;
            const double v = bump_profile(r);
            k.taps[static_cast<std::size_t>(ky + k.rc) * w + (kx + k.rc)] = v;
            mass += v;
        }
    const double scale = 1.0 / (mass * h * h);
    for (double& t : k.taps) t *= scale;
    return k;
}

ScalarField mollify_direct(const ScalarField& f, const MollifierKernel& k) {
    const Grid2& g = f.grid;
    const int w = 2 * k.rc + 1;
    const double h2 = g.spacing * g.spacing;
    ScalarField out(g);
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            cplx acc{};
            const int y0 = std::max(0, iy - k.rc), y1 = std::min(g.ny - 1, iy + k.rc);
            const int x0 = std::max(0, ix - k.rc), x1 = std::min(g.nx - 1, ix + k.rc);
            for (int jy = y0; jy <= y1; ++jy) {
                const double* tap_row =
                    &k.taps[static_cast<std::size_t>(iy - jy + k.rc) * w + k.rc];
                const cplx* f_row = &f.samples[static_cast<std::size_t>(jy) * g.nx];
                for (int jx = x0; jx <= x1; ++jx)
                    acc += tap_row[ix - jx] * f_row[jx];
            }
            out.at(ix, iy) = h2 * acc;
        }
    }
    return out;
}

ScalarField mollify_fft(const ScalarField& f, const MollifierKernel& k) {
    const Grid2& g = f.grid;
    const int w = 2 * k.rc + 1;
    auto padded = [](int n) { return ((n + 15) / 16) * 16; };
    const int mx = padded(g.nx + w);
    const int my = padded(g.ny + w);
    std::vector<cplx> fbuf(static_cast<std::size_t>(mx) * my, cplx{});
    std::vector<cplx> kbuf(static_cast<std::size_t>(mx) * my, cplx{});
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            fbuf[static_cast<std::size_t>(iy) * mx + ix] = f.at(ix, iy);
    for (int ky = -k.rc; ky <= k.rc; ++ky)
        for (int kx = -k.rc; kx <= k.rc; ++kx) {
            const std::size_t iy = static_cast<std::size_t>((ky + my) % my);
            const std::size_t ix = static_cast<std::size_t>((kx + mx) % mx);
            kbuf[iy * mx + ix] =
                k.taps[static_cast<std::size_t>(ky + k.rc) * w + (kx + k.rc)];
        }
    fft2_inplace(fbuf, mx, my, -1);
    fft2_inplace(kbuf, mx, my, -1);
    for (std::size_t i = 0; i < fbuf.size(); ++i) fbuf[i] *= kbuf[i];
    ifft2_inplace(fbuf, mx, my);
    const double h2 = g.spacing * g.spacing;
    ScalarField out(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            out.at(ix, iy) = h2 * fbuf[static_cast<std::size_t>(iy) * mx + ix];
    return out;
}

}  // namespace

ScalarField mollify(const ScalarField& f, const MollifierSpec& m) {
    const MollifierKernel k = build_kernel(m.sigma, f.grid.spacing);
    const int w = 2 * k.rc + 1;
    // single-tap kernel is the identity; keep it exact
    bool identity = true;
    for (int i = 0; i < w * w && identity; ++i)
        identity = (i == (w * w) / 2) || k.taps[i] == 0.0;
    if (identity) return f;
    if (static_cast<long>(w) * w <= 4096) return mollify_direct(f, k);
    return mollify_fft(f, k);
}

double sigma_from_lambda(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("sigma_from_lambda: lambda must be > 0");
    return std::pow(lambda, -0.25);
}

std::vector<double> default_sigma_grid(double lambda, double spacing) {
    const double lo = spacing;
    const double hi = 4.0 * sigma_from_lambda(lambda);
    if (!(hi > lo)) return {lo};
    const int n = 16;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

namespace {

/// theta average of the chirp in closed form: the J0 radial kernel, sampled
/// at every lattice offset and convolved by FFT (wraparound-free at pad 2).
ScalarField angular_fast(const ScalarField& q, double lambda, const Grid2& out) {
    const Grid2& g = q.grid;
    if (!grid_is_nested(out, g))
        throw std::invalid_argument(
            "angular_average_recon: output grid must be nested in the input lattice");
    const int stride = static_cast<int>(std::round(out.spacing / g.spacing));
    const int off_x = static_cast<int>(std::round((out.origin[0] - g.origin[0]) / g.spacing));
    const int off_y = static_cast<int>(std::round((out.origin[1] - g.origin[1]) / g.spacing));

    const int mx = 2 * g.nx;
    const int my = 2 * g.ny;
    const double h = g.spacing;

    std::vector<cplx> fbuf(static_cast<std::size_t>(mx) * my, cplx{});
    for (int iy = 0; iy < g.ny; ++iy) {
        const double wy = (iy == 0 || iy == g.ny - 1) ? 0.5 : 1.0;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double wx = (ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0;
            fbuf[static_cast<std::size_t>(iy) * mx + ix] = q.at(ix, iy) * (wx * wy);
        }
    }

    std::vector<cplx> kbuf(static_cast<std::size_t>(mx) * my, cplx{});
#pragma omp parallel for schedule(static)
    for (int ky = -(g.ny - 1); ky <= g.ny - 1; ++ky) {
        const std::size_t iy = static_cast<std::size_t>((ky + my) % my);
        for (int kx = -(g.nx - 1); kx <= g.nx - 1; ++kx) {
            const std::size_t ix = static_cast<std::size_t>((kx + mx) % mx);
            const double r2 = (kx * static_cast<double>(kx) + ky * static_cast<double>(ky)) * h * h;
            kbuf[iy * mx + ix] = cplx{bessel_j0(lambda * r2), 0.0};
        }
    }

    fft2_inplace(fbuf, mx, my, -1);
    fft2_inplace(kbuf, mx, my, -1);
    for (std::size_t i = 0; i < fbuf.size(); ++i) fbuf[i] *= kbuf[i];
    ifft2_inplace(fbuf, mx, my);

    const double scale = lambda / kPi * h * h;
    ScalarField result(out);
    for (int oy = 0; oy < out.ny; ++oy) {
        const std::size_t iy = static_cast<std::size_t>(off_y) + static_cast<std::size_t>(stride) * oy;
        for (int ox = 0; ox < out.nx; ++ox) {
            const std::size_t ix = static_cast<std::size_t>(off_x) + static_cast<std::size_t>(stride) * ox;
            result.at(ox, oy) = scale * fbuf[iy * mx + ix];
        }
    }
    return result;
}

ScalarField angular_reference(const ScalarField& q, double lambda, const Grid2& out,
                              const AveragingParams& p, const EngineConfig& cfg) {
    ScalarField result(out);
    EngineConfig point_cfg = cfg;
    point_cfg.refinement = 1;  // q is already refined by the caller
#pragma omp parallel for schedule(static)
    for (int oy = 0; oy < out.ny; ++oy) {
        for (int ox = 0; ox < out.nx; ++ox) {
            const Vec2 x = out.node(ox, oy);
            cplx acc{};
            for (int k = 0; k < p.n_angles; ++k) {
                const double theta = 2.0 * kPi * k / p.n_angles;
                const ScalarField rotated = rotate_field(q, x, theta);
                acc += main_term_point(rotated, PhaseContext(x, lambda), point_cfg);
            }
            result.at(ox, oy) = acc / static_cast<double>(p.n_angles);
        }
    }
    return result;
}

}  // namespace

ScalarField angular_average_recon(const ScalarField& q, double lambda, const Grid2& out,
                                  const AveragingParams& p, const EngineConfig& cfg,
                                  AngularPath path) {
    p.validate();
    if (!(lambda > 0.0))
        throw std::invalid_argument("angular_average_recon: lambda must be > 0");
    const ScalarField refined = refine_field(q, cfg.refinement);
    check_resolution(refined.grid, lambda);
    if (path == AngularPath::kFast) return angular_fast(refined, lambda, out);
    return angular_reference(refined, lambda, out, p, cfg);
}

RadialProfile radial_smooth(const RadialProfile& f, const AveragingParams& p) {
    p.validate();
    const int n = p.n_srad;
    // the smoothing dilates support by sqrt(2); extend the lattice (same
    // cell size) so nothing is truncated
    const double dr = f.dr();
    const int nr_out = static_cast<int>(std::ceil(std::sqrt(2.0) * (f.nr() - 1))) + 1;
    const double r_max_out = dr * (nr_out - 1);
    std::vector<cplx> out(nr_out);
    for (int k = 0; k < nr_out; ++k) {
        const double r = dr * k;
        cplx acc{};
        for (int i = 0; i <= n; ++i) {
            const double s = static_cast<double>(i) / n;
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += w * f.sample(r / std::sqrt(1.0 + s));
        }
        out[k] = acc / static_cast<double>(n);
    }
    return RadialProfile(r_max_out, std::move(out));
}

cplx SampledFreqMap::sample(double t) const {
    const double u = (t - t0) / dt;
    if (u < -1e-9 || u > values.size() - 1 + 1e-9)
        throw std::invalid_argument("SampledFreqMap: t outside the lattice");
    const double uc = std::clamp(u, 0.0, static_cast<double>(values.size() - 1));
    int i = static_cast<int>(uc);
    if (i > static_cast<int>(values.size()) - 2) i = static_cast<int>(values.size()) - 2;
    const double frac = uc - i;
    return (1.0 - frac) * values[i] + frac * values[i + 1];
}

cplx freq_average(const SampledFreqMap& F, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("freq_average: lambda must be > 0");
    if (F.values.size() < 2 || !(F.dt > 0.0))
        throw std::invalid_argument("freq_average: degenerate lattice");
    const double a = lambda, b = 2.0 * lambda;
    const double tol = 1e-9 * lambda;
    if (F.t0 > a + tol || F.t_max() < b - tol)
        throw std::invalid_argument("freq_average: lattice does not cover [lambda, 2*lambda]");
    long inside = 0;
    for (std::size_t i = 0; i < F.values.size(); ++i) {
        const double t = F.t0 + F.dt * i;
        if (t >= a - tol && t <= b + tol) ++inside;
    }
    if (inside < 32)
        throw std::invalid_argument(
            "freq_average: need >= 32 lattice samples inside [lambda, 2*lambda]");

    const long ia = static_cast<long>(std::ceil((a - F.t0) / F.dt - 1e-12));
    const long ib = static_cast<long>(std::floor((b - F.t0) / F.dt + 1e-12));
    cplx integral{};
    for (long i = ia; i < ib; ++i)
        integral += 0.5 * (F.values[i] + F.values[i + 1]) * F.dt;
    const double ta = F.t0 + F.dt * ia;
    const double tb = F.t0 + F.dt * ib;
    if (ta > a) integral += 0.5 * (F.sample(a) + F.values[ia]) * (ta - a);
    if (tb < b) integral += 0.5 * (F.values[ib] + F.sample(b)) * (b - tb);
    return integral / lambda;
}

cplx freq_average_iterated(const SampledFreqMap& F, double lambda, int depth) {
    if (depth < 1) throw std::invalid_argument("freq_average_iterated: depth must be >= 1");
    if (depth == 1) return freq_average(F, lambda);
    // build A_freq^{depth-1} on a lattice covering [lambda, 2*lambda], then
    // average once more
    SampledFreqMap inner;
    inner.t0 = lambda;
    inner.dt = F.dt;
    const long n = static_cast<long>(std::ceil(lambda / F.dt)) + 2;
    inner.values.resize(n);
    for (long i = 0; i < n; ++i)
        inner.values[i] = freq_average_iterated(F, lambda + F.dt * i, depth - 1);
    return freq_average(inner, lambda);
}

std::vector<RadialProfile> v_pipeline(const ScalarField& q, Vec2 center,
                                      const AveragingParams& p) {
    p.validate();
    const Grid2& g = q.grid;
    double r_max = 0.0;
    for (int cy = 0; cy < 2; ++cy)
        for (int cx = 0; cx < 2; ++cx) {
            const double dx = g.x(cx * (g.nx - 1)) - center[0];
            const double dy = g.y(cy * (g.ny - 1)) - center[1];
            r_max = std::max(r_max, std::hypot(dx, dy));
        }
    const int nr = 2 * std::max(g.nx, g.ny);
    const PolarTable polar = to_polar(q, center, r_max, nr, p.n_angles);
    std::vector<RadialProfile> v;
    v.push_back(polar.angular_mean());
    for (int j = 0; j < 3; ++j) v.push_back(radial_smooth(v.back(), p));
    return v;
}

ScalarField combined_recon(const ScalarField& q, double lambda, const Grid2& out,
                           const AveragingParams& p, const MollifierSpec& m,
                           const EngineConfig& cfg) {
    return mollify(angular_average_recon(q, lambda, out, p, cfg, AngularPath::kFast), m);
}

}  // namespace bklab
