#include "bklab/engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bklab/fft.hpp"

namespace bklab {

EngineKind engine_kind_from_string(const std::string& name) {
    if (name == "naive") return EngineKind::kNaive;
    if (name == "separable") return EngineKind::kSeparable;
    if (name == "spectral") return EngineKind::kSpectral;
    throw std::invalid_argument("unknown engine: " + name);
}

std::string to_string(EngineKind kind) {
    switch (kind) {
        case EngineKind::kNaive: return "naive";
        case EngineKind::kSeparable: return "separable";
        case EngineKind::kSpectral: return "spectral";
    }
    return "unknown";
}

PhaseContext::PhaseContext(Vec2 x_, double lambda_) : x(x_), lambda(lambda_) {
    if (!(lambda > 0.0)) throw std::invalid_argument("PhaseContext: lambda must be > 0");
}

cplx complex_phase(const PhaseContext& ctx, Vec2 z) {
    const cplx d{z[0] - ctx.x[0], z[1] - ctx.x[1]};
    return 0.5 * d * d;
}

double real_phase(const PhaseContext& ctx, Vec2 z) {
    const double dx = z[0] - ctx.x[0];
    const double dy = z[1] - ctx.x[1];
    return dx * dx - dy * dy;
}

double required_spacing(double lambda, double half_width) {
    return kPi / (8.0 * lambda * half_width);
}

void check_resolution(const Grid2& grid, double lambda) {
    const double req = required_spacing(lambda, grid.half_width());
    if (grid.spacing > req * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "main term quadrature under-resolved: spacing " << grid.spacing
            << " exceeds pi/(8*lambda*L) = " << req << " (lambda=" << lambda
            << ", L=" << grid.half_width() << "); refine the input mesh";
        throw std::invalid_argument(msg.str());
    }
}

namespace {

inline double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

/// Trapezoid-weighted samples; all engines quadrature the same weighted sum.
std::vector<cplx> weighted_samples(const ScalarField& q) {
    const Grid2& g = q.grid;
    std::vector<cplx> wq(q.samples.size());
    std::size_t idx = 0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double wy = trap_weight(iy, g.ny);
        for (int ix = 0; ix < g.nx; ++ix, ++idx)
            wq[idx] = q.samples[idx] * (wy * trap_weight(ix, g.nx));
    }
    return wq;
}

cplx point_sum(const std::vector<cplx>& wq, const Grid2& g, const PhaseContext& ctx,
               Summation scheme) {
    const double lambda = ctx.lambda;
    // row-wise accumulation in index order, then a fixed reduction over rows
    std::vector<cplx> row_sums(g.ny);
    for (int iy = 0; iy < g.ny; ++iy) {
        const double dy = g.y(iy) - ctx.x[1];
        const cplx chirp_y = std::polar(1.0, -lambda * dy * dy);
        const cplx* row = &wq[static_cast<std::size_t>(iy) * g.nx];
        cplx acc{};
        for (int ix = 0; ix < g.nx; ++ix) {
            const double dx = g.x(ix) - ctx.x[0];
            acc += row[ix] * std::polar(1.0, lambda * dx * dx);
        }
        row_sums[iy] = acc * chirp_y;
    }
    if (scheme == Summation::kPairwise)
        return pairwise_map_sum(0, row_sums.size(), [&](std::size_t i) { return row_sums[i]; });
    return sequential_map_sum(0, row_sums.size(), [&](std::size_t i) { return row_sums[i]; });
}

struct NestedIndex {
    int off_x = 0, off_y = 0, stride = 1;
};

NestedIndex nested_index(const Grid2& out, const Grid2& in, const char* engine_name) {
    if (!grid_is_nested(out, in)) {
        std::ostringstream msg;
        msg << engine_name << " engine requires the output grid to be nested in the "
            << "input lattice (integer stride and aligned origin)";
        throw std::invalid_argument(msg.str());
    }
    NestedIndex n;
    n.stride = static_cast<int>(std::round(out.spacing / in.spacing));
    n.off_x = static_cast<int>(std::round((out.origin[0] - in.origin[0]) / in.spacing));
    n.off_y = static_cast<int>(std::round((out.origin[1] - in.origin[1]) / in.spacing));
    return n;
}

void check_out_inside(const Grid2& out, const Grid2& in) {
    const double tol = 1e-9 * in.spacing;
    if (out.origin[0] < in.origin[0] - tol || out.origin[1] < in.origin[1] - tol ||
        out.origin[0] + out.extent_x() > in.origin[0] + in.extent_x() + tol ||
        out.origin[1] + out.extent_y() > in.origin[1] + in.extent_y() + tol)
        throw std::invalid_argument("main_term_grid: output grid exits the input extent");
}

ScalarField grid_naive(const std::vector<cplx>& wq, const ScalarField& q, double lambda,
                       const Grid2& out, const EngineConfig& cfg) {
    const Grid2& g = q.grid;
    ScalarField result(out);
    const double scale_re = lambda / kPi * g.spacing * g.spacing;
#pragma omp parallel for schedule(static)
    for (int oy = 0; oy < out.ny; ++oy) {
        for (int ox = 0; ox < out.nx; ++ox) {
            PhaseContext ctx(out.node(ox, oy), lambda);
            result.at(ox, oy) = scale_re * point_sum(wq, g, ctx, cfg.summation);
        }
    }
    return result;
}

ScalarField grid_separable(const std::vector<cplx>& wq, const ScalarField& q, double lambda,
                           const Grid2& out, const EngineConfig& cfg) {
    const Grid2& g = q.grid;
    nested_index(out, g, "separable");

    // chirp tables: one sincos per (output coordinate, input coordinate)
    std::vector<cplx> chirp_x(static_cast<std::size_t>(out.nx) * g.nx);
    for (int ox = 0; ox < out.nx; ++ox)
        for (int ix = 0; ix < g.nx; ++ix) {
            const double dx = g.x(ix) - out.x(ox);
            chirp_x[static_cast<std::size_t>(ox) * g.nx + ix] =
                std::polar(1.0, lambda * dx * dx);
        }
    std::vector<cplx> chirp_y(static_cast<std::size_t>(out.ny) * g.ny);
    for (int oy = 0; oy < out.ny; ++oy)
        for (int iy = 0; iy < g.ny; ++iy) {
            const double dy = g.y(iy) - out.y(oy);
            chirp_y[static_cast<std::size_t>(oy) * g.ny + iy] =
                std::polar(1.0, -lambda * dy * dy);
        }

    // partial row sums: rows[ox][iy] = sum_ix wq(ix,iy) chirp_x(ox,ix)
    std::vector<cplx> rows(static_cast<std::size_t>(out.nx) * g.ny);
#pragma omp parallel for schedule(static)
    for (int ox = 0; ox < out.nx; ++ox) {
        const cplx* cx = &chirp_x[static_cast<std::size_t>(ox) * g.nx];
        for (int iy = 0; iy < g.ny; ++iy) {
            const cplx* row = &wq[static_cast<std::size_t>(iy) * g.nx];
            cplx acc{};
            for (int ix = 0; ix < g.nx; ++ix) acc += row[ix] * cx[ix];
            rows[static_cast<std::size_t>(ox) * g.ny + iy] = acc;
        }
    }

    ScalarField result(out);
    const double scale = lambda / kPi * g.spacing * g.spacing;
#pragma omp parallel for schedule(static)
    for (int oy = 0; oy < out.ny; ++oy) {
        const cplx* cy = &chirp_y[static_cast<std::size_t>(oy) * g.ny];
        for (int ox = 0; ox < out.nx; ++ox) {
            const cplx* r = &rows[static_cast<std::size_t>(ox) * g.ny];
            cplx acc;
            if (cfg.summation == Summation::kPairwise)
                acc = pairwise_map_sum(0, static_cast<std::size_t>(g.ny),
                                       [&](std::size_t iy) { return r[iy] * cy[iy]; });
            else
                acc = sequential_map_sum(0, static_cast<std::size_t>(g.ny),
                                         [&](std::size_t iy) { return r[iy] * cy[iy]; });
            result.at(ox, oy) = scale * acc;
        }
    }
    return result;
}

ScalarField grid_spectral(const std::vector<cplx>& wq, const ScalarField& q, double lambda,
                          const Grid2& out, const EngineConfig& cfg) {
    const Grid2& g = q.grid;
    const NestedIndex nest = nested_index(out, g, "spectral");
    if (cfg.pad_factor < 2)
        throw std::invalid_argument("spectral engine: pad_factor must be >= 2");
    const int mx = cfg.pad_factor * g.nx;
    const int my = cfg.pad_factor * g.ny;

    std::vector<cplx> buf(static_cast<std::size_t>(mx) * my, cplx{});
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            buf[static_cast<std::size_t>(iy) * mx + ix] = wq[static_cast<std::size_t>(iy) * g.nx + ix];
    fft2_inplace(buf, mx, my, -1);

    double out_scale = 1.0;
    if (cfg.spectral_kernel == SpectralKernel::kAnalytic) {
        // Continuum multiplier of (lambda/pi) e^{i lambda (z1^2 - z2^2)};
        // quadrature weight and DFT normalization cancel against the inverse
        // transform.
        const double dxi_x = 2.0 * kPi / (mx * g.spacing);
        const double dxi_y = 2.0 * kPi / (my * g.spacing);
        const double inv4l = 1.0 / (4.0 * lambda);
#pragma omp parallel for schedule(static)
        for (int ky = 0; ky < my; ++ky) {
            const int ky_s = (ky <= my / 2) ? ky : ky - my;
            const double xi_y = dxi_y * ky_s;
            for (int kx = 0; kx < mx; ++kx) {
                const int kx_s = (kx <= mx / 2) ? kx : kx - mx;
                const double xi_x = dxi_x * kx_s;
                buf[static_cast<std::size_t>(ky) * mx + kx] *=
                    std::polar(1.0, -(xi_x * xi_x - xi_y * xi_y) * inv4l);
            }
        }
    } else {
        // DFT of the chirp sampled at every lattice offset the nested output
        // can request; with pad_factor >= 2 the circular convolution below is
        // the exact linear one.
        std::vector<cplx> kernel(static_cast<std::size_t>(mx) * my, cplx{});
        const double h = g.spacing;
#pragma omp parallel for schedule(static)
        for (int my_off = -(g.ny - 1); my_off <= g.ny - 1; ++my_off) {
            const std::size_t iy = static_cast<std::size_t>((my_off + my) % my);
            const double py = lambda * (my_off * h) * (my_off * h);
            for (int mx_off = -(g.nx - 1); mx_off <= g.nx - 1; ++mx_off) {
                const std::size_t ix = static_cast<std::size_t>((mx_off + mx) % mx);
                kernel[iy * mx + ix] =
                    std::polar(1.0, lambda * (mx_off * h) * (mx_off * h) - py);
            }
        }
        fft2_inplace(kernel, mx, my, -1);
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= kernel[i];
        out_scale = lambda / kPi * h * h;
    }
    ifft2_inplace(buf, mx, my);

    ScalarField result(out);
    for (int oy = 0; oy < out.ny; ++oy) {
        const std::size_t iy = static_cast<std::size_t>(nest.off_y) + static_cast<std::size_t>(nest.stride) * oy;
        for (int ox = 0; ox < out.nx; ++ox) {
            const std::size_t ix = static_cast<std::size_t>(nest.off_x) + static_cast<std::size_t>(nest.stride) * ox;
            result.at(ox, oy) = out_scale * buf[iy * mx + ix];
        }
    }
    return result;
}

}  // namespace

cplx main_term_point(const ScalarField& q, const PhaseContext& ctx, const EngineConfig& cfg) {
    const ScalarField refined = refine_field(q, cfg.refinement);
    check_resolution(refined.grid, ctx.lambda);
    const std::vector<cplx> wq = weighted_samples(refined);
    const double h = refined.grid.spacing;
    return ctx.lambda / kPi * h * h * point_sum(wq, refined.grid, ctx, cfg.summation);
}

ScalarField main_term_grid(const ScalarField& q, double lambda, const Grid2& out,
                           const EngineConfig& cfg) {
    if (!(lambda > 0.0)) throw std::invalid_argument("main_term_grid: lambda must be > 0");
    const ScalarField refined = refine_field(q, cfg.refinement);
    check_out_inside(out, refined.grid);
    if (cfg.engine != EngineKind::kSpectral) check_resolution(refined.grid, lambda);
    const std::vector<cplx> wq = weighted_samples(refined);
    switch (cfg.engine) {
        case EngineKind::kNaive: return grid_naive(wq, refined, lambda, out, cfg);
        case EngineKind::kSeparable: return grid_separable(wq, refined, lambda, out, cfg);
        case EngineKind::kSpectral: return grid_spectral(wq, refined, lambda, out, cfg);
    }
    throw std::logic_error("main_term_grid: unreachable");
}

}  // namespace bklab
