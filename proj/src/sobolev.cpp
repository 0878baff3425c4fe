#include "bklab/sobolev.hpp"

#include <cmath>
#include <stdexcept>

#include "bklab/fft.hpp"

namespace bklab {

double sobolev_norm(const ScalarField& f, double s) {
    if (!(s > -1.0 && s < 3.0))
        throw std::invalid_argument("sobolev_norm: s must lie in (-1, 3)");
    const Grid2& g = f.grid;
    const int mx = 2 * g.nx;
    const int my = 2 * g.ny;
    std::vector<cplx> buf(static_cast<std::size_t>(mx) * my, cplx{});
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            buf[static_cast<std::size_t>(iy) * mx + ix] = f.at(ix, iy);
    fft2_inplace(buf, mx, my, -1);

    // |f|^2 = h^2/(mx my) * sum_{k != 0} |xi_k|^{2s} |DFT_k|^2, with the
    // (2 pi)^-2 Plancherel factor already folded in so that s = 0 recovers
    // the discrete L2 norm.
    const double dxi_x = 2.0 * kPi / (mx * g.spacing);
    const double dxi_y = 2.0 * kPi / (my * g.spacing);
    double acc = 0.0;
    for (int ky = 0; ky < my; ++ky) {
        const int ky_s = (ky <= my / 2) ? ky : ky - my;
        const double xi_y = dxi_y * ky_s;
        for (int kx = 0; kx < mx; ++kx) {
            const int kx_s = (kx <= mx / 2) ? kx : kx - mx;
            if (kx_s == 0 && ky_s == 0) continue;
            const double xi_x = dxi_x * kx_s;
            const double xi2 = xi_x * xi_x + xi_y * xi_y;
            const cplx& v = buf[static_cast<std::size_t>(ky) * mx + kx];
            acc += std::pow(xi2, s) * std::norm(v);
        }
    }
    const double scale = g.spacing * g.spacing / (static_cast<double>(mx) * my);
    return std::sqrt(scale * acc);
}

}  // namespace bklab
