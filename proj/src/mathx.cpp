#include "bklab/mathx.hpp"

#include <cassert>
#include <stdexcept>

namespace bklab {

// Rational approximation for |x| <= 8, Hart-style coefficients; beyond that
// the standard asymptotic form sqrt(2/(pi x)) * (P cos - Q sin).
double bessel_j0(double x) {
    const double ax = std::fabs(x);
    if (ax < 8.0) {
        const double y = x * x;
        const double p1 = 57568490574.0 + y * (-13362590354.0 +
                          y * (651619640.7 + y * (-11214424.18 +
                          y * (77392.33017 + y * (-184.9052456)))));
        const double p2 = 57568490411.0 + y * (1029532985.0 +
                          y * (9494680.718 + y * (59272.64853 +
                          y * (267.8532712 + y))));
        return p1 / p2;
    }
    const double z = 8.0 / ax;
    const double y = z * z;
    const double xx = ax - 0.785398164;
    const double p1 = 1.0 + y * (-0.1098628627e-2 + y * (0.2734510407e-4 +
                      y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
    const double p2 = -0.1562499995e-1 + y * (0.1430488765e-3 +
                      y * (-0.6911147651e-5 + y * (0.7621095161e-6 +
                      y * (-0.934935152e-7))));
    return std::sqrt(0.636619772 / ax) * (std::cos(xx) * p1 - z * std::sin(xx) * p2);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matched points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit out;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    return out;
}

}  // namespace bklab
