#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bklab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Pairwise (cascade) reduction of f(i) over [begin, end).
/// The reduction tree depends only on the index range, never on thread
/// count, so results are reproducible for a fixed input.
template <typename F>
cplx pairwise_map_sum(std::size_t begin, std::size_t end, F&& f) {
    const std::size_t n = end - begin;
    if (n <= 64) {
        cplx acc{0.0, 0.0};
        for (std::size_t i = begin; i < end; ++i) acc += f(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_map_sum(begin, mid, f) + pairwise_map_sum(mid, end, f);
}

template <typename F>
cplx sequential_map_sum(std::size_t begin, std::size_t end, F&& f) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = begin; i < end; ++i) acc += f(i);
    return acc;
}

/// Bessel function J0, rational/asymptotic approximation (abs error ~1e-7).
/// Good enough for kernels checked at 1e-3 tolerances and much faster than
/// the library function on large arguments.
double bessel_j0(double x);

/// Standard mollifier bump profile: exp(-1/(1-u^2)) for |u| < 1, else 0.
/// Unnormalized; discrete kernels renormalize to unit mass anyway.
inline double bump_profile(double u) {
    const double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u2));
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares straight line through (x[i], y[i]).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace bklab
