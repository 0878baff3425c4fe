#include "bklab/lemma_checks.hpp"

#include <cmath>
#include <stdexcept>

namespace bklab {

SlopeReport check_lemma_statphase(const ScalarField& q, double s_prime, const Grid2& out,
                                  const EngineConfig& cfg, std::vector<double> ladder) {
    if (!(s_prime > 1.0 && s_prime < 3.0))
        throw std::invalid_argument("check_lemma_statphase: s' must lie in (1, 3)");
    if (ladder.size() < 2)
        throw std::invalid_argument("check_lemma_statphase: need >= 2 ladder points");
    SlopeReport report;
    report.threshold = 0.5 * (1.0 - s_prime) + 0.15;
    for (double lambda : ladder) {
        const ScalarField recon = main_term_grid(q, lambda, out, cfg);
        double sup = 0.0;
        for (int oy = 0; oy < out.ny; ++oy)
            for (int ox = 0; ox < out.nx; ++ox)
                sup = std::max(sup, std::abs(recon.at(ox, oy) - sample_at(q, out.node(ox, oy))));
        report.lambdas.push_back(lambda);
        report.sup_errors.push_back(sup);
    }
    double peak = 0.0;
    for (double e : report.sup_errors) peak = std::max(peak, e);
    if (peak <= 1e-15) {
        report.vacuous = true;
        report.pass = true;  // zero potential, nothing to decay
        return report;
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < report.lambdas.size(); ++i) {
        lx.push_back(std::log(report.lambdas[i]));
        ly.push_back(std::log(std::max(report.sup_errors[i], 1e-300)));
    }
    report.slope = fit_line(lx, ly).slope;
    report.pass = report.slope <= report.threshold;
    return report;
}

namespace {

/// trapezoid over [a, b] with n intervals
template <typename F>
double trapezoid(F&& f, double a, double b, int n) {
    double acc = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) acc += f(a + (b - a) * i / n);
    return acc * (b - a) / n;
}

/// Simpson over [a, b] with n intervals (n made even); the closed-formula
/// tail integral needs more accuracy than the operator quadrature itself
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    if (n % 2) ++n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        acc += f(a + (b - a) * i / n) * ((i % 2) ? 4.0 : 2.0);
    return acc * (b - a) / (3.0 * n);
}

}  // namespace

DerivativeReport check_lemma_freqavg_derivative(const std::function<double(double)>& f,
                                                int k, double t, int n_srad) {
    if (k != 0 && k != 1)
        throw std::invalid_argument("check_lemma_freqavg_derivative: k must be 0 or 1");
    if (!(t > 1e-2))
        throw std::invalid_argument(
            "check_lemma_freqavg_derivative: formula is singular near t = 0");
    if (n_srad < 8)
        throw std::invalid_argument("check_lemma_freqavg_derivative: n_srad too small");

    auto g = [&](double tt) {
        return trapezoid([&](double s) { return f(tt / std::sqrt(1.0 + s)); }, 0.0, 1.0,
                         n_srad);
    };
    const double fd_step = 1e-3 * std::max(1.0, t);
    DerivativeReport report;
    if (k == 0) {
        report.finite_difference = (g(t + fd_step) - g(t - fd_step)) / (2.0 * fd_step);
    } else {
        report.finite_difference =
            (g(t + fd_step) - 2.0 * g(t) + g(t - fd_step)) / (fd_step * fd_step);
    }

    auto fk = [&](double x) {
        if (k == 0) return f(x);
        const double d = 1e-4 * std::max(1.0, x);
        return (f(x + d) - f(x - d)) / (2.0 * d);
    };
    const double inv_rt2 = 1.0 / std::sqrt(2.0);
    const double tail = simpson(
        [&](double s) { return fk(t * s) * std::pow(s, k - 3.0); }, inv_rt2, 1.0, n_srad);
    report.formula = 2.0 / t * fk(t) - std::pow(2.0, 2.0 - 0.5 * k) / t * fk(t * inv_rt2) +
                     (4.0 - 2.0 * k) / t * tail;

    const double denom = std::max(std::fabs(report.formula), std::fabs(report.finite_difference));
    if (denom < 1e-8) {
        report.rel_error = 0.0;  // both sides vanish
        report.pass = true;
    } else {
        report.rel_error = std::fabs(report.formula - report.finite_difference) / denom;
        report.pass = report.rel_error <= 1e-3;
    }
    return report;
}

namespace {

ScalarField radial_to_field(const RadialProfile& f, const Grid2& frame) {
    ScalarField q(frame);
    for (int iy = 0; iy < frame.ny; ++iy) {
        const double y = frame.y(iy);
        for (int ix = 0; ix < frame.nx; ++ix)
            q.at(ix, iy) = f.sample(std::hypot(frame.x(ix), y));
    }
    return q;
}

}  // namespace

IdentityReport check_lemma_alambda(const RadialProfile& f, const Grid2& frame,
                                   const AveragingParams& p, std::vector<double> lambdas,
                                   double tolerance, int n_lattice) {
    p.validate();
    if (n_lattice < 32)
        throw std::invalid_argument("check_lemma_alambda: lattice too coarse for A_freq");
    const ScalarField q = radial_to_field(f, frame);
    const ScalarField q_smooth = radial_to_field(radial_smooth(f, p), frame);
    EngineConfig cfg;
    cfg.engine = EngineKind::kNaive;

    IdentityReport report;
    for (double lambda : lambdas) {
        SampledFreqMap map;
        map.t0 = lambda;
        map.dt = lambda / n_lattice;
        map.values.resize(n_lattice + 1);
        for (int i = 0; i <= n_lattice; ++i)
            map.values[i] =
                main_term_point(q, PhaseContext({0.0, 0.0}, map.t0 + map.dt * i), cfg);
        const cplx lhs = freq_average(map, lambda);
        const cplx rhs = main_term_point(q_smooth, PhaseContext({0.0, 0.0}, lambda), cfg);
        report.rows.push_back({lambda, lhs, rhs, std::abs(lhs - rhs)});
        report.max_diff = std::max(report.max_diff, std::abs(lhs - rhs));
    }
    report.pass = report.max_diff <= tolerance;
    return report;
}

}  // namespace bklab
