#include "bklab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "bklab/averaging.hpp"

namespace bklab {

double l1_error(const ScalarField& recon, const ScalarField& truth,
                const ErrorDomain& domain) {
    if (!(recon.grid == truth.grid))
        throw std::invalid_argument("l1_error: reconstruction and truth grids differ");
    const Grid2& g = recon.grid;
    const double h2 = g.spacing * g.spacing;
    double acc = 0.0;
    std::size_t idx = 0;
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = g.y(iy);
        for (int ix = 0; ix < g.nx; ++ix, ++idx) {
            if (domain.kind == ErrorDomain::kOmega) {
                const double x = g.x(ix);
                if (std::fabs(x) > domain.half_width || std::fabs(y) > domain.half_width)
                    continue;
            }
            acc += std::abs(recon.samples[idx] - truth.samples[idx]);
        }
    }
    return acc * h2;
}

void ErrorReport::add(const std::string& phantom, double lambda, const std::string& method,
                      double l1, std::optional<double> sigma) {
    ErrorEntry e;
    e.phantom = phantom;
    e.lambda = lambda;
    e.method = method;
    e.l1 = l1;
    e.sigma = sigma;
    if (method == "standard") {
        e.reduction_pct = 0.0;
    } else {
        const ErrorEntry* base = find(phantom, lambda, "standard");
        if (!base)
            throw std::invalid_argument("ErrorReport: add the standard row before " + method);
        e.reduction_pct = (base->l1 > 0.0) ? 100.0 * (1.0 - l1 / base->l1) : 0.0;
    }
    entries.push_back(std::move(e));
}

const ErrorEntry* ErrorReport::find(const std::string& phantom, double lambda,
                                    const std::string& method) const {
    for (const ErrorEntry& e : entries)
        if (e.phantom == phantom && e.lambda == lambda && e.method == method) return &e;
    return nullptr;
}

SigmaSearchResult best_sigma(const ScalarField& base, const ScalarField& truth,
                             const std::vector<double>& sigma_grid,
                             const ErrorDomain& domain) {
    if (sigma_grid.empty()) throw std::invalid_argument("best_sigma: empty sigma grid");
    std::vector<double> sorted = sigma_grid;
    std::sort(sorted.begin(), sorted.end());
    SigmaSearchResult result;
    bool first = true;
    for (double sigma : sorted) {
        ScalarField candidate = mollify(base, MollifierSpec(sigma));
        const double err = l1_error(candidate, truth, domain);
        // strict comparison on the ascending grid = ties go to smaller sigma
        if (first || err < result.l1) {
            result.sigma = sigma;
            result.l1 = err;
            result.best = std::move(candidate);
            first = false;
        }
    }
    return result;
}

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string error_report_csv(const ErrorReport& report) {
    std::ostringstream os;
    os << "phantom,lambda,method,l1_error,reduction_pct,sigma\n";
    for (const ErrorEntry& e : report.entries) {
        os << e.phantom << ',' << fmt9(e.lambda) << ',' << e.method << ','
           << fmt9(e.l1) << ',' << fmt9(e.reduction_pct) << ',';
        if (e.sigma) os << fmt9(*e.sigma);
        os << '\n';
    }
    return os.str();
}

std::string error_report_table(const ErrorReport& report) {
    // collect (phantom, lambda) keys in first-seen order
    std::vector<std::pair<std::string, double>> keys;
    for (const ErrorEntry& e : report.entries) {
        const auto key = std::make_pair(e.phantom, e.lambda);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    std::ostringstream os;
    os << "phantom              lambda   mollifier   angular   combined\n";
    for (const auto& [phantom, lambda] : keys) {
        char row[160];
        auto cell = [&](const char* method) -> std::string {
            const ErrorEntry* e = report.find(phantom, lambda, method);
            if (!e) return "     -";
            char buf[24];
            std::snprintf(buf, sizeof(buf), "%5.1f%%", e->reduction_pct);
            return buf;
        };
        std::snprintf(row, sizeof(row), "%-20s %6g   %9s %9s %10s\n", phantom.c_str(),
                      lambda, cell("mollifier").c_str(), cell("angular").c_str(),
                      cell("combined").c_str());
        os << row;
    }
    return os.str();
}

}  // namespace bklab
