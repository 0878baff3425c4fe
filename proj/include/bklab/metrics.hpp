#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bklab/grid.hpp"

namespace bklab {

/// Integration domain for the L1 error: the whole image frame, or the
/// phantom's domain square |z|_inf <= half_width.
struct ErrorDomain {
    enum Kind { kFrame, kOmega } kind = kFrame;
    double half_width = 1.0;

    static ErrorDomain frame() { return {kFrame, 0.0}; }
    static ErrorDomain omega(double hw) { return {kOmega, hw}; }
};

/// sum |recon - truth| h^2 over the selected domain. Grids must match.
double l1_error(const ScalarField& recon, const ScalarField& truth, const ErrorDomain& domain);

struct ErrorEntry {
    std::string phantom;
    double lambda = 0.0;
    std::string method;  // standard | mollifier | angular | combined | freq
    double l1 = 0.0;
    double reduction_pct = 0.0;  // 100 (1 - l1 / l1_standard); 0 for standard
    std::optional<double> sigma;
};

struct ErrorReport {
    std::vector<ErrorEntry> entries;

    /// Appends an entry, deriving reduction_pct from the standard row with
    /// the same (phantom, lambda). The standard row must be added first.
    void add(const std::string& phantom, double lambda, const std::string& method,
             double l1, std::optional<double> sigma = std::nullopt);
    const ErrorEntry* find(const std::string& phantom, double lambda,
                           const std::string& method) const;
};

struct SigmaSearchResult {
    double sigma = 0.0;
    double l1 = 0.0;
    ScalarField best;  // mollified reconstruction at the winning sigma
};

/// Exhaustive sigma search: mollifies `base` with every sigma in the grid and
/// returns the L1-error argmin against `truth`, ties broken toward smaller
/// sigma. Every sigma must be >= the grid spacing.
SigmaSearchResult best_sigma(const ScalarField& base, const ScalarField& truth,
                             const std::vector<double>& sigma_grid,
                             const ErrorDomain& domain);

/// CSV with header phantom,lambda,method,l1_error,reduction_pct,sigma and
/// 9 significant digits.
std::string error_report_csv(const ErrorReport& report);

/// Text table in the benchmark layout: one row per (phantom, lambda) with
/// mollifier / angular / combined reduction columns.
std::string error_report_table(const ErrorReport& report);

}  // namespace bklab
