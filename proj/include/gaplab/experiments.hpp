#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/hamiltonian.hpp"
#include "gaplab/spectra.hpp"

namespace gaplab {

struct SlopeFit {
    double slope = 0.0;
    double ci_lo = 0.0;  // 3-sigma confidence interval
    double ci_hi = 0.0;
    double intercept = 0.0;
};

struct McResult {
    std::vector<double> x_values;   // epsilon grid as given (decreasing)
    std::vector<double> estimates;  // empirical probabilities
    std::vector<double> stderrs;    // sqrt(p(1-p)/trials)
    std::vector<long> trials;
    std::vector<bool> dropped;      // zero-success points excluded from the fit
    std::optional<SlopeFit> slope;  // log-log WLS when >= 2 usable points
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

struct ExponentPrediction {
    double paper_value;       // n^2
    double dimension_count;   // traceless matrix-space dimension
};

struct RareRegionRow {
    Edge edge;
    double local_spacing;                   // two lowest eigenvalues of the term
    double max_neighbor_identity_distance;  // worst dist_to_identity over distance-1 terms
    int ground_multiplicity;                // term ground degeneracy at tolerance tau
    bool flagged;                           // both distances <= eps
};

struct SweepRow {
    int sites;
    int trial;
    double gap = 0.0;
    int degeneracy = 0;
    bool converged = false;  // false also flags "no distinct level" rows
    std::string note;
};

struct SweepSummary {
    int sites;
    double q25 = 0.0, median = 0.0, q75 = 0.0;
    int failures = 0;
};

/// P[exists a: ||M - a I||_F <= eps] on an epsilon grid, via the exact
/// closed-form distance (no search), with a weighted log-log slope.
McResult mc_near_identity_exponent(int n, int beta, const std::vector<double>& eps_grid,
                                   long trials, std::uint64_t seed, int workers = 1);

/// The paper's exponent n^2 next to the traceless-dimension count
/// (n^2 - 1 for beta = 2, n(n+1)/2 - 1 for beta = 1); reported side by side,
/// never asserted equal.
ExponentPrediction predicted_exponents(int n, int beta);

/// P[lambda_1 - lambda_0 <= eps] for the two smallest eigenvalues.
McResult mc_spacing_exponent(int n, int beta, const std::vector<double>& eps_grid, long trials,
                             std::uint64_t seed, int workers = 1);

/// Per-edge detector matching the rare-region hypothesis: local term
/// spacing and worst neighbor identity-distance, flagged when both <= eps.
std::vector<RareRegionRow> rare_region_scan(const HamiltonianSpec& spec, double eps, double tau);

/// N ~ eps^-(z d^4 + 4)
double expected_system_size(double eps, int z, int d);
/// 1 / (z d^4 + 4)
double gap_scaling_exponent(int z, int d);
long gap_scaling_denominator(int z, int d);  // z d^4 + 4, exact integer

/// Random chains of each size; one GapReport row per (size, trial).
/// Solver failures are recorded in the row and the sweep continues.
std::pair<std::vector<SweepRow>, std::vector<SweepSummary>> gap_vs_size_sweep(
    const TermModel& model, int local_dim, const std::vector<int>& size_grid, int trials,
    std::optional<double> tau, std::uint64_t seed, int workers = 1);

}  // namespace gaplab
