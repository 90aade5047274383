#include "gaplab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>

#include "gaplab/ensembles.hpp"
#include "gaplab/rng.hpp"

namespace gaplab {

namespace {

/// Runs tasks 0..count-1 on `workers` threads.  Each task writes only its
/// own slot, so results are identical for any worker count.
void parallel_for(long count, int workers, const std::function<void(long)>& task) {
    workers = std::max(1, workers);
    if (workers == 1) {
        for (long i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) task(i);
        });
    for (auto& t : pool) t.join();
}

void validate_grid(const std::vector<double>& eps_grid) {
    if (eps_grid.size() < 4)
        throw std::invalid_argument("mc: epsilon grid needs at least 4 points");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (eps_grid[i + 1] >= eps_grid[i])
            throw std::invalid_argument("mc: epsilon grid must be strictly decreasing");
    for (double e : eps_grid)
        if (e <= 0.0) throw std::invalid_argument("mc: epsilon values must be positive");
}

/// Weighted least squares of log p against log eps; per-point variance from
/// the binomial stderr via the delta method.
std::optional<SlopeFit> fit_loglog(const McResult& r) {
    std::vector<double> x, y, w;
    for (std::size_t i = 0; i < r.x_values.size(); ++i) {
        if (r.dropped[i]) continue;
        const double p = r.estimates[i];
        x.push_back(std::log(r.x_values[i]));
        y.push_back(std::log(p));
        const double var_logp = r.stderrs[i] * r.stderrs[i] / (p * p);
        w.push_back(var_logp > 0.0 ? 1.0 / var_logp : 0.0);
    }
    if (x.size() < 2) return std::nullopt;
    double sw = 0, swx = 0, swy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    if (sw <= 0.0) return std::nullopt;
    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx <= 0.0) return std::nullopt;
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    const double sigma = std::sqrt(1.0 / sxx);
    fit.ci_lo = fit.slope - 3.0 * sigma;
    fit.ci_hi = fit.slope + 3.0 * sigma;
    return fit;
}

McResult run_mc(int n, int beta, const std::vector<double>& eps_grid, long trials,
                std::uint64_t seed, int workers, std::uint64_t tag,
                const std::function<double(const Matrix&)>& statistic) {
    validate_grid(eps_grid);
    if (trials < 1) throw std::invalid_argument("mc: trials must be >= 1");
    EnsembleParams probe{n, beta, 0};
    probe.validate();

    McResult result;
    result.x_values = eps_grid;
    result.seed = seed;
    for (std::size_t point = 0; point < eps_grid.size(); ++point) {
        const double eps = eps_grid[point];
        std::vector<std::uint8_t> hits(static_cast<std::size_t>(trials), 0);
        parallel_for(trials, workers, [&](long t) {
            const std::uint64_t s = derive_seed(
                seed, {tag, static_cast<std::uint64_t>(point), static_cast<std::uint64_t>(t)});
            const Matrix m = sample_gaussian({n, beta, s});
            hits[static_cast<std::size_t>(t)] = statistic(m) <= eps ? 1 : 0;
        });
        long count = 0;
        for (auto h : hits) count += h;  // fixed-order reduction
        const double p = static_cast<double>(count) / static_cast<double>(trials);
        result.estimates.push_back(p);
        result.stderrs.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
        result.trials.push_back(trials);
        result.dropped.push_back(count == 0);
        if (count == 0)
            result.warnings.push_back("eps=" + std::to_string(eps) +
                                      ": zero successes, point dropped from fit");
        else if (count < 50)
            result.warnings.push_back("eps=" + std::to_string(eps) +
                                      ": fewer than 50 successes, estimate is noisy");
    }
    result.slope = fit_loglog(result);
    return result;
}

std::vector<double> two_lowest(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()[0], es.eigenvalues()[1]};
}

}  // namespace

McResult mc_near_identity_exponent(int n, int beta, const std::vector<double>& eps_grid,
                                   long trials, std::uint64_t seed, int workers) {
    return run_mc(n, beta, eps_grid, trials, seed, workers, 0x6e656172ULL,
                  [](const Matrix& m) { return dist_to_identity_multiple(m).dist; });
}

ExponentPrediction predicted_exponents(int n, int beta) {
    if (n < 1) throw std::invalid_argument("predicted_exponents: n must be >= 1");
    if (beta != 1 && beta != 2)
        throw std::invalid_argument("predicted_exponents: beta must be 1 or 2");
    const double paper = static_cast<double>(n) * n;
    const double matrix_dim = beta == 2 ? static_cast<double>(n) * n
                                        : static_cast<double>(n) * (n + 1) / 2.0;
    return {paper, matrix_dim - 1.0};
}

McResult mc_spacing_exponent(int n, int beta, const std::vector<double>& eps_grid, long trials,
                             std::uint64_t seed, int workers) {
    if (n < 2) throw std::invalid_argument("mc_spacing_exponent: n must be >= 2");
    return run_mc(n, beta, eps_grid, trials, seed, workers, 0x73706163ULL,
                  [](const Matrix& m) {
                      const auto lows = two_lowest(m);
                      return lows[1] - lows[0];
                  });
}

std::vector<RareRegionRow> rare_region_scan(const HamiltonianSpec& spec, double eps,
                                            double tau) {
    std::vector<RareRegionRow> rows;
    rows.reserve(spec.terms.size());
    for (const auto& term : spec.terms) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(term.matrix, Eigen::EigenvaluesOnly);
        const double spacing = es.eigenvalues()[1] - es.eigenvalues()[0];
        const auto clusters = cluster_distinct(es.eigenvalues(), tau);
        double worst_neighbor = 0.0;
        const auto nbhd = edge_neighborhood(spec.graph, term.edge);
        for (const Edge& e : nbhd.distance1) {
            const auto& neighbor = spec.terms[static_cast<std::size_t>(spec.graph.edge_index(e))];
            worst_neighbor =
                std::max(worst_neighbor, dist_to_identity_multiple(neighbor.matrix).dist);
        }
        rows.push_back({term.edge, spacing, worst_neighbor, clusters[0].multiplicity,
                        spacing <= eps && worst_neighbor <= eps});
    }
    return rows;
}

long gap_scaling_denominator(int z, int d) {
    if (z < 1) throw std::invalid_argument("gap_scaling: z must be >= 1");
    if (d < 2) throw std::invalid_argument("gap_scaling: d must be >= 2");
    const long d4 = static_cast<long>(d) * d * d * d;
    return static_cast<long>(z) * d4 + 4;
}

double gap_scaling_exponent(int z, int d) {
    return 1.0 / static_cast<double>(gap_scaling_denominator(z, d));
}

double expected_system_size(double eps, int z, int d) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("expected_system_size: eps must be in (0,1)");
    return std::pow(eps, -static_cast<double>(gap_scaling_denominator(z, d)));
}

std::pair<std::vector<SweepRow>, std::vector<SweepSummary>> gap_vs_size_sweep(
    const TermModel& model, int local_dim, const std::vector<int>& size_grid, int trials,
    std::optional<double> tau, std::uint64_t seed, int workers) {
    if (trials < 1) throw std::invalid_argument("gap_vs_size_sweep: trials must be >= 1");
    for (int n : size_grid)
        if (n < 2) throw std::invalid_argument("gap_vs_size_sweep: sizes must be >= 2");

    const long total = static_cast<long>(size_grid.size()) * trials;
    std::vector<SweepRow> rows(static_cast<std::size_t>(total));
    parallel_for(total, workers, [&](long idx) {
        const int size_idx = static_cast<int>(idx / trials);
        const int trial = static_cast<int>(idx % trials);
        const int n = size_grid[static_cast<std::size_t>(size_idx)];
        SweepRow row;
        row.sites = n;
        row.trial = trial;
        try {
            const std::uint64_t s = derive_seed(
                seed, {0x73776570ULL, static_cast<std::uint64_t>(n),
                       static_cast<std::uint64_t>(trial)});
            const auto spec = random_spec(chain(n, false, local_dim), model, s);
            Spectrum spectrum;
            if (static_cast<std::uint64_t>(spec.dim()) <= dense_cap()) {
                spectrum = dense_spectrum(assemble_dense(spec));
            } else {
                LanczosOptions opts;
                opts.k = 6;
                opts.tol = 1e-8;
                opts.seed = derive_seed(s, {0x6c617aULL});
                spectrum = lanczos_lowest(
                    [&spec](const Vector& x, Vector& y) {
                        y = matvec(spec, x);
                    },
                    spec.dim(), opts);
                if (!spectrum.converged) throw SolverError("lanczos did not converge");
            }
            const double t = tau.value_or(default_degeneracy_tol(spectrum.eigenvalues));
            const GapReport report = gap(spectrum, t);
            row.gap = report.gap;
            row.degeneracy = report.ground_degeneracy;
            row.converged = true;
        } catch (const GapUnresolvedError& e) {
            row.converged = false;
            row.note = e.what();
        } catch (const SolverError& e) {
            row.converged = false;
            row.note = e.what();
        }
        rows[static_cast<std::size_t>(idx)] = std::move(row);
    });

    std::vector<SweepSummary> summaries;
    for (std::size_t s = 0; s < size_grid.size(); ++s) {
        SweepSummary summary;
        summary.sites = size_grid[s];
        std::vector<double> gaps;
        for (int t = 0; t < trials; ++t) {
            const auto& row = rows[s * static_cast<std::size_t>(trials) +
                                   static_cast<std::size_t>(t)];
            if (row.converged)
                gaps.push_back(row.gap);
            else
                ++summary.failures;
        }
        if (!gaps.empty()) {
            std::sort(gaps.begin(), gaps.end());
            auto quantile = [&](double q) {
                const double pos = q * (static_cast<double>(gaps.size()) - 1.0);
                const std::size_t i = static_cast<std::size_t>(pos);
                const double frac = pos - static_cast<double>(i);
                return i + 1 < gaps.size() ? gaps[i] * (1.0 - frac) + gaps[i + 1] * frac
                                           : gaps[i];
            };
            summary.q25 = quantile(0.25);
            summary.median = quantile(0.5);
            summary.q75 = quantile(0.75);
        }
        summaries.push_back(summary);
    }
    return {std::move(rows), std::move(summaries)};
}

}  // namespace gaplab
