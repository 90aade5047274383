#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "gaplab/topology.hpp"
#include "gaplab/types.hpp"

namespace gaplab {

enum class SolveMethod { dense, lanczos };

struct Spectrum {
    RealVector eigenvalues;  // sorted ascending
    std::optional<Matrix> eigenvectors;  // columns matching eigenvalues
    SolveMethod method = SolveMethod::dense;
    double degeneracy_tol = 1e-8;
    bool converged = true;
    RealVector residuals;  // per-pair residual estimates when available
};

struct GapReport {
    double lambda0 = 0.0;
    double lambda1_distinct = 0.0;
    double gap = 0.0;
    int ground_degeneracy = 1;
    double tau = 0.0;
};

struct Cluster {
    double value = 0.0;  // mean of the members
    int multiplicity = 0;
};

struct Histogram {
    RealVector counts;  // normalized, sums to 1 over in-range values
    RealVector edges;   // bins + 1 entries
};

struct SchmidtSpectrum {
    RealVector singular_values;  // descending
    double entropy = 0.0;        // -sum p log p, p = s^2 / sum s^2
};

/// No second distinct level resolvable at the requested tolerance.
struct GapUnresolvedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// tau = 1e-8 * max(1, spectral width).
double default_degeneracy_tol(const RealVector& eigenvalues);

std::uint64_t jacobi_cap();  // default 512, override with GAPLAB_JACOBI_CAP

/// Full spectrum of a Hermitian matrix.  Cyclic Jacobi up to jacobi_cap(),
/// Householder tridiagonalization + implicit QR iteration above; both meet
/// the same residual contract.
Spectrum dense_spectrum(const Matrix& h, bool want_vectors = false);

/// Cyclic Jacobi with threshold sweeps, exposed so tests can cross-validate
/// the two dense routes at any size.
Spectrum jacobi_spectrum(const Matrix& h, bool want_vectors = false);

struct LanczosOptions {
    int k = 1;
    int max_iter = 500;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    bool want_vectors = false;
};

// Receives x and a zero-initialized y; writes or accumulates H x into y.
using MatVecFn = std::function<void(const Vector&, Vector&)>;

/// k lowest eigenvalues by Lanczos with full reorthogonalization.  On an
/// invariant-subspace breakdown the basis is continued with a fresh random
/// direction, so exact multiplicities (e.g. H = c I) are recovered.
/// Non-convergence within max_iter returns best estimates with
/// converged = false.
Spectrum lanczos_lowest(const MatVecFn& apply, Index dim, const LanczosOptions& opts);

/// Greedy left-to-right clustering of a sorted list: a new cluster starts
/// when the next value is more than tau above the previous one.
std::vector<Cluster> cluster_distinct(const RealVector& lambdas, double tau);

GapReport gap(const Spectrum& spectrum, double tau);

/// Weyl interval for the j-th eigenvalue under a perturbation of the given
/// operator norm: [lambda_j - norm, lambda_j + norm].
std::pair<double, double> weyl_interval(const Spectrum& base, double perturbation_norm, Index j);

Histogram dos_histogram(const RealVector& lambdas, int bins,
                        std::optional<std::pair<double, double>> range = std::nullopt);

/// Schmidt decomposition of a pure state across the (left_sites | rest)
/// bipartition, in the site-digit convention of the hamiltonian module.
SchmidtSpectrum schmidt_spectrum(const Vector& state, const std::set<int>& left_sites,
                                 const InteractionGraph& graph);

}  // namespace gaplab
