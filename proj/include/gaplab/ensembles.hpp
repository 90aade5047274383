#pragma once

#include <cstdint>
#include <vector>

#include "gaplab/types.hpp"

namespace gaplab {

/// Parameters of a beta-Gaussian matrix draw.  beta=1 samples real symmetric
/// (GOE-type) matrices, beta=2 complex Hermitian (GUE-type).  beta=4 is
/// rejected everywhere.
struct EnsembleParams {
    int n = 1;               // matrix dimension; for local terms n = d^2
    int beta = 2;            // 1 or 2
    std::uint64_t seed = 0;

    void validate() const;
};

/// Discrete eigenvalue law: atoms sorted ascending, probabilities summing
/// to one within 1e-12.
struct DiscreteSpectrumLaw {
    std::vector<double> atoms;
    std::vector<double> probs;

    void validate() const;
};

struct IdentityProjection {
    double a_star;  // argmin_a ||M - a I||_F  =  tr(M)/dim
    double dist;    // the attained minimum
};

/// Draws from the density  C exp(-(beta/4) tr M^2).
/// Entry convention implied by the density: diagonal variance 2/beta,
/// off-diagonal real and imaginary components each variance 1/beta.
Matrix sample_gaussian(const EnsembleParams& params);

/// Log joint eigenvalue density  -(beta/4) sum l_j^2 + beta sum_{j<k} log|l_j - l_k|.
/// The normalization constant is included only for n = 2, beta = 2, where it
/// equals 1/(2 pi); -inf when two eigenvalues coincide.
double eigenvalue_log_density(const RealVector& lambdas, int beta);

/// Closest identity multiple in Frobenius norm.  Exact minimizer, no search:
/// a* = tr(M)/dim, dist = sqrt(||M||_F^2 - tr(M)^2/dim).
IdentityProjection dist_to_identity_multiple(const Matrix& m);

/// Minimum consecutive spacing of a sorted eigenvalue list.
double min_spacing(const RealVector& lambdas);

/// Haar-distributed unitary (beta=2) or real orthogonal (beta=1) matrix via
/// QR of a Gaussian matrix with the R-diagonal phase folded back into Q.
Matrix sample_haar_eigenvectors(int dim, int beta, std::uint64_t seed);

/// Rank-`rank` Hermitian projector with Haar eigenvectors:
/// U diag(0,...,0,1,...,1) U^dagger.
Matrix sample_projector(int dim, int rank, int beta, std::uint64_t seed);

/// Hermitian matrix with i.i.d. eigenvalues from `law` and Haar eigenvectors.
Matrix sample_discrete_term(int dim, const DiscreteSpectrumLaw& law, int beta, std::uint64_t seed);

}  // namespace gaplab
