#include "gaplab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gaplab/rng.hpp"

namespace gaplab {

void EnsembleParams::validate() const {
    if (n < 1) throw std::invalid_argument("EnsembleParams: n must be >= 1");
    if (beta != 1 && beta != 2)
        throw std::invalid_argument("EnsembleParams: beta must be 1 or 2 (beta=4 unsupported)");
}

void DiscreteSpectrumLaw::validate() const {
    if (atoms.empty()) throw std::invalid_argument("DiscreteSpectrumLaw: needs at least one atom");
    if (atoms.size() != probs.size())
        throw std::invalid_argument("DiscreteSpectrumLaw: atoms/probs size mismatch");
    if (!std::is_sorted(atoms.begin(), atoms.end()))
        throw std::invalid_argument("DiscreteSpectrumLaw: atoms must be sorted ascending");
    for (std::size_t i = 1; i < atoms.size(); ++i)
        if (atoms[i] == atoms[i - 1])
            throw std::invalid_argument("DiscreteSpectrumLaw: atoms must be distinct");
    double total = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("DiscreteSpectrumLaw: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("DiscreteSpectrumLaw: probabilities must sum to 1");
}

Matrix sample_gaussian(const EnsembleParams& params) {
    params.validate();
    auto rng = make_rng(params.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n = params.n;
    Matrix m(n, n);
    // Fixed draw order: diagonal first, then upper triangle row by row.
    const double diag_sd = std::sqrt(2.0 / params.beta);
    const double off_sd = std::sqrt(1.0 / params.beta);
    for (int i = 0; i < n; ++i) m(i, i) = Complex(diag_sd * normal(rng), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double re = off_sd * normal(rng);
            double im = params.beta == 2 ? off_sd * normal(rng) : 0.0;
            m(i, j) = Complex(re, im);
            m(j, i) = Complex(re, -im);
        }
    }
    return m;
}

double eigenvalue_log_density(const RealVector& lambdas, int beta) {
    if (beta != 1 && beta != 2)
        throw std::invalid_argument("eigenvalue_log_density: beta must be 1 or 2");
    const Index n = lambdas.size();
    double log_rho = -(beta / 4.0) * lambdas.squaredNorm();
    for (Index j = 0; j < n; ++j) {
        for (Index k = j + 1; k < n; ++k) {
            const double diff = std::abs(lambdas[j] - lambdas[k]);
            if (diff == 0.0) return -std::numeric_limits<double>::infinity();
            log_rho += beta * std::log(diff);
        }
    }
    if (n == 2 && beta == 2) log_rho += -std::log(2.0 * M_PI);
    return log_rho;
}

IdentityProjection dist_to_identity_multiple(const Matrix& m) {
    require_hermitian(m, "dist_to_identity_multiple");
    const double dim = static_cast<double>(m.rows());
    const double a = m.trace().real() / dim;
    const double d2 = m.squaredNorm() - dim * a * a;
    return {a, std::sqrt(std::max(d2, 0.0))};
}

double min_spacing(const RealVector& lambdas) {
    if (lambdas.size() < 2)
        throw std::invalid_argument("min_spacing: need at least two eigenvalues");
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i + 1 < lambdas.size(); ++i)
        best = std::min(best, lambdas[i + 1] - lambdas[i]);
    return best;
}

Matrix sample_haar_eigenvectors(int dim, int beta, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("sample_haar_eigenvectors: dim must be >= 1");
    if (beta != 1 && beta != 2)
        throw std::invalid_argument("sample_haar_eigenvectors: beta must be 1 or 2");
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) {
            double re = normal(rng);
            double im = beta == 2 ? normal(rng) : 0.0;
            g(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // Fold the phases of diag(R) into Q so the factorization is unique and
    // the result is Haar (Mezzadri 2007).
    Matrix r = qr.matrixQR();
    for (int i = 0; i < dim; ++i) {
        Complex d = r(i, i);
        double mag = std::abs(d);
        q.col(i) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    }
    return q;
}

namespace {
Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }
}  // namespace

Matrix sample_projector(int dim, int rank, int beta, std::uint64_t seed) {
    if (rank < 0 || rank > dim)
        throw std::invalid_argument("sample_projector: rank out of range");
    Matrix u = sample_haar_eigenvectors(dim, beta, seed);
    Matrix cols = u.rightCols(rank);
    return hermitize(cols * cols.adjoint());
}

Matrix sample_discrete_term(int dim, const DiscreteSpectrumLaw& law, int beta,
                            std::uint64_t seed) {
    law.validate();
    if (dim < 1) throw std::invalid_argument("sample_discrete_term: dim must be >= 1");
    auto rng = make_rng(derive_seed(seed, {0x65696773ULL}));
    std::discrete_distribution<int> pick(law.probs.begin(), law.probs.end());
    RealVector evals(dim);
    for (int i = 0; i < dim; ++i) evals[i] = law.atoms[static_cast<std::size_t>(pick(rng))];
    Matrix u = sample_haar_eigenvectors(dim, beta, derive_seed(seed, {0x65767ULL}));
    return hermitize(u * evals.asDiagonal() * u.adjoint());
}

}  // namespace gaplab
