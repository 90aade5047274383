#include "gaplab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gaplab/rng.hpp"

namespace gaplab {

double default_degeneracy_tol(const RealVector& eigenvalues) {
    double width = 0.0;
    if (eigenvalues.size() > 0)
        width = eigenvalues[eigenvalues.size() - 1] - eigenvalues[0];
    return 1e-8 * std::max(1.0, width);
}

std::uint64_t jacobi_cap() {
    if (const char* env = std::getenv("GAPLAB_JACOBI_CAP")) {
        const long long v = std::atoll(env);
        if (v >= 0) return static_cast<std::uint64_t>(v);
    }
    return 512;
}

namespace {

void sort_pairs(RealVector& evals, std::optional<Matrix>& evecs) {
    std::vector<Index> order(static_cast<std::size_t>(evals.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return evals[a] < evals[b]; });
    RealVector sorted(evals.size());
    for (Index i = 0; i < evals.size(); ++i) sorted[i] = evals[order[static_cast<std::size_t>(i)]];
    if (evecs) {
        Matrix v(evecs->rows(), evecs->cols());
        for (Index i = 0; i < evals.size(); ++i)
            v.col(i) = evecs->col(order[static_cast<std::size_t>(i)]);
        *evecs = std::move(v);
    }
    evals = std::move(sorted);
}

}  // namespace

Spectrum jacobi_spectrum(const Matrix& h, bool want_vectors) {
    require_hermitian(h, "jacobi_spectrum");
    const Index n = h.rows();
    Matrix a = h;
    std::optional<Matrix> v;
    if (want_vectors) v = Matrix::Identity(n, n);
    if (n == 1) {
        Spectrum s;
        s.eigenvalues = RealVector::Constant(1, a(0, 0).real());
        s.eigenvectors = v;
        s.degeneracy_tol = default_degeneracy_tol(s.eigenvalues);
        return s;
    }

    const double norm = std::max(a.norm(), 1e-300);
    const double stop = 1e-15 * norm;
    const int max_sweeps = 64;
    Vector tmp_col(n);
    Vector row_p(n), row_q(n);
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Index p = 0; p < n; ++p)
            for (Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        off = std::sqrt(2.0 * off);
        if (off <= stop) break;
        const double threshold = sweep < 3 ? 0.2 * off / (double(n) * double(n)) : 0.0;
        for (Index p = 0; p < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= threshold || r == 0.0) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const Complex u = apq / r;  // phase of the pivot entry
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G = I except G(p,p)=c, G(p,q)=s, G(q,p)=-s*conj(u),
                // G(q,q)=c*conj(u); A <- G^dagger A G zeroes A(p,q).
                const Complex su_bar = s * std::conj(u);
                const Complex cu_bar = c * std::conj(u);
                tmp_col = c * a.col(p) - su_bar * a.col(q);
                a.col(q) = s * a.col(p) + cu_bar * a.col(q);
                a.col(p) = tmp_col;
                row_p = c * a.row(p).transpose() - (s * u) * a.row(q).transpose();
                row_q = s * a.row(p).transpose() + (c * u) * a.row(q).transpose();
                a.row(p) = row_p.transpose();
                a.row(q) = row_q.transpose();
                a(p, p) = Complex(app - t * r, 0.0);
                a(q, q) = Complex(aqq + t * r, 0.0);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (v) {
                    tmp_col = c * v->col(p) - su_bar * v->col(q);
                    v->col(q) = s * v->col(p) + cu_bar * v->col(q);
                    v->col(p) = tmp_col;
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw SolverError("jacobi_spectrum: no convergence after 64 sweeps");

    Spectrum s;
    s.eigenvalues = a.diagonal().real();
    s.eigenvectors = std::move(v);
    sort_pairs(s.eigenvalues, s.eigenvectors);
    s.method = SolveMethod::dense;
    s.degeneracy_tol = default_degeneracy_tol(s.eigenvalues);
    return s;
}

Spectrum dense_spectrum(const Matrix& h, bool want_vectors) {
    require_hermitian(h, "dense_spectrum");
    const Index n = h.rows();
    if (static_cast<std::uint64_t>(n) <= jacobi_cap()) return jacobi_spectrum(h, want_vectors);
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        h, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw SolverError("dense_spectrum: eigensolver failed to converge");
    Spectrum s;
    s.eigenvalues = es.eigenvalues();
    if (want_vectors) s.eigenvectors = es.eigenvectors();
    s.method = SolveMethod::dense;
    s.degeneracy_tol = default_degeneracy_tol(s.eigenvalues);
    return s;
}

Spectrum lanczos_lowest(const MatVecFn& apply, Index dim, const LanczosOptions& opts) {
    if (opts.k < 1) throw std::invalid_argument("lanczos_lowest: k must be >= 1");
    if (dim < 1) throw std::invalid_argument("lanczos_lowest: empty space");
    const Index k = std::min<Index>(opts.k, dim);
    const Index max_m = std::min<Index>(dim, std::max<Index>(opts.max_iter, k));

    auto rng = make_rng(derive_seed(opts.seed, {0x6c637aULL}));
    std::normal_distribution<double> normal(0.0, 1.0);
    auto random_vector = [&]() {
        Vector v(dim);
        for (Index i = 0; i < dim; ++i) v[i] = Complex(normal(rng), normal(rng));
        return v;
    };
    std::vector<Vector> basis;
    basis.reserve(static_cast<std::size_t>(max_m));
    auto reorthogonalize = [&](Vector& w) {
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& u : basis) w -= (u.dot(w)) * u;
    };
    auto fresh_direction = [&]() -> bool {
        // Restart after an invariant subspace: continue with a random vector
        // orthogonal to everything found so far.
        for (int attempt = 0; attempt < 8; ++attempt) {
            Vector w = random_vector();
            reorthogonalize(w);
            const double nw = w.norm();
            if (nw > 1e-8 * std::sqrt(double(dim))) {
                basis.push_back(w / nw);
                return true;
            }
        }
        return false;
    };

    std::vector<double> alpha, beta;  // beta[m] couples basis m and m+1
    Vector first = random_vector();
    basis.push_back(first / first.norm());

    double scale = 1.0;
    Spectrum result;
    result.method = SolveMethod::lanczos;
    result.converged = false;

    RealVector ritz;
    RealVector resid;
    Eigen::MatrixXd tvecs;

    auto solve_tridiag = [&]() {
        const Index m = static_cast<Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (Index i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) {
                t(i, i + 1) = beta[static_cast<std::size_t>(i)];
                t(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        ritz = es.eigenvalues();
        tvecs = es.eigenvectors();
        const double last_beta =
            alpha.size() <= beta.size() ? beta[alpha.size() - 1] : 0.0;
        resid = (last_beta * tvecs.row(m - 1).transpose()).cwiseAbs();
    };

    Vector w(dim);
    bool space_exhausted = false;
    while (static_cast<Index>(alpha.size()) < max_m && !space_exhausted) {
        const Vector& v = basis[alpha.size()];
        w.setZero();
        apply(v, w);
        const double a = v.dot(w).real();
        alpha.push_back(a);
        w -= a * v;
        if (alpha.size() >= 2) w -= beta.back() * basis[alpha.size() - 2];
        reorthogonalize(w);
        const double b = w.norm();
        scale = std::max({scale, std::abs(a), b});
        const bool breakdown = b <= 1e-13 * scale;
        const bool can_extend = static_cast<Index>(basis.size()) < max_m &&
                                static_cast<Index>(basis.size()) < dim;
        if (breakdown) {
            beta.push_back(0.0);
            if (!can_extend || !fresh_direction()) space_exhausted = true;
        } else {
            beta.push_back(b);
            if (can_extend)
                basis.push_back(w / b);
            else
                space_exhausted = true;
        }

        const Index m = static_cast<Index>(alpha.size());
        const bool check_now =
            space_exhausted || m == max_m || (m <= 100 ? m % 5 == 0 : m % 20 == 0);
        if (m >= k && check_now) {
            solve_tridiag();
            const double tol_abs = opts.tol * std::max(1.0, ritz.cwiseAbs().maxCoeff());
            bool done = static_cast<Index>(m) >= k;
            for (Index i = 0; i < k && done; ++i)
                if (resid[i] > tol_abs) done = false;
            if (done) {
                result.converged = true;
                break;
            }
        }
    }
    if (ritz.size() < k) solve_tridiag();
    if (!result.converged && ritz.size() >= k) {
        const double tol_abs = opts.tol * std::max(1.0, ritz.cwiseAbs().maxCoeff());
        bool done = true;
        for (Index i = 0; i < k && done; ++i)
            if (resid[i] > tol_abs) done = false;
        result.converged = done;
    }

    const Index found = std::min<Index>(k, ritz.size());
    result.eigenvalues = ritz.head(found);
    result.residuals = resid.head(found);
    if (opts.want_vectors) {
        Matrix x(dim, found);
        for (Index i = 0; i < found; ++i) {
            Vector xi = Vector::Zero(dim);
            for (std::size_t j = 0; j < alpha.size(); ++j)
                xi += tvecs(static_cast<Index>(j), i) * basis[j];
            x.col(i) = xi.normalized();
        }
        result.eigenvectors = std::move(x);
    }
    result.degeneracy_tol = default_degeneracy_tol(result.eigenvalues);
    return result;
}

std::vector<Cluster> cluster_distinct(const RealVector& lambdas, double tau) {
    std::vector<Cluster> clusters;
    if (lambdas.size() == 0) return clusters;
    if (!std::is_sorted(lambdas.data(), lambdas.data() + lambdas.size()))
        throw std::invalid_argument("cluster_distinct: input must be sorted");
    double sum = lambdas[0];
    int count = 1;
    for (Index i = 1; i < lambdas.size(); ++i) {
        if (lambdas[i] - lambdas[i - 1] > tau) {
            clusters.push_back({sum / count, count});
            sum = 0.0;
            count = 0;
        }
        sum += lambdas[i];
        ++count;
    }
    clusters.push_back({sum / count, count});
    return clusters;
}

GapReport gap(const Spectrum& spectrum, double tau) {
    const auto clusters = cluster_distinct(spectrum.eigenvalues, tau);
    if (clusters.size() < 2)
        throw GapUnresolvedError("gap: no distinct excited level at this resolution");
    GapReport report;
    report.lambda0 = clusters[0].value;
    report.lambda1_distinct = clusters[1].value;
    report.gap = clusters[1].value - clusters[0].value;
    report.ground_degeneracy = clusters[0].multiplicity;
    report.tau = tau;
    return report;
}

std::pair<double, double> weyl_interval(const Spectrum& base, double perturbation_norm,
                                        Index j) {
    if (perturbation_norm < 0.0)
        throw std::invalid_argument("weyl_interval: negative perturbation norm");
    if (j < 0 || j >= base.eigenvalues.size())
        throw std::invalid_argument("weyl_interval: eigenvalue index out of range");
    const double lj = base.eigenvalues[j];
    return {lj - perturbation_norm, lj + perturbation_norm};
}

Histogram dos_histogram(const RealVector& lambdas, int bins,
                        std::optional<std::pair<double, double>> range) {
    if (lambdas.size() == 0) throw std::invalid_argument("dos_histogram: empty spectrum");
    if (bins < 1) throw std::invalid_argument("dos_histogram: bins must be >= 1");
    double lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
        if (!(hi > lo)) throw std::invalid_argument("dos_histogram: empty range");
    } else {
        lo = lambdas.minCoeff();
        hi = lambdas.maxCoeff();
        if (hi == lo) hi = lo + 1.0;  // single point: one full bin
    }
    Histogram hist;
    hist.counts = RealVector::Zero(bins);
    hist.edges = RealVector::LinSpaced(bins + 1, lo, hi);
    const double width = (hi - lo) / bins;
    long in_range = 0;
    for (Index i = 0; i < lambdas.size(); ++i) {
        const double x = lambdas[i];
        if (x < lo) continue;
        if (range ? x >= hi : x > hi) continue;  // explicit range is half-open [lo, hi)
        Index b = static_cast<Index>((x - lo) / width);
        if (b >= bins) b = bins - 1;  // default range keeps its top edge
        hist.counts[b] += 1.0;
        ++in_range;
    }
    if (in_range == 0) throw std::invalid_argument("dos_histogram: no eigenvalues in range");
    hist.counts /= static_cast<double>(in_range);
    return hist;
}

SchmidtSpectrum schmidt_spectrum(const Vector& state, const std::set<int>& left_sites,
                                 const InteractionGraph& graph) {
    const int n = graph.num_sites();
    const int d = graph.local_dim();
    Index dim = 1;
    for (int i = 0; i < n; ++i) dim *= d;
    if (state.size() != dim)
        throw std::invalid_argument("schmidt_spectrum: state dimension mismatch");
    if (left_sites.empty() || static_cast<int>(left_sites.size()) >= n)
        throw std::invalid_argument("schmidt_spectrum: trivial bipartition");
    for (int s : left_sites)
        if (s < 0 || s >= n) throw std::invalid_argument("schmidt_spectrum: site out of range");

    std::vector<int> left(left_sites.begin(), left_sites.end());
    std::vector<int> right;
    for (int s = 0; s < n; ++s)
        if (!left_sites.count(s)) right.push_back(s);

    Index rows = 1, cols = 1;
    for (std::size_t i = 0; i < left.size(); ++i) rows *= d;
    for (std::size_t i = 0; i < right.size(); ++i) cols *= d;

    // digit k of a basis index (site 0 most significant)
    std::vector<Index> stride(static_cast<std::size_t>(n), 1);
    for (int k = n - 2; k >= 0; --k)
        stride[static_cast<std::size_t>(k)] = stride[static_cast<std::size_t>(k + 1)] * d;

    Matrix psi(rows, cols);
    for (Index s = 0; s < dim; ++s) {
        Index r = 0, c = 0;
        for (int site : left) r = r * d + (s / stride[static_cast<std::size_t>(site)]) % d;
        for (int site : right) c = c * d + (s / stride[static_cast<std::size_t>(site)]) % d;
        psi(r, c) = state[s];
    }
    Eigen::JacobiSVD<Matrix> svd(psi);
    SchmidtSpectrum out;
    out.singular_values = svd.singularValues();
    const double total = out.singular_values.squaredNorm();
    if (total <= 0.0) throw std::invalid_argument("schmidt_spectrum: zero state");
    double entropy = 0.0;
    for (Index i = 0; i < out.singular_values.size(); ++i) {
        const double p = out.singular_values[i] * out.singular_values[i] / total;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    out.entropy = entropy;
    return out;
}

}  // namespace gaplab
