// Test-only oracles, deliberately independent of the library's code paths:
// plain quadrature, brute-force enumeration and naive tensor algebra.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Composite Simpson rule on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double gauss_pdf(double x, double var) {
    return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

inline double gauss_cdf(double x, double var) {
    return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0 * var)));
}

/// P[ exists a : ||M - a I||_F <= eps ] for 2x2 beta-Gaussian matrices via
/// quadrature over the traceless coordinates.  With u = M11 - M22 and the
/// off-diagonal entry v (complex when beta = 2), the squared distance is
/// u^2/2 + 2|v|^2; u ~ N(0, 4/beta), each off-diagonal component ~ N(0, 1/beta).
inline double near_identity_prob_2x2(int beta, double eps) {
    const double var_u = 4.0 / beta;
    if (beta == 1) {
        // P = Int over v of pdf(v) * P[|u| <= sqrt(2(eps^2 - 2 v^2))]
        const double vmax = eps / std::sqrt(2.0);
        auto f = [&](double v) {
            const double arg = eps * eps - 2.0 * v * v;
            if (arg <= 0.0) return 0.0;
            const double umax = std::sqrt(2.0 * arg);
            return gauss_pdf(v, 1.0) * (gauss_cdf(umax, var_u) - gauss_cdf(-umax, var_u));
        };
        return simpson(f, -vmax, vmax, 4000);
    }
    // beta = 2: radial coordinate r = |v|, Rayleigh density with sigma^2 = 1/2.
    const double rmax = eps / std::sqrt(2.0);
    auto f = [&](double r) {
        const double arg = eps * eps - 2.0 * r * r;
        if (arg <= 0.0) return 0.0;
        const double umax = std::sqrt(2.0 * arg);
        const double rayleigh = 2.0 * r * std::exp(-r * r);
        return rayleigh * (gauss_cdf(umax, var_u) - gauss_cdf(-umax, var_u));
    };
    return simpson(f, 0.0, rmax, 4000);
}

/// Same probabilities in closed form (chi-squared tails), used to validate
/// the quadrature itself.
inline double near_identity_prob_2x2_closed(int beta, double eps) {
    if (beta == 1) return 1.0 - std::exp(-eps * eps / 4.0);  // chi^2_2 with scale 2
    // beta = 2: chi^2_3 CDF at eps^2
    const double x = eps;
    return std::erf(x / std::sqrt(2.0)) - std::sqrt(2.0 / M_PI) * x * std::exp(-x * x / 2.0);
}

/// P[lambda_1 - lambda_0 <= eps] for 2x2 GUE from the joint eigenvalue
/// density (1/(2pi)) e^{-(l0^2+l1^2)/2} (l1-l0)^2: the gap marginal is
/// (1/(2 sqrt(pi))) g^2 e^{-g^2/4}.
inline double spacing_prob_2x2_gue(double eps) {
    auto f = [](double g) { return g * g * std::exp(-g * g / 4.0) / (2.0 * std::sqrt(M_PI)); };
    return simpson(f, 0.0, eps, 4000);
}

/// Probability that a 2x2 beta-Gaussian eigenvalue pair lies in the ordered
/// box [c0-w, c0+w] x [c1-w, c1+w]; quadrature of the joint density.
inline double eig_box_prob_2x2(int beta, double c0, double c1, double w, double z_norm) {
    auto density = [&](double l0, double l1) {
        return z_norm * std::exp(-beta * (l0 * l0 + l1 * l1) / 4.0) *
               std::pow(std::abs(l1 - l0), beta);
    };
    auto outer = [&](double l0) {
        auto inner = [&](double l1) { return density(l0, l1); };
        return simpson(inner, c1 - w, c1 + w, 200);
    };
    return simpson(outer, c0 - w, c0 + w, 200);
}

/// Naive Kronecker product, written directly from the definition.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

/// Full-space embedding of a two-site term built entry by entry from the
/// delta-function definition, with no stride tricks shared with the library.
inline Matrix embed_full(const Matrix& term, int n, int d, int p, int q) {
    Eigen::Index dim = 1;
    for (int i = 0; i < n; ++i) dim *= d;
    auto digit = [&](Eigen::Index s, int site) {
        Eigen::Index div = 1;
        for (int i = site + 1; i < n; ++i) div *= d;
        return static_cast<int>((s / div) % d);
    };
    Matrix out = Matrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            bool spectators_equal = true;
            for (int site = 0; site < n && spectators_equal; ++site)
                if (site != p && site != q && digit(r, site) != digit(c, site))
                    spectators_equal = false;
            if (!spectators_equal) continue;
            const int row_idx = digit(r, p) * d + digit(r, q);
            const int col_idx = digit(c, p) * d + digit(c, q);
            out(r, c) += term(row_idx, col_idx);
        }
    }
    return out;
}

inline double min_spacing_all_pairs(const Eigen::VectorXd& v) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        for (Eigen::Index j = 0; j < v.size(); ++j)
            if (i != j) best = std::min(best, std::abs(v[i] - v[j]));
    return best;
}

/// Grid search over a in [-10, 10], step 1e-4.
inline double identity_distance_grid(const Matrix& m) {
    double best = std::numeric_limits<double>::infinity();
    const Eigen::Index n = m.rows();
    for (double a = -10.0; a <= 10.0; a += 1e-4) {
        const double dist = (m - a * Matrix::Identity(n, n)).norm();
        best = std::min(best, dist);
    }
    return best;
}

}  // namespace oracles
