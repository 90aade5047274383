#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "gaplab/hamiltonian.hpp"
#include "gaplab/rng.hpp"
#include "gaplab/spectra.hpp"
#include "oracles.hpp"

using namespace gaplab;

namespace {

Matrix random_hermitian(int n, std::uint64_t seed) { return sample_gaussian({n, 2, seed}); }

MatVecFn spec_matvec(const HamiltonianSpec& spec) {
    return [&spec](const Vector& x, Vector& y) { y = matvec(spec, x); };
}

}  // namespace

TEST_CASE("dense_spectrum basics") {
    Matrix d3 = Matrix::Zero(3, 3);
    d3(0, 0) = 3;
    d3(1, 1) = 1;
    d3(2, 2) = 2;
    const auto s = dense_spectrum(d3);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(s.eigenvalues[2] == doctest::Approx(3.0));

    const auto px = dense_spectrum(pauli(1));
    CHECK(px.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(px.eigenvalues[1] == doctest::Approx(1.0));

    Matrix nonherm = Matrix::Zero(2, 2);
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(dense_spectrum(nonherm), std::invalid_argument);
}

TEST_CASE("dense_spectrum trace identities at dim 50") {
    const Matrix h = random_hermitian(50, 5050);
    const auto s = dense_spectrum(h);
    CHECK(s.eigenvalues.sum() ==
          doctest::Approx(h.trace().real()).epsilon(1e-8));
    CHECK(s.eigenvalues.squaredNorm() ==
          doctest::Approx(h.squaredNorm()).epsilon(1e-6));
}

TEST_CASE("dense_spectrum reconstruction residual") {
    const Matrix h = random_hermitian(40, 11);
    const auto s = dense_spectrum(h, true);
    REQUIRE(s.eigenvectors.has_value());
    const Matrix v = *s.eigenvectors;
    const Matrix recon = v * s.eigenvalues.asDiagonal() * v.adjoint();
    CHECK((h - recon).norm() <= 1e-8 * h.norm());
    for (Index j = 0; j < 40; ++j) {
        const double resid = (h * v.col(j) - s.eigenvalues[j] * v.col(j)).norm();
        CHECK(resid <= 1e-8 * std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("the two dense routes agree") {
    // jacobi (explicit) vs the tridiagonalization route (Eigen), same contract
    for (int n : {5, 24, 60}) {
        const Matrix h = random_hermitian(n, 600 + static_cast<std::uint64_t>(n));
        const auto a = jacobi_spectrum(h);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        CHECK((a.eigenvalues - es.eigenvalues()).cwiseAbs().maxCoeff() <
              1e-10 * std::max(1.0, h.norm()));
    }
}

TEST_CASE("lanczos: diagonal spec matches a diagonal scan") {
    // all terms diagonal => H diagonal; oracle scans the diagonal directly
    const int n = 10;
    const auto g = chain(n, false, 2);
    auto rng = make_rng(900);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<LocalTerm> terms;
    for (const Edge& e : g.edges()) {
        Matrix t = Matrix::Zero(4, 4);
        for (int i = 0; i < 4; ++i) t(i, i) = normal(rng);
        terms.emplace_back(e, t);
    }
    const HamiltonianSpec spec(g, terms);

    // oracle: accumulate the diagonal by plain digit arithmetic
    const Index dim = spec.dim();
    RealVector diag = RealVector::Zero(dim);
    for (Index s = 0; s < dim; ++s) {
        for (const auto& term : terms) {
            const int p = term.edge.first, q = term.edge.second;
            const int dp = static_cast<int>((s >> (n - 1 - p)) & 1);
            const int dq = static_cast<int>((s >> (n - 1 - q)) & 1);
            diag[s] += term.matrix(dp * 2 + dq, dp * 2 + dq).real();
        }
    }
    std::sort(diag.data(), diag.data() + dim);

    LanczosOptions opts;
    opts.k = 4;
    opts.seed = 4;
    const auto s = lanczos_lowest(spec_matvec(spec), dim, opts);
    REQUIRE(s.converged);
    for (Index i = 0; i < 4; ++i)
        CHECK(s.eigenvalues[i] == doctest::Approx(diag[i]).epsilon(1e-8));
}

TEST_CASE("lanczos vs dense on a random chain") {
    const auto spec = random_spec(chain(8, false, 2), GaussianModel{2}, 123456);
    const auto dense = dense_spectrum(assemble_dense(spec));
    LanczosOptions opts;
    opts.k = 4;
    opts.seed = 9;
    opts.want_vectors = true;
    const auto lz = lanczos_lowest(spec_matvec(spec), spec.dim(), opts);
    REQUIRE(lz.converged);
    for (Index i = 0; i < 4; ++i)
        CHECK(std::abs(lz.eigenvalues[i] - dense.eigenvalues[i]) < 1e-8);

    REQUIRE(lz.eigenvectors.has_value());
    for (Index i = 0; i < 4; ++i) {
        Vector hv = Vector::Zero(spec.dim());
        hv = matvec(spec, lz.eigenvectors->col(i));
        const double resid = (hv - lz.eigenvalues[i] * lz.eigenvectors->col(i)).norm();
        CHECK(resid < 1e-7 * std::max(1.0, dense.eigenvalues.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("lanczos on a multiple of the identity") {
    const double c = -2.75;
    const Index dim = 64;
    MatVecFn apply = [&](const Vector& x, Vector& y) { y = c * x; };
    LanczosOptions opts;
    opts.k = 4;
    opts.seed = 77;
    const auto s = lanczos_lowest(apply, dim, opts);
    REQUIRE(s.converged);
    REQUIRE(s.eigenvalues.size() == 4);
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(s.eigenvalues[i] - c) < 1e-10);
}

TEST_CASE("lanczos flags non-convergence") {
    const Matrix h = random_hermitian(48, 31);
    MatVecFn apply = [&](const Vector& x, Vector& y) { y = h * x; };
    LanczosOptions opts;
    opts.k = 3;
    opts.max_iter = 4;  // deliberately too few
    opts.seed = 1;
    const auto s = lanczos_lowest(apply, 48, opts);
    CHECK_FALSE(s.converged);
    CHECK(s.eigenvalues.size() == 3);  // best estimates still reported
}

TEST_CASE("cluster_distinct") {
    RealVector v(3);
    v << 0.0, 1e-12, 1.0;
    const auto c = cluster_distinct(v, 1e-9);
    REQUIRE(c.size() == 2);
    CHECK(c[0].multiplicity == 2);
    CHECK(c[0].value == doctest::Approx(5e-13));
    CHECK(c[1].multiplicity == 1);

    RealVector w(3);
    w << 0.0, 1.0, 2.0;
    CHECK(cluster_distinct(w, 1e-9).size() == 3);
}

TEST_CASE("gap reports") {
    RealVector v(3);
    v << 0.0, 0.0, 1.0;
    Spectrum s;
    s.eigenvalues = v;
    const auto r = gap(s, 1e-9);
    CHECK(r.gap == doctest::Approx(1.0));
    CHECK(r.ground_degeneracy == 2);
    CHECK(r.lambda0 == doctest::Approx(0.0));

    Spectrum flat;
    flat.eigenvalues = RealVector::Zero(4);
    CHECK_THROWS_AS(gap(flat, 1e-9), GapUnresolvedError);

    // 2-site spec: gap equals the spacing of the two smallest distinct term
    // eigenvalues
    const Matrix t = sample_gaussian({4, 2, 2718});
    const auto spec = HamiltonianSpec(chain(2, false, 2), {LocalTerm({0, 1}, t)});
    const auto full = dense_spectrum(assemble_dense(spec));
    const auto report = gap(full, 1e-9);
    const auto term_spec = dense_spectrum(t);
    CHECK(report.gap ==
          doctest::Approx(term_spec.eigenvalues[1] - term_spec.eigenvalues[0]).epsilon(1e-9));
}

TEST_CASE("weyl intervals") {
    Spectrum base;
    base.eigenvalues = RealVector::Zero(2);
    base.eigenvalues[1] = 1.0;
    const auto iv = weyl_interval(base, 0.0, 1);
    CHECK(iv.first == iv.second);

    // H = diag(0,1), V = diag(eps,0)
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 1.0;
    Matrix v = Matrix::Zero(2, 2);
    v(0, 0) = 0.1;
    const auto pert = dense_spectrum(h + v);
    const auto window = weyl_interval(dense_spectrum(h), 0.1, 0);
    CHECK(pert.eigenvalues[0] >= window.first);
    CHECK(pert.eigenvalues[0] <= window.second);

    CHECK_THROWS_AS(weyl_interval(base, 1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(weyl_interval(base, -1.0, 0), std::invalid_argument);
}

TEST_CASE("weyl sandwich on random pairs") {
    for (int rep = 0; rep < 25; ++rep) {
        const Matrix h = random_hermitian(12, derive_seed(1, {static_cast<std::uint64_t>(rep)}));
        const Matrix v = random_hermitian(12, derive_seed(2, {static_cast<std::uint64_t>(rep)}));
        const auto sh = dense_spectrum(h);
        const auto sv = dense_spectrum(v);
        const double vnorm =
            std::max(std::abs(sv.eigenvalues[0]), std::abs(sv.eigenvalues[11]));
        const auto shv = dense_spectrum(h + v);
        for (Index j = 0; j < 12; ++j) {
            const auto iv = weyl_interval(sh, vnorm, j);
            CHECK(shv.eigenvalues[j] >= iv.first - 1e-10);
            CHECK(shv.eigenvalues[j] <= iv.second + 1e-10);
        }
    }
}

TEST_CASE("dos histogram") {
    RealVector one(1);
    one << 0.5;
    const auto h1 = dos_histogram(one, 1);
    CHECK(h1.counts[0] == doctest::Approx(1.0));

    RealVector four(4);
    four << 0.0, 1.0, 2.0, 3.0;
    const auto h2 = dos_histogram(four, 2, std::make_pair(0.0, 4.0));
    CHECK(h2.counts[0] == doctest::Approx(0.5));
    CHECK(h2.counts[1] == doctest::Approx(0.5));

    const auto spec = random_spec(chain(10, false, 2), GaussianModel{1}, 5);
    const auto full = dense_spectrum(assemble_dense(spec));
    const auto h3 = dos_histogram(full.eigenvalues, 32);
    CHECK(h3.counts.sum() == doctest::Approx(1.0).epsilon(1e-12));

    RealVector empty;
    CHECK_THROWS_AS(dos_histogram(empty, 4), std::invalid_argument);
}

TEST_CASE("schmidt spectrum") {
    const auto g = chain(4, false, 2);
    // |0000>
    Vector product = Vector::Zero(16);
    product[0] = 1.0;
    const auto s1 = schmidt_spectrum(product, {0, 1}, g);
    CHECK(s1.singular_values[0] == doctest::Approx(1.0));
    CHECK(s1.entropy == doctest::Approx(0.0));

    // Bell pair on a 2-site chain
    const auto g2 = chain(2, false, 2);
    Vector bell = Vector::Zero(4);
    bell[0] = 1.0 / std::sqrt(2.0);
    bell[3] = 1.0 / std::sqrt(2.0);
    const auto s2 = schmidt_spectrum(bell, {0}, g2);
    CHECK(s2.singular_values[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s2.singular_values[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s2.entropy == doctest::Approx(std::log(2.0)));

    CHECK_THROWS_AS(schmidt_spectrum(product, {}, g), std::invalid_argument);
    CHECK_THROWS_AS(schmidt_spectrum(product, {0, 1, 2, 3}, g), std::invalid_argument);
}

TEST_CASE("schmidt entropy invariant under local unitaries") {
    const auto g = chain(5, false, 2);
    auto rng = make_rng(606);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector state(32);
    for (Index i = 0; i < 32; ++i) state[i] = Complex(normal(rng), normal(rng));
    state.normalize();
    const auto base = schmidt_spectrum(state, {0, 1}, g);

    // apply a Haar unitary on site 0 (left side of the cut)
    const Matrix u = sample_haar_eigenvectors(2, 2, 44);
    const Matrix u4 = oracles::kron(u, Matrix::Identity(2, 2));
    const Matrix full = oracles::embed_full(u4, 5, 2, 0, 1);
    const Vector rotated = full * state;
    const auto after = schmidt_spectrum(rotated, {0, 1}, g);
    CHECK(std::abs(after.entropy - base.entropy) < 1e-9);
}

TEST_CASE("lanczos/dense agreement on every instance up to 2^10") {
    for (int n : {6, 8, 10}) {
        const auto spec = random_spec(chain(n, false, 2), GaussianModel{2},
                                      derive_seed(4242, {static_cast<std::uint64_t>(n)}));
        const auto dense = dense_spectrum(assemble_dense(spec));
        LanczosOptions opts;
        opts.k = 4;
        opts.seed = 10;
        const auto lz = lanczos_lowest(spec_matvec(spec), spec.dim(), opts);
        REQUIRE(lz.converged);
        for (Index i = 0; i < 4; ++i)
            CHECK(std::abs(lz.eigenvalues[i] - dense.eigenvalues[i]) < 1e-8);
    }
}
