#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "gaplab/hamiltonian.hpp"
#include "gaplab/rng.hpp"
#include "oracles.hpp"

using namespace gaplab;

namespace {

Vector random_state(Index dim, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = Complex(normal(rng), normal(rng));
    return v;
}

}  // namespace

TEST_CASE("embed_term_apply against the dense delta-construction oracle") {
    // two sites: the action is the bare term
    {
        const Matrix t = sample_gaussian({4, 2, 5});
        const LocalTerm term({0, 1}, t);
        const Vector x = random_state(4, 1);
        Vector y = Vector::Zero(4);
        embed_term_apply(term, 2, 2, x, y);
        CHECK((y - t * x).cwiseAbs().maxCoeff() < 1e-12);
    }
    // identity term acts as identity
    {
        const LocalTerm term({1, 3}, Matrix::Identity(4, 4));
        const Vector x = random_state(32, 2);
        Vector y = Vector::Zero(32);
        embed_term_apply(term, 5, 2, x, y);
        CHECK((y - x).cwiseAbs().maxCoeff() < 1e-12);
    }
    // non-adjacent sites, n = 6
    {
        const Matrix t = sample_gaussian({4, 2, 77});
        const LocalTerm term({2, 4}, t);
        const Matrix full = oracles::embed_full(t, 6, 2, 2, 4);
        for (int rep = 0; rep < 20; ++rep) {
            const Vector x = random_state(64, 100 + static_cast<std::uint64_t>(rep));
            Vector y = Vector::Zero(64);
            embed_term_apply(term, 6, 2, x, y);
            CHECK((y - full * x).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    // d = 3
    {
        const Matrix t = sample_gaussian({9, 2, 13});
        const LocalTerm term({0, 2}, t);
        const Matrix full = oracles::embed_full(t, 4, 3, 0, 2);
        const Vector x = random_state(81, 55);
        Vector y = Vector::Zero(81);
        embed_term_apply(term, 4, 3, x, y);
        CHECK((y - full * x).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("assemble_dense basics") {
    const auto g = chain(4, false, 2);
    std::vector<LocalTerm> zeros;
    for (const Edge& e : g.edges()) zeros.emplace_back(e, Matrix::Zero(4, 4));
    CHECK(assemble_dense(HamiltonianSpec(g, zeros)).cwiseAbs().maxCoeff() == 0.0);

    std::vector<LocalTerm> ones;
    for (const Edge& e : g.edges()) ones.emplace_back(e, Matrix::Identity(4, 4));
    const Matrix h = assemble_dense(HamiltonianSpec(g, ones));
    CHECK((h - 3.0 * Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);

    // 2-site spec: assembled spectrum equals the raw term spectrum
    const Matrix t = sample_gaussian({4, 2, 6});
    const auto g2 = chain(2, false, 2);
    const Matrix h2 = assemble_dense(HamiltonianSpec(g2, {LocalTerm({0, 1}, t)}));
    Eigen::SelfAdjointEigenSolver<Matrix> a(h2, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> b(t, Eigen::EigenvaluesOnly);
    CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(assemble_dense(HamiltonianSpec(g, ones), 8), CapExceededError);
}

TEST_CASE("matvec agrees with dense assembly") {
    const auto spec = random_spec(chain(6, false, 2), GaussianModel{2}, 99);
    const Matrix h = assemble_dense(spec);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector x = random_state(64, 7000 + static_cast<std::uint64_t>(rep));
        CHECK((matvec(spec, x) - h * x).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(matvec(spec, Vector::Zero(64)).cwiseAbs().maxCoeff() == 0.0);

    // linearity
    const Vector x = random_state(64, 1);
    const Vector y = random_state(64, 2);
    const Complex a(0.3, -1.2), b(-2.0, 0.7);
    const Vector lhs = matvec(spec, a * x + b * y);
    const Vector rhs = a * matvec(spec, x) + b * matvec(spec, y);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);

    Vector wrong(8);
    CHECK_THROWS_AS(matvec(spec, wrong), std::invalid_argument);
}

TEST_CASE("quadratic form is real and the norm bound holds") {
    const auto spec = random_spec(chain(7, false, 2), GaussianModel{1}, 123);
    const Matrix h = assemble_dense(spec);
    for (int rep = 0; rep < 10; ++rep) {
        const Vector x = random_state(128, 9000 + static_cast<std::uint64_t>(rep));
        const Complex q = x.dot(matvec(spec, x));
        CHECK(std::abs(q.imag()) < 1e-10 * std::abs(q.real() + 1.0));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const double opnorm =
        std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
    CHECK(opnorm <= spec.term_norm_sum() + 1e-9);
}

TEST_CASE("pauli_chain pinned bonds") {
    {
        PauliChainParams p;
        p.num_sites = 2;
        p.couplings.assign(1, {});
        p.couplings[0][3][3] = 1.0;  // Ising ZZ
        const auto spec = pauli_chain(p);
        Matrix expected = Matrix::Zero(4, 4);
        expected(0, 0) = 1;
        expected(1, 1) = -1;
        expected(2, 2) = -1;
        expected(3, 3) = 1;
        CHECK((spec.terms[0].matrix - expected).cwiseAbs().maxCoeff() < 1e-14);
    }
    {
        PauliChainParams p;
        p.num_sites = 3;
        p.couplings.assign(2, {});
        p.couplings[0][0][0] = 2.5;
        p.couplings[1][0][0] = 2.5;
        const auto spec = pauli_chain(p);
        CHECK((spec.terms[0].matrix - 2.5 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
              1e-14);
    }
    {
        PauliChainParams p;
        p.num_sites = 2;
        p.couplings.assign(1, {});
        p.couplings[0][1][2] = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(pauli_chain(p), std::invalid_argument);
    }
}

TEST_CASE("pauli_chain matches an independent Kronecker assembly") {
    PauliChainParams p;
    p.num_sites = 3;
    p.couplings.assign(2, {});
    auto rng = make_rng(321);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& bond : p.couplings)
        for (auto& row : bond)
            for (double& j : row) j = normal(rng);

    const Matrix h = assemble_dense(pauli_chain(p));

    // oracle: explicit kron chain with its own Pauli definitions
    Matrix sx(2, 2), sy(2, 2), sz(2, 2), id(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, Complex(0, -1), Complex(0, 1), 0;
    sz << 1, 0, 0, -1;
    id << 1, 0, 0, 1;
    const std::array<Matrix, 4> sigma{id, sx, sy, sz};
    Matrix expected = Matrix::Zero(8, 8);
    for (int bond = 0; bond < 2; ++bond)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                Matrix term = p.couplings[static_cast<std::size_t>(bond)]
                                         [static_cast<std::size_t>(a)]
                                         [static_cast<std::size_t>(b)] *
                              oracles::kron(sigma[static_cast<std::size_t>(a)],
                                            sigma[static_cast<std::size_t>(b)]);
                expected += bond == 0 ? oracles::kron(term, id) : oracles::kron(id, term);
            }
    CHECK((h - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("random_spec models") {
    const auto g = chain(4, false, 2);
    // projector at full rank gives H = N I
    const auto ident = random_spec(g, ProjectorModel{4, 4, 2}, 5);
    const Matrix h = assemble_dense(ident);
    CHECK((h - 3.0 * Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);

    // per-edge seeds survive edge reordering
    const auto fwd = random_spec(g, GaussianModel{2}, 777);
    InteractionGraph reversed(4, 2, {{2, 3}, {1, 2}, {0, 1}});
    const auto rev = random_spec(reversed, GaussianModel{2}, 777);
    for (const auto& t : fwd.terms) {
        const int j = reversed.edge_index(t.edge);
        REQUIRE(j >= 0);
        CHECK((t.matrix - rev.terms[static_cast<std::size_t>(j)].matrix)
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }

    // discrete model keeps local spectra inside the atom set
    DiscreteSpectrumLaw law{{0.0, 1.0}, {0.5, 0.5}};
    const auto disc = random_spec(g, DiscreteModel{law, 2}, 8);
    for (const auto& t : disc.terms) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(t.matrix, Eigen::EigenvaluesOnly);
        for (Index i = 0; i < 4; ++i) {
            const double l = es.eigenvalues()[i];
            CHECK(std::min(std::abs(l), std::abs(l - 1.0)) < 1e-10);
        }
    }
}

TEST_CASE("dense/matvec equivalence across n and d") {
    for (int d : {2, 3}) {
        for (int n = 2; n <= (d == 2 ? 8 : 5); ++n) {
            const auto spec = random_spec(
                chain(n, false, d), GaussianModel{2},
                derive_seed(1000, {static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(n)}));
            const Matrix h = assemble_dense(spec);
            CHECK(is_hermitian(h, 1e-10));
            const Vector x = random_state(h.rows(), 3);
            CHECK((matvec(spec, x) - h * x).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}
