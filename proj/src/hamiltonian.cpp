#include "gaplab/hamiltonian.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <Eigen/Eigenvalues>

#include "gaplab/rng.hpp"

namespace gaplab {

namespace {

double spectral_norm(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

Index pow_ll(int d, int n) {
    Index r = 1;
    for (int i = 0; i < n; ++i) r *= d;
    return r;
}

}  // namespace

LocalTerm::LocalTerm(Edge e, Matrix m) : edge(e), matrix(std::move(m)) {
    if (edge.first > edge.second) std::swap(edge.first, edge.second);
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("LocalTerm: matrix must be square");
    require_hermitian(matrix, "LocalTerm");
    norm = spectral_norm(matrix);
    if (!std::isfinite(norm)) throw std::invalid_argument("LocalTerm: non-finite entries");
}

HamiltonianSpec::HamiltonianSpec(InteractionGraph g, std::vector<LocalTerm> t)
    : graph(std::move(g)), terms(std::move(t)) {
    if (terms.size() != graph.edges().size())
        throw std::invalid_argument("HamiltonianSpec: one term per edge required");
    const Index d2 = static_cast<Index>(graph.local_dim()) * graph.local_dim();
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].edge != graph.edges()[i])
            throw std::invalid_argument("HamiltonianSpec: term/edge order mismatch");
        if (terms[i].matrix.rows() != d2)
            throw std::invalid_argument("HamiltonianSpec: term dimension must be d^2");
    }
}

Index HamiltonianSpec::dim() const { return pow_ll(graph.local_dim(), graph.num_sites()); }

double HamiltonianSpec::term_norm_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.norm;
    return s;
}

void PauliChainParams::validate() const {
    if (num_sites < 2) throw std::invalid_argument("PauliChainParams: num_sites must be >= 2");
    if (couplings.size() != static_cast<std::size_t>(num_sites - 1))
        throw std::invalid_argument("PauliChainParams: need 16 couplings per bond");
    for (const auto& bond : couplings)
        for (const auto& row : bond)
            for (double j : row)
                if (!std::isfinite(j))
                    throw std::invalid_argument("PauliChainParams: non-finite coupling");
}

const Matrix& pauli(int alpha) {
    static const std::array<Matrix, 4> sigma = [] {
        std::array<Matrix, 4> s;
        for (auto& m : s) m = Matrix::Zero(2, 2);
        s[0] << 1, 0, 0, 1;
        s[1] << 0, 1, 1, 0;
        s[2] << 0, Complex(0, -1), Complex(0, 1), 0;
        s[3] << 1, 0, 0, -1;
        return s;
    }();
    if (alpha < 0 || alpha > 3) throw std::invalid_argument("pauli: index must be 0..3");
    return sigma[static_cast<std::size_t>(alpha)];
}

void embed_term_apply(const LocalTerm& term, int n, int d, const Vector& x, Vector& y) {
    const int p = term.edge.first;
    const int q = term.edge.second;
    if (p < 0 || q >= n) throw std::invalid_argument("embed_term_apply: site out of range");
    const Index sp = pow_ll(d, n - 1 - p);
    const Index sq = pow_ll(d, n - 1 - q);
    const Index dim = pow_ll(d, n);
    if (x.size() != dim || y.size() != dim)
        throw std::invalid_argument("embed_term_apply: dimension mismatch");

    // Decompose an index as  high | digit p | mid | digit q | low.
    const Index n_high = pow_ll(d, p);
    const Index n_mid = pow_ll(d, q - p - 1);
    const Index n_low = sq;
    const Index high_mult = pow_ll(d, n - p);
    const Index mid_mult = pow_ll(d, n - q);
    const Matrix& t = term.matrix;
    for (Index hi = 0; hi < n_high; ++hi) {
        for (Index mid = 0; mid < n_mid; ++mid) {
            const Index base_hm = hi * high_mult + mid * mid_mult;
            for (Index lo = 0; lo < n_low; ++lo) {
                const Index base = base_hm + lo;
                for (int a = 0; a < d; ++a) {
                    for (int b = 0; b < d; ++b) {
                        const Index row = base + a * sp + b * sq;
                        Complex acc = 0.0;
                        const int tr = a * d + b;
                        for (int ap = 0; ap < d; ++ap)
                            for (int bp = 0; bp < d; ++bp)
                                acc += t(tr, ap * d + bp) * x[base + ap * sp + bp * sq];
                        y[row] += acc;
                    }
                }
            }
        }
    }
}

std::uint64_t dense_cap() {
    if (const char* env = std::getenv("GAPLAB_DENSE_CAP")) {
        const long long v = std::atoll(env);
        if (v > 0) return static_cast<std::uint64_t>(v);
    }
    return 1ULL << 13;
}

Matrix assemble_dense(const HamiltonianSpec& spec, std::uint64_t cap) {
    const Index dim = spec.dim();
    if (static_cast<std::uint64_t>(dim) > cap)
        throw CapExceededError("assemble_dense: d^n = " + std::to_string(dim) +
                               " exceeds dense cap " + std::to_string(cap));
    const int n = spec.graph.num_sites();
    const int d = spec.graph.local_dim();
    Matrix h = Matrix::Zero(dim, dim);
    for (const auto& term : spec.terms) {
        const int p = term.edge.first;
        const int q = term.edge.second;
        const Index sp = pow_ll(d, n - 1 - p);
        const Index sq = pow_ll(d, n - 1 - q);
        const Index n_high = pow_ll(d, p);
        const Index n_mid = pow_ll(d, q - p - 1);
        const Index n_low = sq;
        const Index high_mult = pow_ll(d, n - p);
        const Index mid_mult = pow_ll(d, n - q);
        const Matrix& t = term.matrix;
        for (Index hi = 0; hi < n_high; ++hi)
            for (Index mid = 0; mid < n_mid; ++mid)
                for (Index lo = 0; lo < n_low; ++lo) {
                    const Index base = hi * high_mult + mid * mid_mult + lo;
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b)
                            for (int ap = 0; ap < d; ++ap)
                                for (int bp = 0; bp < d; ++bp)
                                    h(base + a * sp + b * sq, base + ap * sp + bp * sq) +=
                                        t(a * d + b, ap * d + bp);
                }
    }
    return h;
}

Vector matvec(const HamiltonianSpec& spec, const Vector& x) {
    if (x.size() != spec.dim())
        throw std::invalid_argument("matvec: state dimension mismatch");
    Vector y = Vector::Zero(x.size());
    for (const auto& term : spec.terms)
        embed_term_apply(term, spec.graph.num_sites(), spec.graph.local_dim(), x, y);
    return y;
}

HamiltonianSpec pauli_chain(const PauliChainParams& params) {
    params.validate();
    InteractionGraph g = chain(params.num_sites, false, 2);
    std::vector<LocalTerm> terms;
    terms.reserve(params.couplings.size());
    for (std::size_t bond = 0; bond < params.couplings.size(); ++bond) {
        Matrix t = Matrix::Zero(4, 4);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const double j = params.couplings[bond][static_cast<std::size_t>(a)]
                                                       [static_cast<std::size_t>(b)];
                if (j == 0.0) continue;
                const Matrix& sa = pauli(a);
                const Matrix& sb = pauli(b);
                for (int r1 = 0; r1 < 2; ++r1)
                    for (int c1 = 0; c1 < 2; ++c1)
                        for (int r2 = 0; r2 < 2; ++r2)
                            for (int c2 = 0; c2 < 2; ++c2)
                                t(2 * r1 + r2, 2 * c1 + c2) += j * sa(r1, c1) * sb(r2, c2);
            }
        terms.emplace_back(g.edges()[bond], std::move(t));
    }
    return HamiltonianSpec(std::move(g), std::move(terms));
}

HamiltonianSpec random_spec(const InteractionGraph& graph, const TermModel& model,
                            std::uint64_t seed) {
    std::vector<LocalTerm> terms;
    terms.reserve(graph.edges().size());
    const int d2 = graph.local_dim() * graph.local_dim();
    for (const Edge& e : graph.edges()) {
        const std::uint64_t edge_seed =
            derive_seed(seed, {0x7465726dULL, static_cast<std::uint64_t>(e.first),
                               static_cast<std::uint64_t>(e.second)});
        Matrix m = std::visit(
            [&](const auto& mod) -> Matrix {
                using T = std::decay_t<decltype(mod)>;
                if constexpr (std::is_same_v<T, GaussianModel>) {
                    return sample_gaussian({d2, mod.beta, edge_seed});
                } else if constexpr (std::is_same_v<T, ProjectorModel>) {
                    int rank = mod.rank_min;
                    if (mod.rank_max < mod.rank_min)
                        throw std::invalid_argument("ProjectorModel: rank_max < rank_min");
                    if (mod.rank_max > mod.rank_min) {
                        auto rng = make_rng(derive_seed(edge_seed, {0x726bULL}));
                        std::uniform_int_distribution<int> pick(mod.rank_min, mod.rank_max);
                        rank = pick(rng);
                    }
                    return sample_projector(d2, rank, mod.beta, edge_seed);
                } else {
                    static_assert(std::is_same_v<T, DiscreteModel>);
                    return sample_discrete_term(d2, mod.law, mod.beta, edge_seed);
                }
            },
            model);
        terms.emplace_back(e, std::move(m));
    }
    return HamiltonianSpec(graph, std::move(terms));
}

}  // namespace gaplab
