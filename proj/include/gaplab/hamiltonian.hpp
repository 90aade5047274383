#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "gaplab/ensembles.hpp"
#include "gaplab/topology.hpp"
#include "gaplab/types.hpp"

namespace gaplab {

// Basis convention used everywhere: site 0 carries the MOST significant
// d-ary digit of a computational-basis index, so the full-space operator is
// O_0 (x) O_1 (x) ... (x) O_{n-1}.  A term on edge (i,j) with i < j is a
// d^2 x d^2 matrix indexed by a*d + b where a is the digit at site i.

/// Two-site interaction attached to an edge.  The operator norm is computed
/// once at construction.
struct LocalTerm {
    Edge edge;
    Matrix matrix;  // d^2 x d^2, Hermitian within 1e-12
    double norm = 0.0;

    LocalTerm(Edge e, Matrix m);
};

struct HamiltonianSpec {
    InteractionGraph graph;
    std::vector<LocalTerm> terms;  // bijective with graph.edges(), same order

    HamiltonianSpec(InteractionGraph g, std::vector<LocalTerm> t);

    Index dim() const;  // d^n
    double term_norm_sum() const;
};

/// Couplings of the d=2 open-chain Pauli expansion: 16 reals per bond,
/// J[bond][alpha][beta] multiplying sigma^alpha (x) sigma^beta.
struct PauliChainParams {
    int num_sites = 2;
    std::vector<std::array<std::array<double, 4>, 4>> couplings;  // one per bond

    void validate() const;
};

const Matrix& pauli(int alpha);  // sigma^0..sigma^3

/// y += (I (x) term (x) I) x without materializing the d^n matrix.
void embed_term_apply(const LocalTerm& term, int n, int d, const Vector& x, Vector& y);

std::uint64_t dense_cap();  // default 2^13, override with GAPLAB_DENSE_CAP

Matrix assemble_dense(const HamiltonianSpec& spec, std::uint64_t cap = dense_cap());

/// y = H x, matrix-free; term order fixed so results are bit-reproducible.
Vector matvec(const HamiltonianSpec& spec, const Vector& x);

HamiltonianSpec pauli_chain(const PauliChainParams& params);

struct GaussianModel {
    int beta = 2;
};
struct ProjectorModel {
    int rank_min = 0;  // uniform over [rank_min, rank_max]; fixed when equal
    int rank_max = 0;
    int beta = 2;
};
struct DiscreteModel {
    DiscreteSpectrumLaw law;
    int beta = 2;
};
using TermModel = std::variant<GaussianModel, ProjectorModel, DiscreteModel>;

/// Independent term per edge; the per-edge stream is derived from
/// (seed, sorted edge pair), so reordering the edge list leaves every
/// edge's term unchanged.
HamiltonianSpec random_spec(const InteractionGraph& graph, const TermModel& model,
                            std::uint64_t seed);

}  // namespace gaplab
