#include "gaplab/planting.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "gaplab/rng.hpp"

namespace gaplab {

std::string to_string(PlantKind kind) {
    switch (kind) {
        case PlantKind::continuous_edge: return "continuous_edge";
        case PlantKind::projector_vertex: return "projector_vertex";
        case PlantKind::discrete_edge: return "discrete_edge";
        case PlantKind::dos_ladder: return "dos_ladder";
    }
    throw std::invalid_argument("unknown PlantKind");
}

PlantKind plant_kind_from_string(const std::string& s) {
    if (s == "continuous_edge") return PlantKind::continuous_edge;
    if (s == "projector_vertex") return PlantKind::projector_vertex;
    if (s == "discrete_edge") return PlantKind::discrete_edge;
    if (s == "dos_ladder") return PlantKind::dos_ladder;
    throw std::invalid_argument("unknown PlantKind: " + s);
}

namespace {

/// Gaussian Hermitian direction rescaled to operator norm exactly eps, so
/// certificates are exercised at the boundary of their hypotheses.
Matrix perturbation_of_norm(int dim, double eps, std::uint64_t seed) {
    if (eps == 0.0) return Matrix::Zero(dim, dim);
    Matrix g = sample_gaussian({dim, 2, seed});
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    const double norm =
        std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
    return (eps / norm) * g;
}

std::string edge_str(Edge e) {
    return std::to_string(e.first) + "," + std::to_string(e.second);
}

/// Ground energy of the distance >= 2 remainder.  Sites outside the
/// remainder's support only contribute identity factors, so the minimum is
/// taken on the relabeled support subgraph (empty remainder has energy 0).
double environment_ground_energy(const HamiltonianSpec& spec, const std::set<Edge>& excluded,
                                 std::uint64_t cap) {
    std::vector<const LocalTerm*> kept;
    std::set<int> support;
    for (const auto& t : spec.terms) {
        if (excluded.count(t.edge)) continue;
        kept.push_back(&t);
        support.insert(t.edge.first);
        support.insert(t.edge.second);
    }
    if (kept.empty()) return 0.0;
    std::map<int, int> relabel;
    int next = 0;
    for (int s : support) relabel[s] = next++;
    std::vector<Edge> edges;
    std::vector<LocalTerm> terms;
    for (const LocalTerm* t : kept) {
        Edge e{relabel[t->edge.first], relabel[t->edge.second]};
        edges.push_back(e);
        terms.emplace_back(e, t->matrix);
    }
    InteractionGraph g(next, spec.graph.local_dim(), std::move(edges));
    HamiltonianSpec env(std::move(g), std::move(terms));
    const Matrix h = assemble_dense(env, cap);
    return dense_spectrum(h).eigenvalues[0];
}

double ground_energy(const HamiltonianSpec& spec, std::uint64_t cap) {
    const Matrix h = assemble_dense(spec, cap);
    return dense_spectrum(h).eigenvalues[0];
}

}  // namespace

std::pair<HamiltonianSpec, PlantRecord> plant_continuous_region(
    const HamiltonianSpec& spec, Edge edge, double s, double eps, double env_gap_floor,
    std::uint64_t seed, const BetaShiftLaw& beta_law) {
    if (edge.first > edge.second) std::swap(edge.first, edge.second);
    const int idx = spec.graph.edge_index(edge);
    if (idx < 0) throw std::invalid_argument("plant_continuous_region: edge not in graph");
    if (s < 0.0) throw std::invalid_argument("plant_continuous_region: s must be >= 0");
    if (eps < 0.0) throw std::invalid_argument("plant_continuous_region: eps must be >= 0");
    if (env_gap_floor < 0.0)
        throw std::invalid_argument("plant_continuous_region: env_gap_floor must be >= 0");

    const int d2 = spec.graph.local_dim() * spec.graph.local_dim();
    const auto nbhd = edge_neighborhood(spec.graph, edge);

    // H0 keeps the original term's eigenbasis; only the spectrum is edited:
    // lowest kept, second at lowest + s, the rest pushed above the floor.
    const Matrix& orig = spec.terms[static_cast<std::size_t>(idx)].matrix;
    Eigen::SelfAdjointEigenSolver<Matrix> es(orig);
    RealVector evals = es.eigenvalues();
    const double lambda0 = evals[0];
    const double floor = lambda0 + std::max(env_gap_floor, s);
    RealVector edited = evals;
    if (d2 >= 2) edited[1] = lambda0 + s;
    for (Index j = 2; j < edited.size(); ++j) edited[j] = std::max(evals[j], floor);
    Matrix h0 = es.eigenvectors() * edited.asDiagonal() * es.eigenvectors().adjoint();
    h0 = 0.5 * (h0 + h0.adjoint());

    PlantRecord record;
    record.kind = PlantKind::continuous_edge;
    record.edge = edge;
    record.s = s;
    record.eps = eps;
    record.z = static_cast<int>(nbhd.distance1.size());
    record.lambda0 = lambda0;

    std::vector<LocalTerm> terms = spec.terms;
    terms[static_cast<std::size_t>(idx)] =
        LocalTerm(edge, h0 + perturbation_of_norm(d2, eps, derive_seed(seed, {0x70657274ULL})));

    auto beta_rng = [&](Edge e) {
        return derive_seed(seed, {0x62657461ULL, static_cast<std::uint64_t>(e.first),
                                  static_cast<std::uint64_t>(e.second)});
    };
    for (const Edge& e : nbhd.distance1) {
        auto rng = make_rng(beta_rng(e));
        std::uniform_real_distribution<double> unif(beta_law.lo, beta_law.hi);
        const double beta = unif(rng);
        record.beta_shifts[e] = beta;
        const int eidx = spec.graph.edge_index(e);
        terms[static_cast<std::size_t>(eidx)] = LocalTerm(
            e, beta * Matrix::Identity(d2, d2) +
                   perturbation_of_norm(d2, eps,
                                        derive_seed(seed, {0x64656c74ULL,
                                                           static_cast<std::uint64_t>(e.first),
                                                           static_cast<std::uint64_t>(e.second)})));
    }
    return {HamiltonianSpec(spec.graph, std::move(terms)), record};
}

CertificateReport certificate_continuous(const HamiltonianSpec& planted,
                                         const PlantRecord& record, std::uint64_t cap) {
    if (record.kind != PlantKind::continuous_edge)
        throw std::invalid_argument("certificate_continuous: record kind mismatch");
    std::set<Edge> excluded{record.edge};
    for (const auto& [e, b] : record.beta_shifts) excluded.insert(e);
    const double lambda_env = environment_ground_energy(planted, excluded, cap);
    double beta_sum = 0.0;
    for (const auto& [e, b] : record.beta_shifts) beta_sum += b;

    const double center = lambda_env + beta_sum + record.lambda0;
    const double bound = record.eps * (record.z + 1);

    const Matrix h = assemble_dense(planted, cap);
    const Spectrum full = dense_spectrum(h);
    const double slack = 1e-9 * std::max(1.0, std::abs(center) + record.s);

    // Worst excursion of the two lowest eigenvalues outside the unperturbed
    // interval [center, center + s]; the Weyl argument allows at most B.
    double observed = 0.0;
    for (Index j = 0; j < 2 && j < full.eigenvalues.size(); ++j) {
        const double l = full.eigenvalues[j];
        observed = std::max({observed, center - l, l - (center + record.s)});
    }
    CertificateReport report;
    report.kind = record.kind;
    report.location = edge_str(record.edge);
    report.eps = record.eps;
    report.z = record.z;
    report.bound = bound;
    report.observed = observed;
    report.pass = observed <= bound + slack;
    return report;
}

std::pair<HamiltonianSpec, PlantRecord> plant_projector_region(const HamiltonianSpec& spec,
                                                               int vertex, int h, double eps,
                                                               std::uint64_t seed) {
    const int d = spec.graph.local_dim();
    if (h < 1 || h > d - 1)
        throw std::invalid_argument("plant_projector_region: h must satisfy 1 <= h <= d-1");
    if (eps < 0.0) throw std::invalid_argument("plant_projector_region: eps must be >= 0");
    const auto star = vertex_star(spec.graph, vertex);
    if (star.empty())
        throw std::invalid_argument("plant_projector_region: vertex has no incident edges");
    const int d2 = d * d;

    // pi = diag(0 x h, 1 x (d-h)) on the neighbor factor, identity on r0.
    Matrix pi = Matrix::Zero(d, d);
    for (int i = h; i < d; ++i) pi(i, i) = 1.0;

    std::vector<LocalTerm> terms = spec.terms;
    for (const Edge& e : star) {
        Matrix term = Matrix::Zero(d2, d2);
        const bool r0_first = e.first == vertex;  // r0 carries the first digit
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                // index a*d+b: a = digit at e.first, b = digit at e.second
                const double val = r0_first ? pi(b, b).real() : pi(a, a).real();
                term(a * d + b, a * d + b) = val;
            }
        term += perturbation_of_norm(
            d2, eps,
            derive_seed(seed, {0x70726f6aULL, static_cast<std::uint64_t>(e.first),
                               static_cast<std::uint64_t>(e.second)}));
        terms[static_cast<std::size_t>(spec.graph.edge_index(e))] = LocalTerm(e, std::move(term));
    }

    PlantRecord record;
    record.kind = PlantKind::projector_vertex;
    record.vertex = vertex;
    record.eps = eps;
    record.z = static_cast<int>(star.size());
    record.k_or_h = h;
    record.lambda0 = 0.0;
    return {HamiltonianSpec(spec.graph, std::move(terms)), record};
}

CertificateReport certificate_projector(const HamiltonianSpec& planted,
                                        const PlantRecord& record, std::uint64_t cap) {
    if (record.kind != PlantKind::projector_vertex)
        throw std::invalid_argument("certificate_projector: record kind mismatch");
    if (record.vertex < 0 || record.vertex >= planted.graph.num_sites())
        throw std::invalid_argument("certificate_projector: companion spec unavailable");
    const int d = planted.graph.local_dim();

    // Companion eps = 0 spec: star terms reset to the exact projector form.
    auto [companion, rec0] =
        plant_projector_region(planted, record.vertex, record.k_or_h, 0.0, 0);
    const double lambda_e0 = ground_energy(companion, cap);

    const Matrix h = assemble_dense(planted, cap);
    const Spectrum full = dense_spectrum(h);
    const double bound = record.z * record.eps;
    const double slack = 1e-9 * std::max(1.0, std::abs(lambda_e0));

    double worst = 0.0;
    for (Index k = 0; k < d && k < full.eigenvalues.size(); ++k)
        worst = std::max(worst, std::abs(full.eigenvalues[k] - lambda_e0));

    CertificateReport report;
    report.kind = record.kind;
    report.location = std::to_string(record.vertex);
    report.eps = record.eps;
    report.z = record.z;
    report.bound = bound;
    report.observed = worst;
    report.pass = worst <= bound + slack;
    return report;
}

std::pair<HamiltonianSpec, PlantRecord> plant_discrete_region(const HamiltonianSpec& spec,
                                                              Edge edge, int k,
                                                              const DiscreteSpectrumLaw& law,
                                                              std::uint64_t seed) {
    if (edge.first > edge.second) std::swap(edge.first, edge.second);
    law.validate();
    const int idx = spec.graph.edge_index(edge);
    if (idx < 0) throw std::invalid_argument("plant_discrete_region: edge not in graph");
    const int d2 = spec.graph.local_dim() * spec.graph.local_dim();
    if (k < 1 || k > d2)
        throw std::invalid_argument("plant_discrete_region: k must satisfy 1 <= k <= d^2");
    if (k < d2 && law.atoms.size() < 2)
        throw std::invalid_argument(
            "plant_discrete_region: need a second atom for the non-degenerate levels");

    const double a_min = law.atoms[0];
    std::vector<LocalTerm> terms = spec.terms;
    if (k == d2) {
        terms[static_cast<std::size_t>(idx)] =
            LocalTerm(edge, a_min * Matrix::Identity(d2, d2));
    } else {
        // Remaining eigenvalues i.i.d. from the law conditioned on > a_min.
        std::vector<double> upper_atoms(law.atoms.begin() + 1, law.atoms.end());
        std::vector<double> upper_probs(law.probs.begin() + 1, law.probs.end());
        auto rng = make_rng(derive_seed(seed, {0x64697363ULL}));
        std::discrete_distribution<int> pick(upper_probs.begin(), upper_probs.end());
        RealVector evals(d2);
        for (int i = 0; i < k; ++i) evals[i] = a_min;
        for (int i = k; i < d2; ++i)
            evals[i] = upper_atoms[static_cast<std::size_t>(pick(rng))];
        Matrix u = sample_haar_eigenvectors(d2, 2, derive_seed(seed, {0x68616172ULL}));
        Matrix m = u * evals.asDiagonal() * u.adjoint();
        terms[static_cast<std::size_t>(idx)] = LocalTerm(edge, 0.5 * (m + m.adjoint()));
    }

    PlantRecord record;
    record.kind = PlantKind::discrete_edge;
    record.edge = edge;
    record.eps = 0.0;
    record.k_or_h = k;
    record.lambda_atoms = law.atoms;
    record.lambda0 = a_min;

    const auto nbhd = edge_neighborhood(spec.graph, edge);
    record.z = static_cast<int>(nbhd.distance1.size());
    auto rng = make_rng(derive_seed(seed, {0x6e626872ULL}));
    std::discrete_distribution<int> pick(law.probs.begin(), law.probs.end());
    for (const Edge& e : nbhd.distance1) {
        const double atom = law.atoms[static_cast<std::size_t>(pick(rng))];
        record.beta_shifts[e] = atom;
        terms[static_cast<std::size_t>(spec.graph.edge_index(e))] =
            LocalTerm(e, atom * Matrix::Identity(d2, d2));
    }
    return {HamiltonianSpec(spec.graph, std::move(terms)), record};
}

CertificateReport certificate_discrete(const HamiltonianSpec& planted,
                                       const PlantRecord& record, std::uint64_t cap) {
    if (record.kind != PlantKind::discrete_edge)
        throw std::invalid_argument("certificate_discrete: record kind mismatch");
    const Matrix h = assemble_dense(planted, cap);
    const Spectrum full = dense_spectrum(h, true);
    const auto clusters = cluster_distinct(full.eigenvalues, 1e-10);

    // Ground degeneracy exactly k (environment ground state generically
    // simple) and a product ground state across the planted pair.
    const bool degeneracy_ok = clusters[0].multiplicity == record.k_or_h;
    std::set<int> cut{record.edge.first, record.edge.second};
    double max_entropy = 0.0;
    for (int g = 0; g < clusters[0].multiplicity; ++g) {
        const Vector state = full.eigenvectors->col(g);
        max_entropy = std::max(max_entropy, schmidt_spectrum(state, cut, planted.graph).entropy);
    }
    CertificateReport report;
    report.kind = record.kind;
    report.location = edge_str(record.edge);
    report.eps = 0.0;
    report.z = record.z;
    report.bound = 1e-8;
    report.observed = max_entropy;
    report.pass = degeneracy_ok && max_entropy < 1e-8;
    return report;
}

std::pair<HamiltonianSpec, std::vector<PlantRecord>> plant_dos_ladder(
    const HamiltonianSpec& spec, const std::vector<Edge>& edges,
    const std::vector<double>& s_values, double eps, std::uint64_t seed, double env_gap_floor,
    const BetaShiftLaw& beta_law) {
    if (edges.size() != s_values.size())
        throw std::invalid_argument("plant_dos_ladder: one splitting per edge required");
    if (edges.empty()) throw std::invalid_argument("plant_dos_ladder: no edges given");

    // Planted neighborhoods (edge plus its distance-1 shell) must be disjoint.
    std::set<Edge> closures;
    for (Edge e : edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
        const auto nbhd = edge_neighborhood(spec.graph, e);
        std::vector<Edge> closure = nbhd.distance1;
        closure.push_back(e);
        for (const Edge& c : closure)
            if (!closures.insert(c).second)
                throw std::invalid_argument(
                    "plant_dos_ladder: planted neighborhoods overlap at edge " + edge_str(c));
    }

    HamiltonianSpec current = spec;
    std::vector<PlantRecord> records;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [next, rec] = plant_continuous_region(
            current, edges[i], s_values[i], eps, env_gap_floor,
            derive_seed(seed, {0x6c616464ULL, static_cast<std::uint64_t>(i)}), beta_law);
        current = std::move(next);
        records.push_back(std::move(rec));
    }
    return {std::move(current), std::move(records)};
}

}  // namespace gaplab
