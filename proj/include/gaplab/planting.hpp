#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gaplab/hamiltonian.hpp"
#include "gaplab/spectra.hpp"

namespace gaplab {

enum class PlantKind { continuous_edge, projector_vertex, discrete_edge, dos_ladder };

std::string to_string(PlantKind kind);
PlantKind plant_kind_from_string(const std::string& s);

/// Metadata of one planted rare region, consumed by the certificate checkers.
struct PlantRecord {
    PlantKind kind = PlantKind::continuous_edge;
    Edge edge{-1, -1};   // planted edge for edge kinds
    int vertex = -1;     // r0 for projector_vertex
    double s = 0.0;      // planted splitting
    double eps = 0.0;    // perturbation scale; every ||dH|| <= eps
    int z = 0;           // neighborhood size at the location
    std::map<Edge, double> beta_shifts;  // distance-1 edge -> identity multiple
    int k_or_h = 0;                      // degeneracy order k / rank deficit h
    std::vector<double> lambda_atoms;    // discrete atoms when applicable
    double lambda0 = 0.0;                // lowest eigenvalue of the planted term
};

struct CertificateReport {
    PlantKind kind;
    std::string location;
    double eps = 0.0;
    int z = 0;
    double bound = 0.0;     // maximum deviation allowed by the Weyl argument
    double observed = 0.0;  // worst observed deviation
    bool pass = false;
};

/// Law for the identity multiples placed on distance-1 edges.
struct BetaShiftLaw {
    double lo = -1.0;
    double hi = 1.0;
};

/// Replaces the term at (p,q) by H0 + dH where H0 keeps the original
/// eigenbasis but has its two lowest eigenvalues exactly s apart (everything
/// else at least env_gap_floor above the bottom), and every distance-1 term
/// by beta*I + dH with ||dH|| = eps exactly.  Distance >= 2 terms untouched.
std::pair<HamiltonianSpec, PlantRecord> plant_continuous_region(
    const HamiltonianSpec& spec, Edge edge, double s, double eps, double env_gap_floor,
    std::uint64_t seed, const BetaShiftLaw& beta_law = {});

/// Checks Eq.-style Weyl certificate: both lowest eigenvalues of the planted
/// spec must lie in [center - B, center + s + B] with
/// center = lambda_E + sum beta + lambda0 and B = eps (z+1).
CertificateReport certificate_continuous(const HamiltonianSpec& planted,
                                         const PlantRecord& record,
                                         std::uint64_t cap = dense_cap());

/// Every star term at r0 becomes (projector with kernel dimension h on the
/// neighbor site) (x) I_{r0}, plus a norm-eps perturbation.
std::pair<HamiltonianSpec, PlantRecord> plant_projector_region(const HamiltonianSpec& spec,
                                                               int vertex, int h, double eps,
                                                               std::uint64_t seed);

/// The d lowest eigenvalues must sit within z*eps of the ground energy of
/// the eps = 0 companion (reconstructed from the record).
CertificateReport certificate_projector(const HamiltonianSpec& planted,
                                        const PlantRecord& record,
                                        std::uint64_t cap = dense_cap());

/// Term at (p,q) gets an exactly k-fold degenerate lowest eigenvalue with
/// atoms from `law` and Haar eigenvectors; distance-1 terms become exact
/// identity multiples with atom values.
std::pair<HamiltonianSpec, PlantRecord> plant_discrete_region(const HamiltonianSpec& spec,
                                                              Edge edge, int k,
                                                              const DiscreteSpectrumLaw& law,
                                                              std::uint64_t seed);

/// Ground degeneracy exactly k at tau = 1e-10 and product structure across
/// the {p,q} cut.
CertificateReport certificate_discrete(const HamiltonianSpec& planted,
                                       const PlantRecord& record,
                                       std::uint64_t cap = dense_cap());

/// plant_continuous_region at each edge with its own splitting; planted
/// neighborhoods must be pairwise disjoint.
std::pair<HamiltonianSpec, std::vector<PlantRecord>> plant_dos_ladder(
    const HamiltonianSpec& spec, const std::vector<Edge>& edges,
    const std::vector<double>& s_values, double eps, std::uint64_t seed,
    double env_gap_floor = 0.5, const BetaShiftLaw& beta_law = {});

}  // namespace gaplab
