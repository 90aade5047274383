#pragma once

#include <utility>
#include <vector>

#include "gaplab/types.hpp"

namespace gaplab {

using Edge = std::pair<int, int>;  // stored with first < second

/// Bounded-degree interaction graph with a uniform local dimension d at
/// every site.  Immutable after construction; edges keep their given order
/// (terms attach positionally) but each pair is normalized to first < second.
class InteractionGraph {
  public:
    static constexpr int kDefaultDegreeCap = 12;

    InteractionGraph(int num_sites, int local_dim, std::vector<Edge> edges,
                     int degree_cap = kDefaultDegreeCap);

    int num_sites() const { return num_sites_; }
    int local_dim() const { return local_dim_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int degree(int site) const { return degrees_.at(static_cast<std::size_t>(site)); }
    int max_degree() const { return max_degree_; }

    /// Index of an edge given in either orientation; -1 when absent.
    int edge_index(Edge e) const;

  private:
    int num_sites_;
    int local_dim_;
    std::vector<Edge> edges_;
    std::vector<int> degrees_;
    int max_degree_;
};

struct EdgeNeighborhood {
    std::vector<Edge> distance1;  // edges sharing a site with e; |distance1| is z
    std::vector<Edge> distant;    // everything else (distance >= 2)
};

/// Open chain (num_sites-1 edges) or ring (num_sites edges; needs >= 3 sites
/// so no edge duplicates itself).
InteractionGraph chain(int num_sites, bool periodic, int local_dim);

/// Nearest-neighbor lattice with per-dimension extents.  Periodic wrap edges
/// are skipped along directions of extent 2 (they would duplicate the open
/// edge).
InteractionGraph lattice(const std::vector<int>& sides, bool periodic, int local_dim);

/// L^D hypercubic lattice.
InteractionGraph square_lattice(int spatial_dim, int side, bool periodic, int local_dim);

EdgeNeighborhood edge_neighborhood(const InteractionGraph& g, Edge e);

/// All edges incident on v; its size is the z of the vertex-star plants.
std::vector<Edge> vertex_star(const InteractionGraph& g, int v);

}  // namespace gaplab
