#include "gaplab/topology.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace gaplab {

namespace {
Edge normalized(Edge e) {
    if (e.first > e.second) std::swap(e.first, e.second);
    return e;
}
}  // namespace

InteractionGraph::InteractionGraph(int num_sites, int local_dim, std::vector<Edge> edges,
                                   int degree_cap)
    : num_sites_(num_sites), local_dim_(local_dim), edges_(std::move(edges)) {
    if (num_sites_ < 1) throw std::invalid_argument("InteractionGraph: num_sites must be >= 1");
    if (local_dim_ < 2) throw std::invalid_argument("InteractionGraph: local_dim must be >= 2");
    degrees_.assign(static_cast<std::size_t>(num_sites_), 0);
    std::set<Edge> seen;
    for (auto& e : edges_) {
        e = normalized(e);
        if (e.first == e.second)
            throw std::invalid_argument("InteractionGraph: self-loop at site " +
                                        std::to_string(e.first));
        if (e.first < 0 || e.second >= num_sites_)
            throw std::invalid_argument("InteractionGraph: edge site out of range");
        if (!seen.insert(e).second)
            throw std::invalid_argument("InteractionGraph: duplicate edge");
        ++degrees_[static_cast<std::size_t>(e.first)];
        ++degrees_[static_cast<std::size_t>(e.second)];
    }
    max_degree_ = degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
    if (max_degree_ > degree_cap)
        throw std::invalid_argument("InteractionGraph: max degree " +
                                    std::to_string(max_degree_) + " exceeds cap " +
                                    std::to_string(degree_cap));
}

int InteractionGraph::edge_index(Edge e) const {
    e = normalized(e);
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i] == e) return static_cast<int>(i);
    return -1;
}

InteractionGraph chain(int num_sites, bool periodic, int local_dim) {
    if (num_sites < 2) throw std::invalid_argument("chain: num_sites must be >= 2");
    if (periodic && num_sites < 3)
        throw std::invalid_argument("chain: a ring needs at least 3 sites");
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < num_sites; ++i) edges.emplace_back(i, i + 1);
    if (periodic) edges.emplace_back(0, num_sites - 1);
    return InteractionGraph(num_sites, local_dim, std::move(edges));
}

InteractionGraph lattice(const std::vector<int>& sides, bool periodic, int local_dim) {
    if (sides.empty()) throw std::invalid_argument("lattice: need at least one dimension");
    long long total = 1;
    for (int L : sides) {
        if (L < 2) throw std::invalid_argument("lattice: every side must be >= 2");
        total *= L;
        if (total > (1LL << 30)) throw std::invalid_argument("lattice: too many sites");
    }
    const int dims = static_cast<int>(sides.size());
    const int n = static_cast<int>(total);
    // Site index: coordinate 0 is the most significant mixed-radix digit.
    std::vector<int> stride(static_cast<std::size_t>(dims), 1);
    for (int k = dims - 2; k >= 0; --k) stride[k] = stride[k + 1] * sides[k + 1];
    std::vector<Edge> edges;
    for (int s = 0; s < n; ++s) {
        for (int k = 0; k < dims; ++k) {
            const int coord = (s / stride[k]) % sides[k];
            if (coord + 1 < sides[k]) {
                edges.emplace_back(s, s + stride[k]);
            } else if (periodic && sides[k] > 2) {
                edges.emplace_back(s, s - coord * stride[k]);
            }
        }
    }
    const int cap = std::max(InteractionGraph::kDefaultDegreeCap, 2 * dims);
    return InteractionGraph(n, local_dim, std::move(edges), cap);
}

InteractionGraph square_lattice(int spatial_dim, int side, bool periodic, int local_dim) {
    if (spatial_dim < 1) throw std::invalid_argument("square_lattice: dimension must be >= 1");
    return lattice(std::vector<int>(static_cast<std::size_t>(spatial_dim), side), periodic,
                   local_dim);
}

EdgeNeighborhood edge_neighborhood(const InteractionGraph& g, Edge e) {
    e = {std::min(e.first, e.second), std::max(e.first, e.second)};
    if (g.edge_index(e) < 0) throw std::invalid_argument("edge_neighborhood: edge not in graph");
    EdgeNeighborhood nbhd;
    for (const Edge& f : g.edges()) {
        if (f == e) continue;
        const bool touches = f.first == e.first || f.first == e.second ||
                             f.second == e.first || f.second == e.second;
        (touches ? nbhd.distance1 : nbhd.distant).push_back(f);
    }
    return nbhd;
}

std::vector<Edge> vertex_star(const InteractionGraph& g, int v) {
    if (v < 0 || v >= g.num_sites())
        throw std::invalid_argument("vertex_star: vertex out of range");
    std::vector<Edge> star;
    for (const Edge& f : g.edges())
        if (f.first == v || f.second == v) star.push_back(f);
    return star;
}

}  // namespace gaplab
