#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "structbo/kernel.hpp"

namespace structbo {

// Undirected graph on dimension indices. Edges mark dimensions that appear
// together in some sub-function of an additive objective.
class DependencyGraph {
public:
    DependencyGraph() = default;
    explicit DependencyGraph(int dims);

    int dims() const { return dims_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    void add_edge(int a, int b);
    bool has_edge(int a, int b) const;

    // Sorted (a, b) pairs with a < b.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool operator==(const DependencyGraph& o) const {
        return dims_ == o.dims_ && edges_ == o.edges_;
    }

private:
    int dims_ = 0;
    std::vector<std::pair<int, int>> edges_;       // kept sorted
    std::vector<std::vector<bool>> adjacency_;
};

// All maximal cliques (Bron-Kerbosch with pivoting). Isolated vertices come
// back as singletons, so the cliques always cover every dimension. Output is
// sorted for determinism.
std::vector<Clique> max_cliques(const DependencyGraph& graph);

// Size of the largest clique without materializing the full clique list.
int max_clique_size(const DependencyGraph& graph);

struct ErdosRenyiSpec {
    int dims = 0;
    double edge_prob = 0.0;
    std::uint64_t seed = 0;
};

DependencyGraph sample_er_graph(const ErdosRenyiSpec& spec);

}  // namespace structbo
