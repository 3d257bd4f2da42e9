#include "structbo/graph.hpp"

#include <algorithm>

#include "structbo/rng.hpp"

namespace structbo {

DependencyGraph::DependencyGraph(int dims) : dims_(dims) {
    require(dims >= 0, "DependencyGraph: negative dimension count");
    adjacency_.assign(static_cast<std::size_t>(dims), std::vector<bool>(static_cast<std::size_t>(dims), false));
}

void DependencyGraph::add_edge(int a, int b) {
    require(a != b, "DependencyGraph: self-loops are not allowed");
    require(a >= 0 && b >= 0 && a < dims_ && b < dims_, "DependencyGraph: vertex out of range");
    if (a > b) std::swap(a, b);
    if (adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) return;
    adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    adjacency_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
    const auto e = std::make_pair(a, b);
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e);
}

bool DependencyGraph::has_edge(int a, int b) const {
    if (a == b || a < 0 || b < 0 || a >= dims_ || b >= dims_) return false;
    return adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

namespace {

struct BronKerbosch {
    const DependencyGraph& graph;
    const std::function<void(const std::vector<int>&)>& emit;
    std::vector<int> current;

    void run(std::vector<int> candidates, std::vector<int> excluded) {
        if (candidates.empty() && excluded.empty()) {
            emit(current);
            return;
        }
        // Pivot on the vertex with most candidate neighbours.
        int pivot = -1;
        int best = -1;
        for (const auto* pool : {&candidates, &excluded}) {
            for (int u : *pool) {
                int deg = 0;
                for (int v : candidates)
                    if (graph.has_edge(u, v)) ++deg;
                if (deg > best) {
                    best = deg;
                    pivot = u;
                }
            }
        }
        std::vector<int> branch;
        for (int v : candidates)
            if (!graph.has_edge(pivot, v)) branch.push_back(v);

        for (int v : branch) {
            std::vector<int> next_candidates;
            std::vector<int> next_excluded;
            for (int u : candidates)
                if (graph.has_edge(v, u)) next_candidates.push_back(u);
            for (int u : excluded)
                if (graph.has_edge(v, u)) next_excluded.push_back(u);
            current.push_back(v);
            run(std::move(next_candidates), std::move(next_excluded));
            current.pop_back();
            candidates.erase(std::find(candidates.begin(), candidates.end(), v));
            excluded.push_back(v);
        }
    }
};

void enumerate_max_cliques(const DependencyGraph& graph,
                           const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> all(static_cast<std::size_t>(graph.dims()));
    for (int i = 0; i < graph.dims(); ++i) all[static_cast<std::size_t>(i)] = i;
    BronKerbosch bk{graph, emit, {}};
    bk.run(std::move(all), {});
}

}  // namespace

std::vector<Clique> max_cliques(const DependencyGraph& graph) {
    std::vector<Clique> out;
    enumerate_max_cliques(graph, [&](const std::vector<int>& members) {
        std::vector<int> sorted = members;
        std::sort(sorted.begin(), sorted.end());
        out.emplace_back(std::move(sorted));
    });
    std::sort(out.begin(), out.end());
    return out;
}

int max_clique_size(const DependencyGraph& graph) {
    int best = 0;
    enumerate_max_cliques(graph, [&](const std::vector<int>& members) {
        best = std::max(best, static_cast<int>(members.size()));
    });
    return best;
}

DependencyGraph sample_er_graph(const ErdosRenyiSpec& spec) {
    require(spec.dims >= 0, "sample_er_graph: negative dimension count");
    require(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0, "sample_er_graph: edge_prob outside [0, 1]");
    DependencyGraph g(spec.dims);
    Rng rng = Rng::stream(spec.seed, /*tag=*/0x45524247ULL);  // "ERBG"
    for (int a = 0; a < spec.dims; ++a)
        for (int b = a + 1; b < spec.dims; ++b)
            if (rng.bernoulli(spec.edge_prob)) g.add_edge(a, b);
    return g;
}

}  // namespace structbo
