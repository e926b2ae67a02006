#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ccgibbs {

// Undirected simple graph with canonical (u < v) edge storage.
class Graph {
  public:
    struct Edge {
        int u, v; // u < v
    };

    Graph() = default;
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    int max_degree() const { return max_degree_; }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    bool adjacent(int u, int v) const;

    bool has_triangle() const;
    long long triangle_count() const;

    // Generators. Randomized ones are reproducible from the seed.
    static Graph path(int n);
    static Graph cycle(int n);
    static Graph complete(int n);
    static Graph star(int leaves);
    static Graph empty(int n);
    static Graph random_regular(int n, int d, std::uint64_t seed);
    static Graph gnp(int n, double p, std::uint64_t seed);

    // Edge-list text format: first line "n m", then m lines "u v" (0-indexed).
    static Graph read_edge_list(std::istream& in, const std::string& source_name = "<stream>");
    static Graph load_edge_list(const std::string& path);
    void write_edge_list(std::ostream& out) const;

  private:
    int n_ = 0;
    int max_degree_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_; // sorted neighbor lists
};

// Inline generator spec: path:N, cycle:N, kN, star:N, empty:N,
// reg:N:D:SEED, gnp:N:P:SEED, file:PATH.  A bare string that matches no
// generator form is treated as a file path.
Graph make_graph(const std::string& spec);

} // namespace ccgibbs
