#include "ccgibbs/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ccgibbs/errors.hpp"
#include "ccgibbs/rng.hpp"

namespace ccgibbs {

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n), adj_(n) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    std::set<std::pair<int, int>> seen;
    edges_.reserve(edges.size());
    for (auto [u, v] : edges) {
        if (u == v) throw std::invalid_argument("graph: self-loop rejected");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("graph: endpoint out of range");
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) throw std::invalid_argument("graph: duplicate edge");
        edges_.push_back({u, v});
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (auto& nb : adj_) {
        std::sort(nb.begin(), nb.end());
        max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));
    }
}

bool Graph::adjacent(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return false;
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

bool Graph::has_triangle() const { return triangle_count() > 0; }

long long Graph::triangle_count() const {
    long long count = 0;
    for (const auto& e : edges_) {
        const auto& a = adj_[e.u];
        const auto& b = adj_[e.v];
        // common neighbors above v keep each triangle counted once
        for (int w : a) {
            if (w > e.v && std::binary_search(b.begin(), b.end(), w)) ++count;
        }
    }
    return count;
}

Graph Graph::path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph(n, e);
}

Graph Graph::cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle: needs n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return Graph(n, e);
}

Graph Graph::complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.push_back({u, v});
    return Graph(n, e);
}

Graph Graph::star(int leaves) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
    return Graph(leaves + 1, e);
}

Graph Graph::empty(int n) { return Graph(n, {}); }

Graph Graph::random_regular(int n, int d, std::uint64_t seed) {
    if (d >= n || (static_cast<long long>(n) * d) % 2 != 0)
        throw std::invalid_argument("random_regular: need d < n and n*d even");
    if (d == 0) return Graph(n, {});
    // stub pairing; collisions are re-drawn and dead ends restart the pass
    for (std::uint64_t attempt = 0; attempt < 400; ++attempt) {
        RngStream rng(seed, {attempt, 0, RngTag::kGraphGen, 0});
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * d);
        for (int v = 0; v < n; ++v)
            for (int j = 0; j < d; ++j) stubs.push_back(v);
        std::set<std::pair<int, int>> seen;
        std::vector<std::pair<int, int>> e;
        bool dead_end = false;
        while (!stubs.empty() && !dead_end) {
            const int a = stubs.back();
            stubs.pop_back();
            for (int tries = 0;; ++tries) {
                if (tries > 200) { dead_end = true; break; }
                const auto idx = rng.next_below(static_cast<std::uint32_t>(stubs.size()));
                const int b = stubs[idx];
                if (b == a) continue;
                const auto key = std::minmax(a, b);
                if (seen.count({key.first, key.second})) continue;
                seen.insert({key.first, key.second});
                e.push_back({key.first, key.second});
                stubs[idx] = stubs.back();
                stubs.pop_back();
                break;
            }
        }
        if (!dead_end) return Graph(n, e);
    }
    throw std::runtime_error("random_regular: no simple pairing found");
}

Graph Graph::gnp(int n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gnp: p outside [0,1]");
    RngStream rng(seed, {0, 0, RngTag::kGraphGen, 1});
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.next_unit() < p) e.push_back({u, v});
    return Graph(n, e);
}

Graph Graph::read_edge_list(std::istream& in, const std::string& source_name) {
    auto fail = [&](int line, const std::string& what) {
        std::ostringstream os;
        os << source_name << ":" << line << ": " << what;
        throw IoError(os.str());
    };
    std::string line;
    int lineno = 0;
    int n = -1;
    long long m = -1;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        if (!(ls >> n >> m)) fail(lineno, "expected header 'n m'");
        break;
    }
    if (n < 0 || m < 0) fail(lineno == 0 ? 1 : lineno, "missing header 'n m'");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    while (static_cast<long long>(edges.size()) < m) {
        if (!std::getline(in, line)) fail(lineno, "unexpected end of file before m edges");
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u >> v)) fail(lineno, "expected edge 'u v'");
        edges.push_back({u, v});
    }
    try {
        return Graph(n, edges);
    } catch (const std::invalid_argument& ex) {
        fail(lineno, ex.what());
    }
    return Graph(); // unreachable
}

Graph Graph::load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file: " + path);
    return read_edge_list(in, path);
}

void Graph::write_edge_list(std::ostream& out) const {
    out << n_ << " " << edges_.size() << "\n";
    for (const auto& e : edges_) out << e.u << " " << e.v << "\n";
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

int parse_int(const std::string& s, const std::string& spec) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw IoError("bad graph spec '" + spec + "': integer expected, got '" + s + "'");
    }
}

} // namespace

Graph make_graph(const std::string& spec) {
    if (spec.size() >= 2 && (spec[0] == 'k' || spec[0] == 'K') &&
        spec.find_first_not_of("0123456789", 1) == std::string::npos) {
        return Graph::complete(parse_int(spec.substr(1), spec));
    }
    auto parts = split(spec, ':');
    const std::string& kind = parts[0];
    auto want = [&](std::size_t k) {
        if (parts.size() != k + 1)
            throw IoError("bad graph spec '" + spec + "': expected " + std::to_string(k) +
                          " parameter(s)");
    };
    if (kind == "path") { want(1); return Graph::path(parse_int(parts[1], spec)); }
    if (kind == "cycle") { want(1); return Graph::cycle(parse_int(parts[1], spec)); }
    if (kind == "star") { want(1); return Graph::star(parse_int(parts[1], spec)); }
    if (kind == "empty") { want(1); return Graph::empty(parse_int(parts[1], spec)); }
    if (kind == "reg") {
        want(3);
        return Graph::random_regular(parse_int(parts[1], spec), parse_int(parts[2], spec),
                                     static_cast<std::uint64_t>(parse_int(parts[3], spec)));
    }
    if (kind == "gnp") {
        want(3);
        double p = 0.0;
        try {
            p = std::stod(parts[2]);
        } catch (...) {
            throw IoError("bad graph spec '" + spec + "': probability expected");
        }
        return Graph::gnp(parse_int(parts[1], spec), p,
                          static_cast<std::uint64_t>(parse_int(parts[3], spec)));
    }
    if (kind == "file") { want(1); return Graph::load_edge_list(parts[1]); }
    if (parts.size() == 1) return Graph::load_edge_list(spec);
    throw IoError("unknown graph spec '" + spec + "'");
}

} // namespace ccgibbs
